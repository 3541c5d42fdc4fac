"""Exhaustive enumeration of rigid no-negative-end building configurations.

A building is a stack of levels of curve components, every component
confined to a leaf hypersurface, with negative ends of each level
matched bijectively to positive ends of the level below, no negative
ends at the bottom, and the unmatched top ends as its asymptotics.
Configurations are enumerated as shapes: orbit data is recorded by
type (surface critical point, base critical point, covering
multiplicity) and same-type critical points are not distinguished;
non-cylindrical leaves carry a twin flavor bit, and enumeration emits
the canonical flavor of each twin family.

Component menus implement the structural facts of the model:

* no component has an asymptote at a contractible orbit, so there are
  no planes anywhere;
* components never cross the dividing set, and the ends of a component
  confined to one leaf sit over that leaf's critical points;
* in a left symplectization leaf every zero-energy curve is a trivial
  cylinder and every cylinder is trivial in the leaf identification;
* every right-side symplectization component is a cover of a flow-line
  cylinder or of an orbit cylinder, with branching data realizable by
  an actual branched cover;
* main-level components live in page-like leaves, have positive ends
  only, and satisfy the non-negative-index bound of a generic
  semi-filling;
* covers of nonconstant flow-line cylinders glue along orbits whose
  leaf index is even (the convention pinning the published counts; see
  the run manifest).

The total index of a configuration is one, recomputed through the
index calculus from the orbit data, never trusted from construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .covers import BranchProfile
from .errors import ConfigurationError, InternalError, NoTwinError
from .indexcalc import (PunctureProfile, fredholm_index_from_cz, normal_index,
                        obstruction_rank, regularity_transfer)
from .model import (BASE_INDEX, BASE_MAX, BASE_MIN, BASE_SADDLE, FLOW_LEFT,
                    FLOW_RIGHT, Leaf, ModelConfig, OrbitType, PAGE_HYP_MIN,
                    PAGE_MAX_HYP, PAGE_MAX_MIN, SIGMA_HYP_LEFT,
                    SIGMA_HYP_RIGHT, SIGMA_MAX, SIGMA_MIN)

CASE_PLANE = "plane"
CASE_CYLINDER = "cylinder_two_positive"
CASE_TORUS = "torus_one_positive"


@dataclass(frozen=True, order=True)
class Component:
    """One curve component confined to a leaf."""

    leaf: Leaf
    genus: int
    pos: Tuple[OrbitType, ...]
    neg: Tuple[OrbitType, ...]
    trivial: bool = False
    cover_base: Optional[Tuple[str, ...]] = None
    degree: int = 1

    @property
    def index_ambient(self) -> int:
        return fredholm_index_from_cz(
            2, 0, 0, [o.cz_ambient for o in self.pos],
            [o.cz_ambient for o in self.neg])

    @property
    def profile(self) -> PunctureProfile:
        pos = [0, 0, 0]
        neg = [0, 0, 0]
        for o in self.pos:
            pos[o.sigma_index] += 1
        for o in self.neg:
            neg[o.sigma_index] += 1
        return PunctureProfile(genus=self.genus, pos=tuple(pos),
                               neg=tuple(neg))

    @property
    def side(self) -> str:
        return (self.pos + self.neg)[0].side

    def label(self) -> str:
        bits = ["g%d" % self.genus, self.leaf.label()]
        if self.trivial:
            bits.append("trivial")
        if self.cover_base is not None and self.degree > 1:
            bits.append("deg%d over %s" % (self.degree,
                                           ":".join(self.cover_base)))
        ends = "+".join(o.label() for o in self.pos)
        if self.neg:
            ends += " / -" + ",-".join(o.label() for o in self.neg)
        return "%s [%s]" % (ends, " ".join(bits))


Edge = Tuple[int, int, int, OrbitType, int]
# (lower level index, lower component position, upper component position,
#  orbit type, strand multiplicity)


@dataclass(frozen=True)
class Building:
    """A complete configuration: levels, matching edges, audit data."""

    levels: Tuple[Tuple[Component, ...], ...]
    edges: Tuple[Edge, ...]

    @property
    def components(self) -> List[Component]:
        return [c for level in self.levels for c in level]

    @property
    def total_index(self) -> int:
        return sum(c.index_ambient for c in self.components)

    @property
    def top_ends(self) -> Tuple[OrbitType, ...]:
        return tuple(sorted(itertools.chain.from_iterable(
            c.pos for c in self.levels[-1])))

    @property
    def positive_end_count(self) -> int:
        return len(self.top_ends)

    @property
    def arithmetic_genus(self) -> int:
        v = len(self.components)
        e = sum(mult for *_ignored, mult in self.edges)
        return sum(c.genus for c in self.components) + e - v + 1

    @property
    def twistable(self) -> bool:
        return any(c.leaf.twistable for c in self.components)

    def case_label(self) -> str:
        g, r = self.arithmetic_genus, self.positive_end_count
        if (g, r) == (0, 1):
            return CASE_PLANE
        if (g, r) == (0, 2):
            return CASE_CYLINDER
        if (g, r) == (1, 1):
            return CASE_TORUS
        raise ConfigurationError("no case label for genus %d with %d ends"
                                 % (g, r))

    def key(self):
        return (self.levels, self.edges)


def twin(cfg: ModelConfig, b: Building) -> Building:
    """Flip the twin flavor of every non-cylindrical leaf."""
    if not b.twistable:
        raise NoTwinError("configuration has no flow-line or page-like leaf")
    new_levels = tuple(
        tuple(Component(leaf=c.leaf.twin() if c.leaf.twistable else c.leaf,
                        genus=c.genus, pos=c.pos, neg=c.neg,
                        trivial=c.trivial, cover_base=c.cover_base,
                        degree=c.degree)
              for c in level)
        for level in b.levels)
    return Building(levels=new_levels, edges=b.edges)


# ---------------------------------------------------------------------------
# component menu


def _cover_partitions(degree: int):
    if degree == 1:
        yield ((1,), (1,))
        return
    parts = []

    def partitions(n, largest):
        if n == 0:
            yield ()
            return
        for first in range(min(n, largest), 0, -1):
            for rest in partitions(n - first, first):
                yield (first,) + rest

    for up in partitions(degree, degree):
        for down in partitions(degree, degree):
            parts.append((up, down))
    yield from parts


def _realizable_cover(degree: int, up: Tuple[int, ...], down: Tuple[int, ...],
                      genus_cap: int) -> List[int]:
    """Genera of connected covers of an orbit cylinder with these ends."""
    punctures = len(up) + len(down)
    out = []
    # chi(S) = -Z and chi(S) = 2 - 2g - punctures
    for genus in range(genus_cap + 1):
        z = 2 * genus - 2 + punctures
        if z < 0:
            continue
        bp = BranchProfile(degree=degree, interior_vanishing=z,
                           puncture_multiplicities=up + down,
                           base_punctures=2, base_euler=0)
        if bp.is_realizable() and bp.cover_genus == genus:
            out.append(genus)
    return out


def _left_symplectization(cfg: ModelConfig) -> List[Component]:
    out = []
    leaves = [Leaf("cyl", SIGMA_MIN), Leaf("cyl", SIGMA_HYP_LEFT),
              Leaf("flow1", FLOW_LEFT)]
    for leaf in leaves:
        if leaf.kind == "cyl":
            up_type = down_type = leaf.name
        else:
            up_type, down_type = SIGMA_MIN, SIGMA_HYP_LEFT
        for genus in range(cfg.max_genus_component + 1):
            for n_pos in range(1, cfg.max_ends_per_component + 1):
                for n_neg in range(0, cfg.max_ends_per_component + 1 - n_pos):
                    total = n_pos + n_neg
                    if genus == 0 and total == 1:
                        continue            # plane at a loop orbit
                    leaf_index = 2 * genus + total - 2
                    is_trivial_shape = (genus == 0 and n_pos == 1
                                        and n_neg == 1
                                        and leaf.kind == "cyl")
                    if leaf_index == 0 and not is_trivial_shape \
                            and leaf.kind == "cyl":
                        continue            # zero-energy, must be trivial
                    if leaf_index == 0 and leaf.kind == "flow1" \
                            and (genus, n_pos, n_neg) != (0, 1, 1):
                        continue
                    if leaf.kind == "flow1" and total >= 3 \
                            and not cfg.allow_flowline_pants:
                        continue
                    cover_cap = (1 if cfg.left_covers_as_classes
                                 else cfg.cover_threshold)
                    for covers in itertools.product(
                            range(1, cover_cap + 1), repeat=total):
                        pos = tuple(sorted(OrbitType(up_type, cover=c)
                                           for c in covers[:n_pos]))
                        neg = tuple(sorted(OrbitType(down_type, cover=c)
                                           for c in covers[n_pos:]))
                        if is_trivial_shape and pos[0].cover != neg[0].cover:
                            continue
                        if leaf.kind == "flow1" and (genus, n_pos, n_neg) \
                                == (0, 1, 1) and pos[0].cover != neg[0].cover:
                            continue
                        out.append(Component(
                            leaf=leaf, genus=genus, pos=pos, neg=neg,
                            trivial=is_trivial_shape))
    return out


def _right_symplectization(cfg: ModelConfig) -> List[Component]:
    out = []
    flow_bases = [("flow", BASE_MAX, BASE_SADDLE),
                  ("flow", BASE_SADDLE, BASE_MIN),
                  ("flow", BASE_MAX, BASE_MIN)]
    if cfg.flow_cover_attach_even_only:
        flow_bases = [fb for fb in flow_bases if fb[2] == BASE_SADDLE]
    trivial_bases = [("orbit", q) for q in (BASE_MIN, BASE_SADDLE, BASE_MAX)]
    placements = [
        (Leaf("cyl", SIGMA_HYP_RIGHT), SIGMA_HYP_RIGHT, SIGMA_HYP_RIGHT),
        (Leaf("cyl", SIGMA_MAX), SIGMA_MAX, SIGMA_MAX),
        (Leaf("flow1", FLOW_RIGHT), SIGMA_MAX, SIGMA_HYP_RIGHT),
    ]
    for leaf, up_sigma, down_sigma in placements:
        for base in flow_bases + trivial_bases:
            if base[0] == "flow":
                q_up, q_down = base[1], base[2]
            else:
                q_up = q_down = base[1]
            for degree in range(1, cfg.cover_threshold + 1):
                for up, down in set(_cover_partitions(degree)):
                  for genus in _realizable_cover(degree, up, down,
                                                 cfg.max_genus_component):
                    branched = (len(up) + len(down) != 2 * degree
                                or genus > 0)
                    if base[0] == "orbit" and branched \
                            and not cfg.allow_branched_trivial_covers:
                        continue
                    is_trivial_shape = (base[0] == "orbit"
                                        and leaf.kind == "cyl"
                                        and up == (degree,)
                                        and down == (degree,))
                    if base[0] == "orbit" and leaf.kind == "cyl" \
                            and not branched and not is_trivial_shape:
                        continue   # disconnected unbranched orbit cover
                    pos = tuple(sorted(OrbitType(up_sigma, q_up, k)
                                       for k in up))
                    neg = tuple(sorted(OrbitType(down_sigma, q_down, k)
                                       for k in down))
                    out.append(Component(
                        leaf=leaf, genus=genus, pos=pos, neg=neg,
                        trivial=is_trivial_shape,
                        cover_base=tuple(base), degree=degree))
    return out


def _main_level(cfg: ModelConfig) -> List[Component]:
    out = []
    # page-like leaves reachable from each active endpoint
    endpoint_pages = {
        SIGMA_MIN: [PAGE_HYP_MIN] + ([PAGE_MAX_MIN]
                                     if cfg.allow_generic_crossing_pages
                                     else []),
        SIGMA_HYP_LEFT: [PAGE_MAX_HYP],
        SIGMA_HYP_RIGHT: [PAGE_HYP_MIN],
        SIGMA_MAX: [PAGE_MAX_HYP] + ([PAGE_MAX_MIN]
                                     if cfg.allow_generic_crossing_pages
                                     else []),
    }
    for endpoint, pages in endpoint_pages.items():
        left = endpoint in (SIGMA_MIN, SIGMA_HYP_LEFT)
        for page in pages:
            leaf = Leaf("page", page)
            for genus in range(cfg.max_genus_component + 1):
                for n in range(1, cfg.max_ends_per_component + 1):
                    if genus == 0 and n == 1:
                        continue        # plane at a loop orbit
                    if left:
                        base_choices = [(None,) * n]
                    else:
                        base_choices = itertools.combinations_with_replacement(
                            (BASE_MIN, BASE_SADDLE, BASE_MAX), n)
                    for bases in base_choices:
                        for covers in itertools.product(
                                range(1, cfg.cover_threshold + 1), repeat=n):
                            pos = tuple(sorted(
                                OrbitType(endpoint, bases[i], covers[i])
                                for i in range(n)))
                            comp = Component(leaf=leaf, genus=genus,
                                             pos=pos, neg=())
                            # index in the semi-filling must be non-negative
                            leafish = 2 * genus + n - 2 + sum(
                                o.cz_leaf for o in pos)
                            if leafish < 0:
                                continue
                            out.append(comp)
    return out


def component_menu(cfg: ModelConfig) -> List[Component]:
    """Every admissible component type within the configured bounds."""
    seen = {}
    for comp in (_left_symplectization(cfg) + _right_symplectization(cfg)
                 + _main_level(cfg)):
        if sum((o.action(cfg) for o in comp.pos), Fraction(0)) \
                > cfg.action_threshold:
            continue
        seen.setdefault((comp.leaf, comp.genus, comp.pos, comp.neg,
                         comp.trivial, comp.cover_base, comp.degree), comp)
    return sorted(seen.values())


# ---------------------------------------------------------------------------
# assembly


def _multiset(ends: Iterable[OrbitType]) -> Tuple[Tuple[OrbitType, int], ...]:
    counts: Dict[OrbitType, int] = {}
    for o in ends:
        counts[o] = counts.get(o, 0) + 1
    return tuple(sorted(counts.items()))


def _margin_matrices(rows: Sequence[int], cols: Sequence[int]):
    """All non-negative integer matrices with the given margins."""
    if not rows:
        yield ()
        return
    first, rest = rows[0], rows[1:]

    def splits(total, caps):
        if not caps:
            if total == 0:
                yield ()
            return
        for take in range(min(total, caps[0]), -1, -1):
            for tail in splits(total - take, caps[1:]):
                yield (take,) + tail

    for row in splits(first, tuple(cols)):
        remaining = tuple(c - r for c, r in zip(cols, row))
        for tail in _margin_matrices(rest, remaining):
            yield (row,) + tail


def _level_matchings(lower: Sequence[Component], upper: Sequence[Component],
                     level_idx: int):
    """All matchings between lower positives and upper negatives."""
    lower_av = [_multiset(c.pos) for c in lower]
    upper_need = [_multiset(c.neg) for c in upper]
    types = sorted({t for ms in lower_av + upper_need for t, _ in ms})
    per_type_choices = []
    for t in types:
        rows = [dict(ms).get(t, 0) for ms in lower_av]
        cols = [dict(ms).get(t, 0) for ms in upper_need]
        if sum(rows) != sum(cols):
            return
        choices = []
        for matrix in _margin_matrices(rows, cols):
            edges = tuple((level_idx, i, j, t, matrix[i][j])
                          for i in range(len(lower))
                          for j in range(len(upper)) if matrix[i][j])
            choices.append(edges)
        per_type_choices.append(choices)
    for combo in itertools.product(*per_type_choices):
        yield tuple(e for group in combo for e in group)


def _connected(levels, edges) -> bool:
    ids = {}
    for k, level in enumerate(levels):
        for i, _ in enumerate(level):
            ids[(k, i)] = (k, i)

    def find(x):
        while ids[x] != x:
            ids[x] = ids[ids[x]]
            x = ids[x]
        return x

    for (k, i, j, _t, _m) in edges:
        a, b = find((k, i)), find((k + 1, j))
        if a != b:
            ids[a] = b
    roots = {find(x) for x in ids}
    return len(roots) <= 1


def _canonical(building: Building) -> Building:
    """Least representative over permutations of identical components."""
    best = None
    level_perms = []
    for level in building.levels:
        perms = [p for p in itertools.permutations(range(len(level)))
                 if tuple(level[i] for i in p) == tuple(sorted(level))]
        level_perms.append(perms)
    sorted_levels = tuple(tuple(sorted(level)) for level in building.levels)
    for combo in itertools.product(*level_perms):
        remap = [{old: new for new, old in enumerate(p)} for p in combo]
        edges = tuple(sorted((k, remap[k][i], remap[k + 1][j], t, m)
                             for (k, i, j, t, m) in building.edges))
        cand = (sorted_levels, edges)
        if best is None or cand < best:
            best = cand
    return Building(levels=best[0], edges=best[1])


def _flow_attach_ok(cfg: ModelConfig, upper: Component) -> bool:
    """Covers of nonconstant flow cylinders glue along even leaf index."""
    if not cfg.flow_cover_attach_even_only:
        return True
    if upper.cover_base is None or upper.cover_base[0] != "flow":
        return True
    return all(o.cz_leaf % 2 == 0 for o in upper.neg)


def enumerate_buildings(cfg: ModelConfig, genus: int, ends: int
                        ) -> List[Building]:
    """All index-one configurations with the given genus and end count."""
    if genus + ends > 2:
        raise ConfigurationError("enumeration covers genus + ends <= 2")
    menu = component_menu(cfg)
    bottoms = [c for c in menu if not c.neg]
    uppers = [c for c in menu if c.neg and c.leaf.kind != "page"
              and _flow_attach_ok(cfg, c)]
    results: Dict[Tuple, Building] = {}

    def emit(levels, edges):
        b = Building(levels=tuple(tuple(lv) for lv in levels),
                     edges=tuple(edges))
        if b.total_index != 1:
            return
        if b.positive_end_count != ends:
            return
        if not _connected(b.levels, b.edges):
            return
        if b.arithmetic_genus != genus:
            return
        if sum((o.action(cfg) for o in b.top_ends), Fraction(0)) \
                > cfg.action_threshold:
            return
        # stability: no level of trivial cylinders only
        for level in b.levels:
            if all(c.trivial for c in level):
                return
        # shapes are primitive in the covering multiplicities
        covers = [o.cover for c in b.components for o in c.pos + c.neg]
        if covers:
            g = covers[0]
            for c in covers[1:]:
                while c:
                    g, c = c, g % c
            if g > 1:
                return
        cb = _canonical(b)
        results.setdefault(cb.key(), cb)

    def level_choices(need: Dict[OrbitType, int], room: int):
        """Multisets of upper components consuming exactly ``need``.

        Each step must cover the least open end type, which keeps the
        search narrow; duplicate orderings collapse in the canonical
        form of the finished configuration.
        """
        if all(v == 0 for v in need.values()):
            yield ()
            return
        if room == 0:
            return
        target = min(t for t, v in need.items() if v > 0)
        for cand in uppers:
            counts = _multiset(cand.neg)
            if not any(t == target for t, _ in counts):
                continue
            if any(need.get(t, 0) < m for t, m in counts):
                continue
            rest = dict(need)
            for t, m in counts:
                rest[t] -= m
            for tail in level_choices(rest, room - 1):
                yield (cand,) + tail

    def extend(levels, edges, open_pos):
        emit(levels, edges)
        if len(levels) >= cfg.max_levels:
            return
        used = sum(len(lv) for lv in levels)
        room = min(cfg.max_components - used, cfg.max_components_per_level)
        if room <= 0:
            return
        need = dict(_multiset(open_pos))
        if not need:
            return
        for combo in level_choices(need, room):
            level = tuple(sorted(combo))
            for match in _level_matchings(levels[-1], level,
                                          len(levels) - 1):
                new_open = list(itertools.chain.from_iterable(
                    c.pos for c in level))
                extend(levels + [level], edges + list(match), new_open)

    total_budget = cfg.action_threshold
    for size in range(1, cfg.max_components_per_level + 1):
        for combo in itertools.combinations_with_replacement(bottoms, size):
            opens = list(itertools.chain.from_iterable(c.pos for c in combo))
            if sum((o.action(cfg) for o in opens), Fraction(0)) \
                    > total_budget:
                continue
            if any(c.trivial for c in combo):
                continue     # a trivial cylinder cannot sit at the bottom
            level = tuple(sorted(combo))
            extend([level], [], opens)

    ordered = sorted(results.values(), key=lambda b: _sort_key(b))
    return ordered


def _sort_key(b: Building):
    return (tuple(tuple(c.label() for c in lv) for lv in b.levels), b.edges)


# ---------------------------------------------------------------------------
# audits, classification, pairing


def classify_case(b: Building) -> str:
    return b.case_label()


def check_constraints(cfg: ModelConfig, b: Building) -> Tuple[bool, str]:
    """Re-audit the structural facts on a finished configuration."""
    for c in b.components:
        sides = {o.side for o in c.pos + c.neg}
        if len(sides) > 1:
            return False, "component crosses the dividing set"
        if c.genus == 0 and len(c.pos) + len(c.neg) == 1:
            return False, "plane at a non-contractible orbit"
        if c.side == "left" and c.leaf.kind != "page":
            if (c.genus, len(c.pos), len(c.neg)) == (0, 1, 1) \
                    and not (c.trivial or c.leaf.kind == "flow1"):
                return False, "nontrivial cylinder in a left leaf"
        if c.side == "right" and c.leaf.kind != "page" \
                and c.cover_base is None:
            return False, "right symplectization component is not a cover"
        if c.leaf.kind == "page" and c.neg:
            return False, "main-level component with a negative end"
    if b.total_index != 1:
        return False, "total index is not one"
    for level in b.levels:
        if all(c.trivial for c in level):
            return False, "level of trivial cylinders only"
    return True, ""


@dataclass(frozen=True)
class ObstructionAudit:
    component: str
    leaf_rank: int
    normal_index: int
    dim_ker: int
    rank: int
    regular: bool


def obstruction_data(b: Building) -> List[ObstructionAudit]:
    """Regularity and obstruction-rank audit per component.

    Trivial cylinders are regular and skipped.  A component regular in
    its leaf transfers to the ambient model when the genus-zero
    puncture criterion holds, or when its leaf is cylindrical (the
    normal operator is then injective and of non-positive index).
    Otherwise the component is not-too-bad with the stated rank.
    """
    out = []
    for c in b.components:
        if c.trivial:
            continue
        profile = c.profile
        ind_n = normal_index(profile)
        dim_ker = c.leaf.dim_ker_normal
        transfers = regularity_transfer(profile, True)
        if not transfers and c.leaf.kind == "cyl" and ind_n <= 0:
            transfers = True     # injective normal operator, zero cokernel
        if transfers and ind_n == 0 and dim_ker == 0:
            out.append(ObstructionAudit(c.label(), 0, ind_n, dim_ker, 0,
                                        True))
            continue
        rank = obstruction_rank(0, ind_n, dim_ker)
        out.append(ObstructionAudit(c.label(), 0, ind_n, dim_ker, rank,
                                    rank == 0))
    return out


def sporadic_signature(cfg: ModelConfig) -> Building:
    """The canonical unpaired configuration: a one-ended genus-one curve
    in the cylindrical leaf over the minimum."""
    comp = Component(leaf=Leaf("cyl", SIGMA_MIN), genus=1,
                     pos=(OrbitType(SIGMA_MIN),), neg=())
    return Building(levels=((comp,),), edges=())


def is_sporadic(cfg: ModelConfig, b: Building) -> bool:
    return b.key() == sporadic_signature(cfg).key()


@dataclass(frozen=True)
class Pairing:
    pairs: Tuple[Tuple[Building, Building], ...]
    unpaired: Tuple[Building, ...]


def pair_cancellation(cfg: ModelConfig, buildings: Sequence[Building],
                      convention: str = "twins-identified") -> Pairing:
    """Partition configurations into cancelling twin pairs and leftovers.

    Under the default convention each enumerated configuration stands
    for a twin family and its cancelling partner is the flavor flip,
    which is a distinct concrete configuration not separately listed.
    Under "twins-distinct" the input is expected to contain both
    flavors and partners are matched inside the list.
    """
    if convention not in ("twins-identified", "twins-distinct"):
        raise ConfigurationError("unknown pairing convention %r"
                                 % (convention,))
    pairs = []
    unpaired = []
    if convention == "twins-identified":
        for b in buildings:
            if b.twistable:
                pairs.append((b, twin(cfg, b)))
            else:
                unpaired.append(b)
        return Pairing(tuple(pairs), tuple(unpaired))
    by_key = {b.key(): b for b in buildings}
    done = set()
    for b in buildings:
        if b.key() in done:
            continue
        if not b.twistable:
            unpaired.append(b)
            done.add(b.key())
            continue
        partner = twin(cfg, b)
        got = by_key.get(partner.key())
        if got is None:
            raise ConfigurationError(
                "twin of a listed configuration is missing from the input")
        pairs.append((b, got))
        done.add(b.key())
        done.add(got.key())
    return Pairing(tuple(pairs), tuple(unpaired))


def expand_flavors(cfg: ModelConfig, buildings: Sequence[Building]
                   ) -> List[Building]:
    """Both twin flavors of every twistable configuration."""
    out = []
    for b in buildings:
        out.append(b)
        if b.twistable:
            out.append(twin(cfg, b))
    return out


# ---------------------------------------------------------------------------
# serialization


def orbit_to_dict(o: OrbitType) -> Dict:
    out = {"sigma": o.sigma, "cover": o.cover}
    if o.base is not None:
        out["base"] = o.base
    return out


def component_to_dict(c: Component) -> Dict:
    out = {
        "leaf": {"kind": c.leaf.kind, "name": c.leaf.name,
                 "flavor": c.leaf.flavor},
        "genus": c.genus,
        "positive": [orbit_to_dict(o) for o in c.pos],
        "negative": [orbit_to_dict(o) for o in c.neg],
        "trivial": c.trivial,
        "index": c.index_ambient,
    }
    if c.cover_base is not None:
        out["cover_of"] = list(c.cover_base)
        out["degree"] = c.degree
    return out


def building_to_dict(cfg: ModelConfig, b: Building,
                     ident: Optional[int] = None) -> Dict:
    ok, violation = check_constraints(cfg, b)
    entry = {
        "case": b.case_label(),
        "levels": [[component_to_dict(c) for c in level]
                   for level in b.levels],
        "matching": [{"level": k, "lower": i, "upper": j,
                      "orbit": orbit_to_dict(t), "strands": m}
                     for (k, i, j, t, m) in b.edges],
        "index_total": b.total_index,
        "arithmetic_genus": b.arithmetic_genus,
        "positive_ends": [orbit_to_dict(o) for o in b.top_ends],
        "action_total": sum((o.action(cfg) for o in b.top_ends),
                            Fraction(0)),
        "constraints_ok": ok,
        "twistable": b.twistable,
        "sporadic": is_sporadic(cfg, b),
        "obstruction": [
            {"component": a.component, "normal_index": a.normal_index,
             "dim_ker": a.dim_ker, "rank": a.rank, "regular": a.regular}
            for a in obstruction_data(b)],
    }
    if ident is not None:
        entry["id"] = ident
    return entry


def classification_document(cfg: ModelConfig, genus: int, ends: int,
                            convention: str = "twins-identified") -> Dict:
    listed = enumerate_buildings(cfg, genus, ends)
    if convention == "twins-distinct":
        listed = expand_flavors(cfg, listed)
        listed = sorted(listed, key=_sort_key)
    pairing = pair_cancellation(cfg, listed, convention)
    entries = [building_to_dict(cfg, b, ident=i)
               for i, b in enumerate(listed)]
    return {
        "schema": 1,
        "genus": genus,
        "positive_ends": ends,
        "convention": convention,
        "entries": entries,
        "summary": {
            "configurations": len(entries),
            "pairs": len(pairing.pairs),
            "unpaired": len(pairing.unpaired),
            "sporadic": sum(1 for b in pairing.unpaired
                            if is_sporadic(cfg, b)),
        },
    }


def model_count_table_entries(cfg: ModelConfig, sporadic_value: Fraction
                              ) -> List[Dict]:
    """Signed per-configuration count contributions of the model.

    Every twin pair carries opposite contributions on the same key and
    cancels exactly; the sporadic configuration contributes the given
    nonzero value on its one-generator key at genus one.  The returned
    list keeps the cancelling entries explicit so their exact collapse
    is visible to consumers.
    """
    cfg = cfg
    buildings = enumerate_buildings(cfg, 1, 1) + enumerate_buildings(
        cfg, 0, 2)
    rows: List[Dict] = []
    for b in buildings:
        key = {
            "genus": b.arithmetic_genus,
            "positive": ["q_" + o.label() for o in b.top_ends],
            "negative": [],
        }
        if is_sporadic(cfg, b):
            rows.append(dict(key, value=sporadic_value,
                             origin="sporadic"))
        else:
            rows.append(dict(key, value=Fraction(1), origin="twin+"))
            rows.append(dict(key, value=Fraction(-1), origin="twin-"))
    return rows
