"""Branched-cover arithmetic for super-rigidity of index-zero curves.

A degree-d holomorphic branched cover between punctured Riemann
surfaces is summarized by its degree, the vanishing order of its
differential at interior points, and the multiset of multiplicities at
the punctures upstairs.  For an underlying somewhere-injective curve of
index zero whose asymptotics have vanishing Conley-Zehnder index, the
punctured adjunction formula turns these data into a budget for twice
the count of double points of a normal-kernel cover curve.  A negative
budget is a contradiction, which forces injectivity of the normal
operator over profiles with non-negative Euler characteristic and
positive total branching.

All rational quantities are exact ``fractions.Fraction`` values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .errors import ConfigurationError

VERDICT_INJECTIVE = "injective_forced"
VERDICT_INCONCLUSIVE = "inconclusive"
UNBRANCHED_NOTE = "unbranched regime: covered by the regularity statement " \
                  "for unbranched multiple covers"


@dataclass(frozen=True)
class BranchProfile:
    """Combinatorial shadow of a branched cover of a punctured curve.

    ``puncture_multiplicities`` lists the local multiplicity at every
    puncture upstairs (a multiset, stored sorted); their sum must be
    degree times the number of punctures downstairs.
    """

    degree: int
    interior_vanishing: int
    puncture_multiplicities: Tuple[int, ...]
    base_punctures: int
    base_euler: int

    def __post_init__(self):
        if self.degree < 1:
            raise ConfigurationError("degree must be >= 1")
        if self.interior_vanishing < 0:
            raise ConfigurationError("interior vanishing must be >= 0")
        if self.base_punctures < 1:
            raise ConfigurationError("need at least one puncture downstairs")
        if any(k < 1 for k in self.puncture_multiplicities):
            raise ConfigurationError("puncture multiplicities are >= 1")
        object.__setattr__(self, "puncture_multiplicities",
                           tuple(sorted(self.puncture_multiplicities)))
        if sum(self.puncture_multiplicities) != self.degree * self.base_punctures:
            raise ConfigurationError(
                "multiplicities must sum to degree * base punctures")

    @property
    def cover_punctures(self) -> int:
        return len(self.puncture_multiplicities)

    @property
    def cover_euler(self) -> int:
        return riemann_hurwitz(self.degree, self.base_euler,
                               self.interior_vanishing)

    @property
    def cover_genus(self) -> int:
        return (2 - self.cover_punctures - self.cover_euler) // 2

    def is_realizable(self) -> bool:
        """Necessary arithmetic conditions for a connected cover domain.

        The Euler characteristic upstairs must close up to an integer
        non-negative genus, no local multiplicity may exceed the
        degree, and a degree-one map has no interior vanishing.  Pure
        formula evaluation (budgets, branching) stays available on
        profiles that fail these.
        """
        if any(k > self.degree for k in self.puncture_multiplicities):
            return False
        if self.degree == 1 and self.interior_vanishing != 0:
            return False
        genus_doubled = 2 - self.cover_punctures - self.cover_euler
        return genus_doubled >= 0 and genus_doubled % 2 == 0


def riemann_hurwitz(degree: int, base_euler: int, interior_vanishing: int) -> int:
    """Euler characteristic of the cover domain: d*chi - Z."""
    return degree * base_euler - interior_vanishing


def total_branching(bp: BranchProfile) -> int:
    """Interior branching plus branching at the punctures."""
    at_punctures = bp.degree * bp.base_punctures - bp.cover_punctures
    return bp.interior_vanishing + at_punctures


def self_intersection_multiple(degree: int, base_euler: int) -> Fraction:
    """Self-intersection number of a degree-d cover of an index-zero
    curve with vanishing asymptotic Conley-Zehnder indices.

    The underlying curve satisfies chi + 2*c1(normal) = 0, so the cover
    pairs with itself to -d^2 * chi / 2.  Half-integral only when chi
    is odd, which the caller may flag.
    """
    return Fraction(-degree * degree * base_euler, 2)


def double_point_budget(bp: BranchProfile) -> Fraction:
    """Twice the double-point count of a normal-kernel cover curve.

    Equals d(1-d)/2 * chi(base) - total branching; must be >= 0 for
    such a curve to exist, since double-point counts are non-negative.
    """
    d = bp.degree
    return (Fraction(d * (1 - d), 2) * bp.base_euler
            - Fraction(total_branching(bp)))


def double_point_budget_from_counts(bp: BranchProfile) -> Fraction:
    """Same budget assembled from the raw puncture counts.

    Kept as a distinct evaluation path so the two can be compared on
    every enumerated profile.
    """
    d = bp.degree
    return (Fraction(d * (1 - d), 2) * bp.base_euler
            - bp.interior_vanishing
            + bp.cover_punctures - d * bp.base_punctures)


@dataclass(frozen=True)
class RigidityVerdict:
    verdict: str
    budget: Fraction
    note: str = ""


def super_rigidity_verdict(bp: BranchProfile) -> RigidityVerdict:
    """Decide whether the profile forces injectivity of the normal
    operator of the cover.

    The caller asserts that the underlying curve has index zero and
    vanishing asymptotic Conley-Zehnder indices.  With non-negative
    base Euler characteristic and strictly positive total branching the
    budget is negative and no nonzero kernel element can exist.  The
    unbranched case is governed by a separate regularity statement and
    reported as such.
    """
    branching = total_branching(bp)
    budget = double_point_budget(bp)
    if branching == 0:
        return RigidityVerdict(VERDICT_INCONCLUSIVE, budget, UNBRANCHED_NOTE)
    if bp.base_euler >= 0:
        if budget >= 0:
            raise ConfigurationError(
                "positive branching with chi >= 0 must give a negative "
                "budget; got %s" % (budget,))
        return RigidityVerdict(VERDICT_INJECTIVE, budget)
    return RigidityVerdict(VERDICT_INCONCLUSIVE, budget)


def _fiber_partitions(degree: int) -> List[Tuple[int, ...]]:
    """All partitions of ``degree`` (multiplicities over one puncture)."""
    result = []

    def rec(remaining, largest, acc):
        if remaining == 0:
            result.append(tuple(acc))
            return
        for part in range(min(remaining, largest), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(degree, degree, [])
    return result


def enumerate_branch_profiles(degree: int, base_euler: int,
                              base_punctures: int,
                              max_interior: int) -> List[BranchProfile]:
    """All valid profiles for the given degree and base topology.

    Picks a partition of the degree over every base puncture and an
    interior vanishing order up to ``max_interior``; profiles that fail
    an arithmetic invariant (non-integral or negative cover genus) are
    skipped.  Profiles are deduplicated on the flat multiplicity
    multiset and returned in a deterministic order.
    """
    if degree < 1:
        raise ConfigurationError("degree must be >= 1")
    profiles = {}
    parts = _fiber_partitions(degree)
    for combo in itertools.product(parts, repeat=base_punctures):
        flat = tuple(sorted(itertools.chain.from_iterable(combo)))
        for z in range(max_interior + 1):
            bp = BranchProfile(degree=degree, interior_vanishing=z,
                               puncture_multiplicities=flat,
                               base_punctures=base_punctures,
                               base_euler=base_euler)
            if bp.is_realizable():
                profiles[(flat, z)] = bp
    return [profiles[key] for key in sorted(profiles)]
