"""Model data for the five-dimensional product contact manifold.

Closed Reeb orbits of low action sit over critical points of a Morse
function on the dividing surface; on the left side of the dividing set
they also carry a closed geodesic class of the base, on the right side
a critical point of a Morse function on the base.  Leaves of the
holomorphic foliation come in three kinds: cylindrical over a critical
point, flow-line leaves over an index-one flow segment staying on one
side, and page-like leaves over a flow segment crossing the dividing
set.  Every flow-line or page-like leaf belongs to a two-element twin
family (a saddle has exactly two separatrices to each neighbouring
extremum), recorded here as a flavor bit.

The bundled fixture uses the smallest admissible data: three dividing
circles, the minimal Morse functions on both surface pieces, a base
surface of genus two with a minimal Morse function, and one geodesic
orbit class per side orientation.  Thresholds are chosen so double
covers of a single end fit the action budget but nothing larger does.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import ConfigurationError

SIGMA_MIN = "min"          # index 0, left piece
SIGMA_HYP_LEFT = "hyp-"    # index 1, left piece
SIGMA_HYP_RIGHT = "hyp+"   # index 1, right piece
SIGMA_MAX = "max"          # index 2, right piece

SIGMA_INDEX = {SIGMA_MIN: 0, SIGMA_HYP_LEFT: 1, SIGMA_HYP_RIGHT: 1,
               SIGMA_MAX: 2}
SIGMA_SIDE = {SIGMA_MIN: "left", SIGMA_HYP_LEFT: "left",
              SIGMA_HYP_RIGHT: "right", SIGMA_MAX: "right"}

BASE_MIN = "m"             # base Morse index 0
BASE_SADDLE = "s"          # base Morse index 1
BASE_MAX = "M"             # base Morse index 2
BASE_INDEX = {BASE_MIN: 0, BASE_SADDLE: 1, BASE_MAX: 2}


@dataclass(frozen=True, order=True)
class OrbitType:
    """Type of a closed orbit: surface critical point, base datum, cover.

    Left orbits carry a geodesic class implicitly (one class per
    orientation in the fixture); right orbits carry the base critical
    point.  The ambient Conley-Zehnder index shifts by one over surface
    extrema; the leaf value never does.
    """

    sigma: str
    base: Optional[str] = None
    cover: int = 1

    def __post_init__(self):
        if self.sigma not in SIGMA_INDEX:
            raise ConfigurationError("unknown surface critical type %r"
                                     % (self.sigma,))
        if self.side == "right":
            if self.base not in BASE_INDEX:
                raise ConfigurationError("right orbits need a base point")
        else:
            if self.base is not None:
                raise ConfigurationError("left orbits carry no base point")
        if self.cover < 1:
            raise ConfigurationError("cover must be positive")

    @property
    def side(self) -> str:
        return SIGMA_SIDE[self.sigma]

    @property
    def cz_leaf(self) -> int:
        if self.side == "left":
            return 0
        return BASE_INDEX[self.base] - 1

    @property
    def cz_ambient(self) -> int:
        shift = 1 if SIGMA_INDEX[self.sigma] in (0, 2) else 0
        return self.cz_leaf + shift

    @property
    def sigma_index(self) -> int:
        return SIGMA_INDEX[self.sigma]

    def action(self, cfg: "ModelConfig") -> Fraction:
        unit = (cfg.left_action_unit if self.side == "left"
                else cfg.right_action_unit)
        return unit * self.cover

    def label(self) -> str:
        core = self.sigma if self.base is None else \
            "%s;%s" % (self.sigma, self.base)
        return core if self.cover == 1 else "%s^%d" % (core, self.cover)


# Leaf hypersurface kinds.  Flow segments are named source:sink in the
# surface Morse function; page-like leaves cross the dividing set.
FLOW_LEFT = "hyp-:min"
FLOW_RIGHT = "max:hyp+"
PAGE_MAX_MIN = "max:min"
PAGE_MAX_HYP = "max:hyp-"
PAGE_HYP_MIN = "hyp+:min"

PAGE_KINDS = (PAGE_MAX_MIN, PAGE_MAX_HYP, PAGE_HYP_MIN)

# index drop of the flow segment = dimension of the normal kernel of a
# curve confined to the leaf (cylindrical leaves have none)
FLOW_INDEX = {FLOW_LEFT: 1, FLOW_RIGHT: 1,
              PAGE_MAX_MIN: 2, PAGE_MAX_HYP: 1, PAGE_HYP_MIN: 1}


@dataclass(frozen=True, order=True)
class Leaf:
    """A leaf hypersurface type with a twin flavor bit.

    kind "cyl" is the cylindrical leaf over the named critical point;
    "flow1" stays on one side over an index-one segment; "page" crosses
    the dividing set.  Non-cylindrical leaves come in twin pairs; the
    flavor selects the member and the twin map flips it.
    """

    kind: str
    name: str
    flavor: int = 0

    def __post_init__(self):
        if self.kind not in ("cyl", "flow1", "page"):
            raise ConfigurationError("unknown leaf kind %r" % (self.kind,))
        if self.kind == "cyl" and self.flavor != 0:
            raise ConfigurationError("cylindrical leaves have no twin")
        if self.flavor not in (0, 1):
            raise ConfigurationError("flavor is a twin bit")

    @property
    def twistable(self) -> bool:
        return self.kind != "cyl"

    def twin(self) -> "Leaf":
        if not self.twistable:
            raise ConfigurationError("cylindrical leaves have no twin")
        return replace(self, flavor=1 - self.flavor)

    @property
    def dim_ker_normal(self) -> int:
        if self.kind == "cyl":
            return 0
        return FLOW_INDEX[self.name]

    def label(self) -> str:
        if self.kind == "cyl":
            return "cyl(%s)" % self.name
        return "%s(%s)%s" % (self.kind, self.name,
                             "'" if self.flavor else "")


@dataclass(frozen=True)
class ModelConfig:
    """Fixture data and enumeration conventions for one model instance."""

    k_circles: int = 3
    genus_sigma: int = 3
    genus_base: int = 2
    left_action_unit: Fraction = Fraction(1)
    right_action_unit: Fraction = Fraction(1)
    action_threshold: Fraction = Fraction(5, 2)
    cover_threshold: int = 2
    # enumeration bounds
    max_levels: int = 3
    max_components_per_level: int = 3
    max_components: int = 5
    max_ends_per_component: int = 4
    max_genus_component: int = 1
    # convention toggles, all recorded in the manifest
    allow_generic_crossing_pages: bool = True
    left_covers_as_classes: bool = False
    allow_branched_trivial_covers: bool = True
    allow_flowline_pants: bool = False
    flow_cover_attach_even_only: bool = True

    def __post_init__(self):
        if self.k_circles < 1:
            raise ConfigurationError("need at least one dividing circle")
        if self.genus_sigma < self.k_circles:
            raise ConfigurationError(
                "dividing surface genus must be at least the circle count")
        if self.genus_base < 2:
            raise ConfigurationError("the base surface is hyperbolic")
        if self.action_threshold <= 0 or self.cover_threshold < 1:
            raise ConfigurationError("thresholds must be positive")

    @property
    def genus_positive_piece(self) -> int:
        return self.genus_sigma - self.k_circles + 1

    @property
    def left_saddles(self) -> int:
        # genus-zero piece with k boundary circles, one minimum
        return self.k_circles - 1

    @property
    def right_saddles(self) -> int:
        return 2 * self.genus_positive_piece + self.k_circles - 1

    @property
    def base_saddles(self) -> int:
        return 2 * self.genus_base

    def convention_fields(self) -> Dict[str, object]:
        return {
            "allow_generic_crossing_pages": self.allow_generic_crossing_pages,
            "left_covers_as_classes": self.left_covers_as_classes,
            "allow_branched_trivial_covers":
                self.allow_branched_trivial_covers,
            "allow_flowline_pants": self.allow_flowline_pants,
            "flow_cover_attach_even_only": self.flow_cover_attach_even_only,
            "max_levels": self.max_levels,
            "max_components": self.max_components,
        }


def paper_model(**overrides) -> ModelConfig:
    """The bundled instance: three circles, minimal Morse data."""
    return ModelConfig(**overrides)
