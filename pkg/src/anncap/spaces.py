"""Geometries, declared analytic traits, and annuli.

A SpaceSpec bundles a geometry (radial R^n, half-line, snake, bow-tie), a
weight, a center, and a TraitSet of *declared* analytic properties
(Poincare exponents, doubling, reverse-doubling, corkscrew constant).
Traits are metadata transcribed from known statements about each space;
they are never computed here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InputError
from .weights import Constant, PowerAlpha, Weight

__all__ = [
    "RadialRn",
    "HalfLine",
    "Snake",
    "BowTie",
    "CenterTag",
    "TraitSet",
    "SpaceSpec",
    "AnnulusSpec",
    "surface_area",
]


def surface_area(n: int) -> float:
    """Surface measure of the unit (n-1)-sphere in R^n (2 for n=1)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class RadialRn:
    """R^n with a radial weight about the origin; exact 1-D reduction."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"RadialRn needs n >= 1, got {self.n}")


@dataclass(frozen=True)
class HalfLine:
    """[0, infinity) with a 1-D weight; balls are intervals [0, R)."""


@dataclass(frozen=True)
class Snake:
    """Tessera's snake: segments along the axes plus half-circles of radius
    2^k alternating between the half-planes, carrying arclength measure and
    the Euclidean metric of R^2.  Represented radii go up to 2^k_max."""

    k_max: int = 10

    def __post_init__(self):
        if self.k_max < 1:
            raise InputError(f"Snake needs k_max >= 1, got {self.k_max}")

    @property
    def max_radius(self) -> float:
        return float(2**self.k_max)


@dataclass(frozen=True)
class BowTie:
    """The cone {x : x_2^2 + ... + x_n^2 <= x_1^2/4, -1 <= x_1 <= 2} in R^n
    with measure |x|^alpha dx."""

    n: int
    alpha: float

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"BowTie needs n >= 2, got {self.n}")
        if not (self.alpha > -self.n):
            raise InputError(f"BowTie needs alpha > -n = {-self.n}, got {self.alpha}")


Geometry = RadialRn | HalfLine | Snake | BowTie


class CenterTag(enum.Enum):
    ORIGIN = "origin"
    BOWTIE_TIP = "bowtie-tip"  # the point (-1, 0, ..., 0)


@dataclass(frozen=True)
class TraitSet:
    """Declared analytic traits of a space at its center.

    pi_exponents: exponents q >= 1 at which a q-Poincare inequality is
        declared to hold (and by Holder monotonicity for every larger q).
    pi_open_infimum: when set, a q-Poincare inequality additionally holds
        for every q strictly above this value (the bow-tie's open range).
    pi_global / globally_doubling: whether the declaration is global
        rather than only at the center.
    reverse_doubling: (tau, gamma) with mu(B_{tau r}) >= gamma mu(B_r).
    ad_eta: declared annular-decay exponent at the center, None if no AD
        property holds.
    corkscrew_a: the constant of the thin-annulus corkscrew condition.
    """

    pi_exponents: frozenset = frozenset()
    pi_open_infimum: float | None = None
    pi_dilation: float = 1.0
    pi_global: bool = False
    doubling: bool = False
    globally_doubling: bool = False
    reverse_doubling: tuple[float, float] | None = None
    corkscrew_a: float | None = None
    point_mass_at_center: bool = False
    ad_eta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "pi_exponents", frozenset(float(q) for q in self.pi_exponents))
        for q in self.pi_exponents:
            if q < 1:
                raise InputError(f"Poincare exponents must satisfy q >= 1, got {q}")
        if self.pi_dilation < 1:
            raise InputError("Poincare dilation must be >= 1")
        if self.reverse_doubling is not None:
            tau, gamma = self.reverse_doubling
            if not (tau > 1 and gamma > 1):
                raise InputError("reverse_doubling needs tau > 1 and gamma > 1")
        if self.corkscrew_a is not None and not (0 < self.corkscrew_a <= 1):
            raise InputError("corkscrew_a must lie in (0, 1]")
        if self.ad_eta is not None and not (0 < self.ad_eta <= 1):
            raise InputError("declared ad_eta must lie in (0, 1]")

    def supports_pi(self, q: float) -> bool:
        """Whether a q-Poincare inequality is declared (Holder-monotone)."""
        if any(q >= q0 for q0 in self.pi_exponents):
            return True
        return self.pi_open_infimum is not None and q > self.pi_open_infimum


@dataclass(frozen=True)
class SpaceSpec:
    geometry: Geometry
    weight: Weight = field(default_factory=Constant)
    center: CenterTag = CenterTag.ORIGIN
    traits: TraitSet = field(default_factory=TraitSet)
    name: str = ""

    def __post_init__(self):
        geom = self.geometry
        if isinstance(geom, BowTie):
            if self.center is not CenterTag.BOWTIE_TIP:
                raise InputError("BowTie spaces are centred at the tip (-1, 0, ..., 0)")
            if not isinstance(self.weight, PowerAlpha) or self.weight.alpha != geom.alpha:
                object.__setattr__(self, "weight", PowerAlpha(geom.alpha))
        else:
            if self.center is not CenterTag.ORIGIN:
                raise InputError(f"{type(geom).__name__} spaces are centred at the origin")
        if isinstance(geom, RadialRn) and isinstance(self.weight, PowerAlpha):
            if not (self.weight.alpha > -geom.n):
                raise InputError(
                    f"PowerAlpha weight needs alpha > -n = {-geom.n}, got {self.weight.alpha}"
                )

    @property
    def diameter(self) -> float:
        """Diameter of the space (inf for the unbounded geometries)."""
        if isinstance(self.geometry, BowTie):
            # between the tip (-1,0,...) and the far rim corners (2, y), |y| = 1
            return math.sqrt(10.0)
        return math.inf


@dataclass(frozen=True)
class AnnulusSpec:
    r: float
    R: float

    def __post_init__(self):
        if not (0.0 < self.r < self.R):
            raise InputError(f"annulus needs 0 < r < R, got r={self.r}, R={self.R}")

    @property
    def delta(self) -> float:
        return self.R - self.r

    @property
    def is_thin(self) -> bool:
        return self.R / 2.0 <= self.r
