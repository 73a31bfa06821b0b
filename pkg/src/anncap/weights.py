"""Radial / one-dimensional weight functions.

A weight is one of a closed catalog of analytic families plus tabulated
data.  Every weight evaluates to a strictly positive value for rho > 0 and
knows where its integrable power singularities sit, so that quadrature can
be split there.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = [
    "Constant",
    "PowerAlpha",
    "BuckleyEta",
    "SummedBuckley",
    "HalfLineKind",
    "HalfLineCatalog",
    "Tabulated",
    "Weight",
    "load_tabulated_csv",
]


@dataclass(frozen=True)
class Constant:
    """w(rho) = c with c > 0."""

    c: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise InputError(f"Constant weight needs c > 0, got {self.c}")

    def evaluate(self, rho):
        return np.full_like(np.asarray(rho, dtype=float), self.c)

    def singularities(self):
        return ()


@dataclass(frozen=True)
class PowerAlpha:
    """w(rho) = rho^alpha.  Integrability against rho^{n-1} requires alpha > -n,
    which is checked where the ambient dimension is known (SpaceSpec)."""

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise InputError("PowerAlpha needs a finite exponent")

    def evaluate(self, rho):
        return np.asarray(rho, dtype=float) ** self.alpha

    def singularities(self):
        return (0.0,) if self.alpha < 0 else ()


@dataclass(frozen=True)
class BuckleyEta:
    """w(rho) = max{1, |rho - 1|^(eta-1)} with eta in (0, 1).

    Blows up like an integrable power at rho = 1.
    """

    eta: float

    def __post_init__(self):
        if not (0.0 < self.eta < 1.0):
            raise InputError(f"BuckleyEta needs eta in (0,1), got {self.eta}")

    def evaluate(self, rho):
        rho = np.asarray(rho, dtype=float)
        with np.errstate(divide="ignore"):
            sing = np.abs(rho - 1.0) ** (self.eta - 1.0)
        return np.maximum(1.0, sing)

    def singularities(self):
        # the blow-up at 1 plus the kink at 2 where the max switches branch
        return (1.0, 2.0)


@dataclass(frozen=True)
class SummedBuckley:
    """w(rho) = sum_j a_j * max{1, |q_j rho - 1|^(eta-1)}.

    A finite truncation of the countable sum; eta is shared across terms.
    Singular at rho = 1/q_j for every retained term.
    """

    eta: float
    terms: tuple[tuple[float, float], ...]  # (q_j, a_j)

    def __post_init__(self):
        if not (0.0 < self.eta < 1.0):
            raise InputError(f"SummedBuckley needs eta in (0,1), got {self.eta}")
        if len(self.terms) == 0:
            raise InputError("SummedBuckley needs at least one (q_j, a_j) term")
        for q, a in self.terms:
            if not (q > 0 and a > 0):
                raise InputError(f"SummedBuckley terms need q_j, a_j > 0, got ({q}, {a})")
        object.__setattr__(self, "terms", tuple((float(q), float(a)) for q, a in self.terms))

    def evaluate(self, rho):
        rho = np.asarray(rho, dtype=float)
        total = np.zeros_like(rho)
        with np.errstate(divide="ignore"):
            for q, a in self.terms:
                total = total + a * np.maximum(1.0, np.abs(q * rho - 1.0) ** (self.eta - 1.0))
        return total

    def singularities(self):
        # each term blows up at 1/q_j and has a branch kink at 2/q_j
        pts = {1.0 / q for q, _ in self.terms} | {2.0 / q for q, _ in self.terms}
        return tuple(sorted(pts))


class HalfLineKind(enum.Enum):
    MIN_ONE_OVER_X = "min-one-over-x"
    EXP_DECAY = "exp-decay"
    EXP_INV_OVER_X_SQ = "exp-inv-over-x-sq"


@dataclass(frozen=True)
class HalfLineCatalog:
    """The catalog of special half-line weights.

    MIN_ONE_OVER_X:    w(x) = min{1, 1/x}                (nonincreasing)
    EXP_DECAY:         w(x) = exp(-x)                    (nonincreasing)
    EXP_INV_OVER_X_SQ: w(x) = exp(-1/x)/x^2 for x <= 1/2,
                       4 exp(-2) for x >= 1/2            (nondecreasing)
    """

    kind: HalfLineKind

    def evaluate(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.kind is HalfLineKind.MIN_ONE_OVER_X:
            with np.errstate(divide="ignore"):
                return np.minimum(1.0, np.where(rho > 0, 1.0 / rho, np.inf))
        if self.kind is HalfLineKind.EXP_DECAY:
            return np.exp(-rho)
        with np.errstate(divide="ignore"):
            small = np.exp(-1.0 / np.where(rho > 0, rho, np.inf)) / np.where(rho > 0, rho, np.inf) ** 2
        return np.where(rho <= 0.5, small, 4.0 * math.exp(-2.0))

    def singularities(self):
        # Kink locations, not blow-ups; still worth splitting quadrature at.
        if self.kind is HalfLineKind.MIN_ONE_OVER_X:
            return (1.0,)
        if self.kind is HalfLineKind.EXP_INV_OVER_X_SQ:
            return (0.5,)
        return ()


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear weight through (grid, values) with clamped ends."""

    grid: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        values = tuple(float(v) for v in self.values)
        if len(grid) < 2 or len(grid) != len(values):
            raise InputError("Tabulated weight needs >= 2 grid points and matching values")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InputError("Tabulated grid must be strictly increasing")
        if any(v <= 0 for v in values):
            raise InputError("Tabulated values must be strictly positive")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def evaluate(self, rho):
        return np.interp(np.asarray(rho, dtype=float), self.grid, self.values)

    def singularities(self):
        return self.grid


Weight = Constant | PowerAlpha | BuckleyEta | SummedBuckley | HalfLineCatalog | Tabulated


def load_tabulated_csv(path) -> Tabulated:
    """Load a Tabulated weight from CSV with header ``rho,w``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["rho", "w"]:
            raise InputError(f"{path}: expected CSV header 'rho,w'")
        grid, values = [], []
        for row in reader:
            if not row:
                continue
            grid.append(float(row[0]))
            values.append(float(row[1]))
    return Tabulated(grid=tuple(grid), values=tuple(values))
