"""Bound expressions from the two-sided capacity estimates, envelope
verification over annulus families, and the blowup probe.

Each bound is evaluated with constant 1; all comparability constants are
absorbed into the envelope verdicts, which test boundedness of the
cap/bound ratio and absence of a trend in log-log coordinates.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ApplicabilityError, InputError
from .measure import mu_annulus, mu_ball
from .spaces import AnnulusSpec, SpaceSpec

__all__ = [
    "BoundId",
    "BoundSpec",
    "evaluate_bound",
    "SweepReport",
    "verify_envelope",
    "BlowupReport",
    "blowup_probe",
]

RATIO_WINDOW = (1e-3, 1e3)
TREND_TOL = 0.05
UPPER_SLACK = 1e-8  # constant-free upper bounds only


class BoundId(enum.Enum):
    UPPER_SIMPLE = "upper-simple"
    UPPER_ETA = "upper-eta"
    LOWER_PI_AD = "lower-pi-ad"
    LOWER_P_BASE = "lower-p-base"
    TWO_SIDED_NICE = "two-sided-nice"
    TWO_SIDED_ANNULAR = "two-sided-annular"
    LOWER_CORKSCREW_Q = "lower-corkscrew-q"
    LOWER_P1_NO_DOUBLING = "lower-p1-no-doubling"
    MEASURE_LOWER_Q = "measure-lower-q"


@dataclass(frozen=True)
class BoundSpec:
    bound_id: BoundId
    p: float
    eta: float | None = None
    q: float | None = None
    tau: float | None = None

    def __post_init__(self):
        if self.p < 1:
            raise InputError(f"need p >= 1, got {self.p}")
        needs_eta = self.bound_id in (BoundId.UPPER_ETA, BoundId.LOWER_PI_AD)
        if needs_eta and (self.eta is None or not 0 < self.eta <= 1):
            raise InputError(f"{self.bound_id.value} needs eta in (0, 1]")
        needs_q = self.bound_id in (
            BoundId.LOWER_PI_AD, BoundId.LOWER_CORKSCREW_Q, BoundId.MEASURE_LOWER_Q
        )
        if needs_q and (self.q is None or self.q < 1):
            raise InputError(f"{self.bound_id.value} needs q >= 1")


def _tau(spec, traits):
    if spec.tau is not None:
        return spec.tau
    if traits.reverse_doubling is not None:
        return traits.reverse_doubling[0]
    return None


def _failed_hypothesis(spec: BoundSpec, space: SpaceSpec, ann: AnnulusSpec) -> str | None:
    t = space.traits
    b = spec.bound_id
    if b is BoundId.UPPER_SIMPLE:
        return None

    def radius_cap(tau):
        # R <= diam X / 2 tau; vacuous for unbounded spaces
        if math.isinf(space.diameter):
            return None
        if tau is None or ann.R > space.diameter / (2.0 * tau):
            return "R <= diam X / 2 tau"
        return None

    if b is BoundId.UPPER_ETA:
        if t.ad_eta is None or spec.eta > t.ad_eta + 1e-12:
            return "eta-annular-decay declared"
        return None
    if b is BoundId.LOWER_PI_AD:
        if not (1 <= spec.q < spec.p):
            return "1 <= q < p"
        if not t.supports_pi(spec.q):
            return "q-Poincare inequality at x0"
        if t.ad_eta is None or spec.eta > t.ad_eta + 1e-12:
            return "eta-annular-decay declared"
        if t.reverse_doubling is None:
            return "reverse-doubling at x0"
        if not ann.is_thin:
            return "thin annulus (R/2 <= r)"
        return radius_cap(_tau(spec, t))
    if b is BoundId.LOWER_P_BASE:
        if not t.supports_pi(spec.p):
            return "p-Poincare inequality at x0"
        if not t.doubling:
            return "doubling at x0"
        if t.reverse_doubling is None:
            return "reverse-doubling at x0"
        if not ann.is_thin:
            return "thin annulus (R/2 <= r)"
        return radius_cap(_tau(spec, t))
    if b is BoundId.TWO_SIDED_NICE:
        if not t.supports_pi(1.0):
            return "1-Poincare inequality at x0"
        if t.ad_eta is None or t.ad_eta < 1.0 - 1e-12:
            return "1-annular-decay declared"
        if t.reverse_doubling is None:
            return "reverse-doubling at x0"
        if not ann.is_thin:
            return "thin annulus (R/2 <= r)"
        return radius_cap(_tau(spec, t))
    if b is BoundId.TWO_SIDED_ANNULAR:
        if not t.globally_doubling:
            return "globally doubling"
        if not (t.pi_global and t.supports_pi(spec.p)):
            return "global p-Poincare inequality"
        if t.corkscrew_a is None:
            return "corkscrew condition (constant a)"
        if not ann.is_thin:
            return "thin annulus (R/2 <= r)"
        return None
    if b is BoundId.LOWER_CORKSCREW_Q:
        annular = _failed_hypothesis(BoundSpec(BoundId.TWO_SIDED_ANNULAR, spec.p), space, ann)
        if annular is not None:
            return annular
        if not (1 <= spec.q < spec.p):
            return "1 <= q < p"
        if not t.supports_pi(spec.q):
            return "q-Poincare inequality at x0"
        return None
    if b is BoundId.LOWER_P1_NO_DOUBLING:
        if spec.p != 1:
            return "p = 1"
        if not t.supports_pi(1.0):
            return "1-Poincare inequality at x0"
        if t.reverse_doubling is None:
            return "reverse-doubling at x0"
        if not ann.is_thin:
            return "thin annulus (R/2 <= r)"
        return radius_cap(_tau(spec, t))
    if b is BoundId.MEASURE_LOWER_Q:
        if not t.supports_pi(spec.q):
            return "q-Poincare inequality at x0"
        if not t.doubling:
            return "doubling at x0"
        if t.reverse_doubling is None:
            return "reverse-doubling at x0"
        if not ann.is_thin:
            return "thin annulus (R/2 <= r)"
        return radius_cap(_tau(spec, t))
    raise InputError(f"unknown bound id {b!r}")


def evaluate_bound(spec: BoundSpec, space: SpaceSpec, ann: AnnulusSpec,
                   check_hypotheses: bool = True) -> float:
    """Value of the bound expression with constant 1.

    With check_hypotheses=True (the default) a violated hypothesis raises
    ApplicabilityError naming it; passing False evaluates the bare
    expression, which is how counterexamples are demonstrated.
    """
    if check_hypotheses:
        failed = _failed_hypothesis(spec, space, ann)
        if failed is not None:
            raise ApplicabilityError(failed)
    p, r, R = spec.p, ann.r, ann.R
    t = 1.0 - r / R
    b = spec.bound_id
    if b in (BoundId.UPPER_SIMPLE, BoundId.TWO_SIDED_ANNULAR):
        return mu_annulus(space, ann) / ann.delta**p
    if b is BoundId.UPPER_ETA:
        return t ** (spec.eta - p) * mu_ball(space, R) / R**p
    if b is BoundId.LOWER_PI_AD:
        return t ** (spec.eta * (spec.q - p) / spec.q) * mu_ball(space, R) / R**p
    if b is BoundId.LOWER_P_BASE:
        return mu_ball(space, R) / R**p
    if b is BoundId.TWO_SIDED_NICE:
        return t ** (1.0 - p) * mu_ball(space, R) / R**p
    if b is BoundId.LOWER_CORKSCREW_Q:
        return t ** (spec.q - p) * mu_ball(space, R) / R**p
    if b is BoundId.LOWER_P1_NO_DOUBLING:
        return mu_ball(space, r) / r
    if b is BoundId.MEASURE_LOWER_Q:
        return t**spec.q * mu_ball(space, R)
    raise InputError(f"unknown bound id {b!r}")


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepReport:
    rows: tuple  # (r, R, cap, bound, ratio)
    slope: float
    min_ratio: float
    max_ratio: float
    passed: bool
    verdict: str

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "R", "cap", "bound", "ratio"])
            for row in self.rows:
                writer.writerow([f"{x:.17g}" for x in row])

    def verdict_json(self) -> str:
        return json.dumps({
            "verdict": self.verdict,
            "passed": self.passed,
            "slope": f"{self.slope:.17g}",
            "min_ratio": f"{self.min_ratio:.17g}",
            "max_ratio": f"{self.max_ratio:.17g}",
            "rows": len(self.rows),
        }, sort_keys=True)


def verify_envelope(space: SpaceSpec, p: float, cap_fn, spec: BoundSpec, annuli,
                    check_hypotheses: bool = True) -> SweepReport:
    """Ratio cap/bound per annulus; PASS means the ratios sit inside
    [1e-3, 1e3] with no log-log trend (|slope| <= 0.05).

    The constant-free UpperSimple bound must additionally dominate the
    capacity outright (ratio <= 1 + 1e-8).
    """
    annuli = list(annuli)
    if len(annuli) < 8:
        raise InputError(f"need >= 8 applicable annuli, got {len(annuli)}")
    rows, xs = [], []
    for ann in annuli:
        cap = cap_fn(ann)
        bound = evaluate_bound(spec, space, ann, check_hypotheses=check_hypotheses)
        rows.append((ann.r, ann.R, cap, bound, cap / bound))
        xs.append(math.log(1.0 - ann.r / ann.R))
    ratios = np.array([row[4] for row in rows])
    if np.any(ratios <= 0):
        slope = -math.inf  # degenerate capacity along the family
    else:
        slope = float(np.polyfit(xs, np.log(ratios), 1)[0])
    lo, hi = float(ratios.min()), float(ratios.max())
    ok = RATIO_WINDOW[0] <= lo and hi <= RATIO_WINDOW[1] and abs(slope) <= TREND_TOL
    if spec.bound_id is BoundId.UPPER_SIMPLE:
        ok = ok and hi <= 1.0 + UPPER_SLACK
    return SweepReport(rows=tuple(rows), slope=slope, min_ratio=lo, max_ratio=hi,
                       passed=ok, verdict="PASS" if ok else "FAIL")


@dataclass(frozen=True)
class BlowupReport:
    deltas: tuple
    values: tuple
    increasing: bool
    blowup: bool
    divergence_slope: float | None
    verdict: str

    def verdict_json(self) -> str:
        return json.dumps({
            "verdict": self.verdict,
            "increasing": self.increasing,
            "divergence_slope": None if self.divergence_slope is None
            else f"{self.divergence_slope:.17g}",
            "deltas": [f"{d:.17g}" for d in self.deltas],
            "values": [f"{v:.17g}" for v in self.values],
        }, sort_keys=True)


def blowup_probe(space: SpaceSpec, p: float, R: float, deltas, cap_fn,
                 q: float | None = None, check_hypotheses: bool = True) -> BlowupReport:
    """cap(B_{R-delta}, B_R) along a decreasing delta sequence.

    BLOWUP requires strictly increasing values whose final/initial ratio
    reaches 10^3; identically-zero capacities report NO-BLOWUP (the
    degenerate counterexample case).
    """
    deltas = sorted((float(d) for d in deltas), reverse=True)  # shrinking toward 0
    if check_hypotheses:
        t = space.traits
        qs = [q] if q is not None else sorted(t.pi_exponents)
        if not any(qq is not None and qq < p and t.supports_pi(qq) for qq in qs):
            raise ApplicabilityError("q-Poincare inequality at x0 with 1 <= q < p")
        if not math.isinf(space.diameter) and R >= space.diameter:
            raise ApplicabilityError("mu(X \\ B_R) > 0")
    values = [cap_fn(AnnulusSpec(R - d, R)) for d in deltas]
    arr = np.array(values)
    if np.all(arr == 0.0):
        return BlowupReport(tuple(deltas), tuple(values), increasing=False, blowup=False,
                            divergence_slope=None, verdict="NO-BLOWUP")
    increasing = bool(np.all(np.diff(arr) > 0))
    blow = increasing and values[0] > 0 and values[-1] / values[0] >= 1e3
    slope = None
    if np.all(arr > 0):
        slope = float(np.polyfit(np.log(deltas), np.log(arr), 1)[0])
    return BlowupReport(tuple(deltas), tuple(values), increasing=increasing, blowup=blow,
                        divergence_slope=slope,
                        verdict="BLOWUP" if blow else "NO-BLOWUP")
