import json
import math

import pytest

from anncap.bounds import (
    BlowupReport,
    BoundId,
    BoundSpec,
    blowup_probe,
    evaluate_bound,
    verify_envelope,
)
from anncap.capacity import cap_auto, cap_radial_weighted, cap_rn_unweighted
from anncap.errors import ApplicabilityError, InputError
from anncap.gallery import make_buckley, make_halfline, make_rn_unweighted, make_snake
from anncap.measure import mu_ball
from anncap.spaces import AnnulusSpec, HalfLine, RadialRn, SpaceSpec, TraitSet
from anncap.weights import Constant, HalfLineKind

RN2 = make_rn_unweighted(2).space


def test_boundspec_validation():
    with pytest.raises(InputError):
        BoundSpec(BoundId.UPPER_SIMPLE, 0.5)
    with pytest.raises(InputError):
        BoundSpec(BoundId.UPPER_ETA, 2.0)  # missing eta
    with pytest.raises(InputError):
        BoundSpec(BoundId.UPPER_ETA, 2.0, eta=1.5)
    with pytest.raises(InputError):
        BoundSpec(BoundId.LOWER_CORKSCREW_Q, 2.0)  # missing q


def test_upper_simple_value_and_domination():
    ann = AnnulusSpec(1.0, 2.0)
    spec = BoundSpec(BoundId.UPPER_SIMPLE, 2.0)
    val = evaluate_bound(spec, RN2, ann)
    assert val == pytest.approx(3.0 * math.pi, rel=1e-10)  # mu(ann)/delta^2
    cap = cap_rn_unweighted(2, 2.0, ann).value
    assert cap <= val


def test_two_sided_nice_p1_has_no_thinness_factor():
    ann = AnnulusSpec(0.75, 1.0)
    spec = BoundSpec(BoundId.TWO_SIDED_NICE, 1.0)
    val = evaluate_bound(spec, RN2, ann)
    assert val == pytest.approx(mu_ball(RN2, 1.0), rel=1e-10)


def test_bound_expression_values():
    ann = AnnulusSpec(0.75, 1.0)
    t = 0.25
    muR = mu_ball(RN2, 1.0)
    cases = {
        BoundSpec(BoundId.UPPER_ETA, 2.0, eta=1.0): t**-1 * muR,
        BoundSpec(BoundId.LOWER_PI_AD, 2.0, eta=1.0, q=1.0): t**-1 * muR,
        BoundSpec(BoundId.LOWER_P_BASE, 2.0): muR,
        BoundSpec(BoundId.TWO_SIDED_NICE, 2.0): t**-1 * muR,
        BoundSpec(BoundId.LOWER_CORKSCREW_Q, 2.0, q=1.0): t**-1 * muR,
        BoundSpec(BoundId.MEASURE_LOWER_Q, 2.0, q=1.0): t * muR,
    }
    for spec, expected in cases.items():
        assert evaluate_bound(spec, RN2, ann) == pytest.approx(expected, rel=1e-10), spec.bound_id


def test_lower_pi_ad_never_exceeds_nice_upper():
    # for q >= 1 and thin annuli, t^(eta(q-p)/q) <= t^(1-p)
    p = 2.5
    for j in range(2, 10):
        ann = AnnulusSpec(1.0 - 2.0**-j, 1.0)
        lower = evaluate_bound(BoundSpec(BoundId.LOWER_PI_AD, p, eta=1.0, q=1.5), RN2, ann)
        upper = evaluate_bound(BoundSpec(BoundId.TWO_SIDED_NICE, p), RN2, ann)
        assert lower <= upper * (1.0 + 1e-12)


def test_gating_names_failed_hypothesis():
    ann = AnnulusSpec(0.75, 1.0)
    # eta above the declared decay exponent
    with pytest.raises(ApplicabilityError, match="eta-annular-decay"):
        evaluate_bound(BoundSpec(BoundId.UPPER_ETA, 2.0, eta=1.0),
                       make_buckley(0.5).space, ann)
    # q must lie strictly below p
    with pytest.raises(ApplicabilityError, match="1 <= q < p"):
        evaluate_bound(BoundSpec(BoundId.LOWER_PI_AD, 2.0, eta=1.0, q=2.0), RN2, ann)
    # thick annulus
    with pytest.raises(ApplicabilityError, match="thin annulus"):
        evaluate_bound(BoundSpec(BoundId.TWO_SIDED_NICE, 2.0), RN2, AnnulusSpec(0.3, 1.0))
    # snake has no corkscrew constant
    with pytest.raises(ApplicabilityError, match="corkscrew"):
        evaluate_bound(BoundSpec(BoundId.TWO_SIDED_ANNULAR, 2.0),
                       make_snake().space, AnnulusSpec(31.0, 33.0))
    # min-one-over-x lacks reverse-doubling
    with pytest.raises(ApplicabilityError, match="reverse-doubling"):
        evaluate_bound(BoundSpec(BoundId.MEASURE_LOWER_Q, 2.0, q=1.0),
                       make_halfline(HalfLineKind.MIN_ONE_OVER_X).space,
                       AnnulusSpec(8.0, 16.0))
    # p = 1 bound refuses p != 1
    with pytest.raises(ApplicabilityError, match="p = 1"):
        evaluate_bound(BoundSpec(BoundId.LOWER_P1_NO_DOUBLING, 2.0), RN2, ann)


def test_gating_override():
    ann = AnnulusSpec(0.75, 1.0)
    spec = BoundSpec(BoundId.UPPER_ETA, 2.0, eta=1.0)
    val = evaluate_bound(spec, make_buckley(0.5).space, ann, check_hypotheses=False)
    assert val > 0


def test_upper_simple_never_gated():
    bare = SpaceSpec(RadialRn(2), Constant(), traits=TraitSet())
    val = evaluate_bound(BoundSpec(BoundId.UPPER_SIMPLE, 2.0), bare, AnnulusSpec(0.3, 1.0))
    assert val > 0


def test_verify_envelope_pass_and_csv(tmp_path):
    p = 2.0
    annuli = [AnnulusSpec(1.0 - 2.0**-j, 1.0) for j in range(2, 11)]
    rep = verify_envelope(RN2, p, lambda a: cap_auto(RN2, p, a).value,
                          BoundSpec(BoundId.TWO_SIDED_NICE, p), annuli)
    assert rep.verdict == "PASS"
    assert abs(rep.slope) <= 0.05
    path = tmp_path / "sweep.csv"
    rep.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "r,R,cap,bound,ratio"
    assert len(lines) == 10
    verdict = json.loads(rep.verdict_json())
    assert verdict["verdict"] == "PASS" and verdict["rows"] == 9


def test_verify_envelope_detects_counterexample():
    space = make_buckley(0.5).space
    p = 2.0
    annuli = [AnnulusSpec(1.0 - 2.0**-j, 1.0) for j in range(2, 11)]
    rep = verify_envelope(space, p, lambda a: cap_radial_weighted(space, p, a).value,
                          BoundSpec(BoundId.TWO_SIDED_NICE, p), annuli,
                          check_hypotheses=False)
    assert rep.verdict == "FAIL"
    assert rep.slope == pytest.approx(0.5 - 1.0, abs=0.05)


def test_verify_envelope_needs_eight_annuli():
    annuli = [AnnulusSpec(1.0 - 2.0**-j, 1.0) for j in range(2, 6)]
    with pytest.raises(InputError):
        verify_envelope(RN2, 2.0, lambda a: 1.0,
                        BoundSpec(BoundId.UPPER_SIMPLE, 2.0), annuli)


def test_upper_simple_envelope_requires_domination():
    annuli = [AnnulusSpec(1.0 - 2.0**-j, 1.0) for j in range(2, 11)]
    rep = verify_envelope(RN2, 2.0, lambda a: 2.0 * cap_auto(RN2, 2.0, a).value,
                          BoundSpec(BoundId.UPPER_SIMPLE, 2.0), annuli)
    assert rep.verdict == "FAIL"  # inflated capacity exceeds the bare bound


def test_blowup_probe_halfline():
    space = SpaceSpec(HalfLine(), Constant(),
                      traits=TraitSet(pi_exponents=frozenset({1.0})))
    deltas = [2.0**-j for j in range(1, 13)]
    rep = blowup_probe(space, 2.0, 1.0, deltas,
                       lambda a: cap_radial_weighted(space, 2.0, a).value, q=1.0)
    assert rep.verdict == "BLOWUP"
    assert rep.increasing
    assert rep.divergence_slope == pytest.approx(-1.0, abs=0.01)
    json.loads(rep.verdict_json())


def test_blowup_probe_gating():
    space = SpaceSpec(HalfLine(), Constant(), traits=TraitSet())  # no PI declared
    with pytest.raises(ApplicabilityError, match="Poincare"):
        blowup_probe(space, 2.0, 1.0, [0.5, 0.25], lambda a: 1.0)
    # q >= p also refuses
    pi = SpaceSpec(HalfLine(), Constant(), traits=TraitSet(pi_exponents=frozenset({1.0})))
    with pytest.raises(ApplicabilityError):
        blowup_probe(pi, 2.0, 1.0, [0.5, 0.25], lambda a: 1.0, q=3.0)


def test_blowup_probe_degenerate_zeroes():
    space = SpaceSpec(HalfLine(), Constant(),
                      traits=TraitSet(pi_exponents=frozenset({1.0})))
    rep = blowup_probe(space, 2.0, 1.0, [0.5, 0.25, 0.125], lambda a: 0.0, q=1.0)
    assert rep.verdict == "NO-BLOWUP"
    assert not rep.increasing
    assert rep.divergence_slope is None
