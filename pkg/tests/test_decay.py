import json
import math

import pytest

from anncap.decay import (
    ad_ratio,
    ad_ratio_trend,
    check_doubling,
    check_one_ad,
    check_reverse_doubling,
    estimate_ad_exponent,
    fit_annulus_decay,
)
from anncap.errors import InputError
from anncap.gallery import make_buckley, make_halfline, make_snake
from anncap.spaces import AnnulusSpec, RadialRn, SpaceSpec
from anncap.weights import Constant, HalfLineKind

RN2 = SpaceSpec(RadialRn(2), Constant())
RN3 = SpaceSpec(RadialRn(3), Constant())


def test_ad_ratio_exact():
    # mu(ann(R/2, R)) / ((1/2) mu(B_R)) = (3/4) / (1/2) = 3/2 in R^2
    assert ad_ratio(RN2, AnnulusSpec(1.0, 2.0), 1.0) == pytest.approx(1.5, rel=1e-10)
    with pytest.raises(InputError):
        ad_ratio(RN2, AnnulusSpec(1.0, 2.0), 0.0)


def test_fit_annulus_decay_rn():
    rep = fit_annulus_decay(RN2, 1.0, [1.0 - 2.0**-j for j in range(2, 12)])
    assert rep.eta_hat == pytest.approx(1.0, abs=0.02)
    assert rep.sample_count == 10
    json.loads(rep.to_json())


def test_fit_annulus_decay_buckley():
    space = make_buckley(0.4).space
    rep = fit_annulus_decay(space, 1.0, [1.0 - 2.0**-j for j in range(2, 12)])
    assert rep.eta_hat == pytest.approx(0.4, abs=0.05)


def test_fit_rejects_bad_families():
    with pytest.raises(InputError):
        fit_annulus_decay(RN2, 1.0, [0.9] * 3)  # too few
    with pytest.raises(InputError):
        fit_annulus_decay(RN2, 1.0, [0.1] + [1.0 - 2.0**-j for j in range(2, 10)])


def test_estimate_ad_exponent_takes_worst_family():
    families = ((1.0, tuple(1.0 - 2.0**-j for j in range(2, 11))),
                (4.0, tuple(4.0 * (1.0 - 2.0**-j) for j in range(2, 11))))
    rep = estimate_ad_exponent(RN2, families)
    assert rep.eta_hat == pytest.approx(1.0, abs=0.02)
    assert rep.sample_count == 18
    # single-family shorthand
    rep1 = estimate_ad_exponent(RN2, families[0])
    assert rep1.sample_count == 9


def test_ad_ratio_trend_flat_for_true_eta():
    annuli = [AnnulusSpec(1.0 - 2.0**-j, 1.0) for j in range(2, 12)]
    slope, lo, hi = ad_ratio_trend(RN2, annuli, eta=1.0)
    assert abs(slope) <= 0.02
    assert hi / lo <= 1.5
    # overstated eta makes the ratio diverge (negative trend)
    slope2, _, _ = ad_ratio_trend(RN2, annuli, eta=1.5)
    assert slope2 <= -0.4


def test_check_one_ad_smooth_space():
    rep = check_one_ad(RN3, (0.25, 4.0))
    # rho f'/f = n exactly for f = c rho^n
    assert rep.sup_ratio == pytest.approx(3.0, rel=1e-3)
    assert rep.inf_ratio == pytest.approx(3.0, rel=1e-3)
    assert not rep.jump_detected
    assert rep.condition_b and rep.condition_d
    parsed = json.loads(rep.to_json())
    assert parsed["condition_b"] is True


def test_check_one_ad_snake_jump():
    rep = check_one_ad(make_snake().space, (1.5, 64.0))
    assert rep.jump_detected
    assert math.isinf(rep.sup_ratio)
    assert not rep.condition_b
    assert json.loads(rep.to_json())["sup_ratio"] == "inf"


def test_check_one_ad_buckley_steep_but_no_jump():
    # the integrable singularity is steep but not atomic: no jump, yet the
    # difference quotients grow without bound under refinement, so the
    # 1-AD characterization correctly fails
    rep = check_one_ad(make_buckley(0.5).space, (0.25, 4.0))
    assert not rep.jump_detected
    assert not rep.condition_b
    assert rep.sup_trend_slope >= 0.1


def test_check_one_ad_condition_d_failures():
    m1x = make_halfline(HalfLineKind.MIN_ONE_OVER_X)
    rep = check_one_ad(m1x.space, m1x.one_ad_range)
    assert rep.condition_b and not rep.condition_d
    exp = make_halfline(HalfLineKind.EXP_DECAY)
    rep = check_one_ad(exp.space, exp.one_ad_range)
    assert rep.condition_b and not rep.condition_d


def test_check_one_ad_head_blowup():
    # rho f'/f = 1/rho blows up toward 0 even though f is smooth
    inv = make_halfline(HalfLineKind.EXP_INV_OVER_X_SQ)
    rep = check_one_ad(inv.space, inv.one_ad_range)
    assert not rep.condition_b
    assert rep.head_slope <= -0.5


def test_check_one_ad_validation():
    with pytest.raises(InputError):
        check_one_ad(RN2, (2.0, 1.0))
    with pytest.raises(InputError):
        check_one_ad(RN2, (0.5, 2.0), grid_size=8)


def test_reverse_doubling_exact():
    rep = check_reverse_doubling(RN2, 2.0, [0.25, 1.0, 3.0])
    assert rep.min_ratio == pytest.approx(4.0, rel=1e-10)
    assert rep.max_ratio == pytest.approx(4.0, rel=1e-10)
    assert rep.uniform
    with pytest.raises(InputError):
        check_reverse_doubling(RN2, 1.0, [1.0])


def test_reverse_doubling_fails_on_exp_decay():
    space = make_halfline(HalfLineKind.EXP_DECAY).space
    rep = check_reverse_doubling(space, 2.0, [4.0, 16.0, 64.0])
    assert not rep.uniform
    assert rep.worst_r == 64.0


def test_doubling():
    worst, bounded = check_doubling(RN2, [0.1, 1.0, 10.0])
    assert worst == pytest.approx(4.0, rel=1e-10)
    assert bounded
    inv = make_halfline(HalfLineKind.EXP_INV_OVER_X_SQ).space
    worst, bounded = check_doubling(inv, [0.02, 0.05, 0.1])
    assert not bounded
