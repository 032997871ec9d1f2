import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvebody import sampling
from curvebody.errors import CoincidentPoints
from curvebody.kinematics import PhaseState, kinematic_rates, relative_variables
from curvebody.lagrangian import (
    FROZEN_CORRECTIONS,
    PRINTED,
    audit,
    calibrate_corrections,
    cross_terms,
    kinetic_chart,
    kinetic_chart_literal,
    kinetic_cm_rel,
    kinetic_embedding,
    kinetic_embedding_parts,
    kinetic_equal_mass,
    kinetic_polar,
    kinetic_polar_value,
    kinetic_small_r,
    kinetic_y12,
    polar_decompose,
)
from curvebody.ring import SpaceSign

S, H = SpaceSign.SPHERE, SpaceSign.HYPERBOLIC
SIGNS = [S, H]


def states(seed, n, sign):
    rng = np.random.default_rng(seed)
    m1, m2 = sampling.random_masses(rng, n)
    return sampling.random_states(rng, n, sign), m1, m2


def test_chart_kinetic_example():
    st_ = PhaseState([0.5, 0, 0], [0, 0, 0], [1.0, 0, 0], [0, 0, 0], H)
    assert kinetic_chart(st_, 2.0, 1.0) == pytest.approx(16 / 9, abs=1e-12)
    assert kinetic_embedding(st_, 2.0, 1.0) == pytest.approx(16 / 9, abs=1e-12)


def test_sphere_origin_example():
    st_ = PhaseState([0, 0, 0], [0.3, 0, 0], [0, 0.7, 0], [0, 0, 0], S)
    assert kinetic_embedding(st_, 1.5, 1.0) == pytest.approx(0.5 * 1.5 * 0.49, abs=1e-14)


@pytest.mark.parametrize("sign", SIGNS)
def test_embedding_equals_chart(sign):
    st_, m1, m2 = states(1, 1000, sign)
    t_emb, t_emb_u = kinetic_embedding_parts(st_, m1, m2)
    np.testing.assert_allclose(t_emb, kinetic_chart(st_, m1, m2), rtol=1e-12, atol=1e-12)
    assert np.max(np.abs(t_emb_u)) < 1e-12


@pytest.mark.parametrize("sign", SIGNS)
def test_literal_metric_differs(sign):
    st_, m1, m2 = states(2, 200, sign)
    diff = np.abs(kinetic_chart_literal(st_, m1, m2) - kinetic_chart(st_, m1, m2))
    assert np.median(diff) > 1e-3


@pytest.mark.parametrize("sign", SIGNS)
def test_relative_forms_match(sign):
    st_, m1, m2 = states(3, 1000, sign)
    truth = kinetic_embedding(st_, m1, m2)
    t_cmp, rest_cmp = kinetic_cm_rel(st_, m1, m2)
    t_cmr, rest_cmr = kinetic_y12(st_, m1, m2)
    np.testing.assert_allclose(t_cmp, truth, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(t_cmr, truth, rtol=1e-9, atol=1e-9)
    assert np.max(rest_cmp) < 1e-9 and np.max(rest_cmr) < 1e-9


@pytest.mark.parametrize("sign", SIGNS)
def test_polar_corrected_matches(sign):
    st_, m1, m2 = states(4, 1000, sign)
    truth = kinetic_embedding(st_, m1, m2)
    printed, corrected, flags = kinetic_polar(st_, m1, m2)
    assert flags == FROZEN_CORRECTIONS[sign]
    np.testing.assert_allclose(corrected, truth, rtol=1e-9, atol=1e-9)
    assert np.max(np.abs(printed - truth)) > 1e-2


def test_printed_hyperbolic_relative_form_differs():
    st_, m1, m2 = states(5, 200, H)
    truth = kinetic_embedding(st_, m1, m2)
    t_cmr_printed, _ = kinetic_y12(st_, m1, m2, as_printed=True)
    assert np.max(np.abs(t_cmr_printed - truth)) > 1e-2


@pytest.mark.parametrize("sign", SIGNS)
def test_cross_terms_generic_nonzero(sign):
    st_, m1, m2 = states(6, 500, sign)
    assert np.min(cross_terms(st_, m1, m2).magnitude()) > 1e-10


@pytest.mark.parametrize("sign", SIGNS)
def test_calibration_reproduces_frozen_set(sign):
    st_, m1, m2 = states(7, 100, sign)
    best, resid, table = calibrate_corrections(st_, m1, m2)
    assert best == FROZEN_CORRECTIONS[sign]
    assert resid < 1e-9
    # every other choice is clearly worse
    assert sorted(table.values())[1] > 1e-3


@pytest.mark.parametrize("sign", SIGNS)
def test_printed_polar_flags_are_not_best(sign):
    st_, m1, m2 = states(8, 50, sign)
    truth = kinetic_embedding(st_, m1, m2)
    val, _ = kinetic_polar_value(st_, m1, m2, PRINTED[sign])
    assert np.max(np.abs(val - truth)) > 1e-2


@pytest.mark.parametrize("sign", SIGNS)
def test_equal_mass_form(sign):
    rng = np.random.default_rng(9)
    st_ = sampling.random_states(rng, 500, sign)
    m = 1.7
    truth = kinetic_embedding(st_, m, m)
    _, corrected = kinetic_equal_mass(st_, m)
    np.testing.assert_allclose(corrected, truth, rtol=1e-10, atol=1e-10)
    _, polar, _ = kinetic_polar(st_, m, m)
    np.testing.assert_allclose(corrected, polar, rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("sign", SIGNS)
def test_equal_mass_dumbbell_is_quarter_m_rdot_squared(sign):
    m, rdot = 1.3, 0.8
    st_ = sampling.dumbbell_states(11, 20, sign, m, m, rdot=rdot, spin=False)
    np.testing.assert_allclose(kinetic_embedding(st_, m, m), m * rdot ** 2 / 4, rtol=1e-12)
    _, eq = kinetic_equal_mass(st_, m)
    np.testing.assert_allclose(eq, m * rdot ** 2 / 4, rtol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(SIGNS))
def test_dumbbell_cm_rest_and_no_cross_terms(seed, sign):
    rng = np.random.default_rng(seed)
    m1, m2 = sampling.random_masses(rng, 1)
    db = sampling.dumbbell_states(rng, 5, sign, m1[0], m2[0])
    rates = kinematic_rates(db.config(m1[0], m2[0]))
    assert np.max(rates.Xc_dot.magnitude()) < 1e-12
    assert np.max(cross_terms(db, m1[0], m2[0]).magnitude()) < 1e-12


def test_polar_decompose_example():
    st_ = PhaseState([0, 0, 0], [np.tan(0.5), 0, 0], [0, 0, 0], [0, 0, 0], S)
    cfg = st_.config(1.0, 1.0)
    pol = polar_decompose(relative_variables(cfg), kinematic_rates(cfg))
    assert pol.r == pytest.approx(0.5, abs=1e-15)
    np.testing.assert_allclose(pol.n.im, [1, 0, 0], atol=1e-15)
    assert pol.rdot == 0


@pytest.mark.parametrize("sign", SIGNS)
def test_polar_reconstructs(sign):
    st_, m1, m2 = states(12, 200, sign)
    cfg = st_.config(m1, m2)
    rel, rates = relative_variables(cfg), kinematic_rates(cfg)
    pol = polar_decompose(rel, rates)
    y, yd = pol.reconstruct()
    assert np.max((y - rel.Y12).magnitude()) < 1e-12
    assert np.max((yd - rates.Y12_dot).magnitude()) < 1e-10
    assert np.max(pol.n_norm_residual) < 1e-12


def test_polar_coincident_points_raise():
    st_ = PhaseState([0.1, 0, 0], [0.1, 0, 0], [0, 1.0, 0], [0, 0, 0], H)
    cfg = st_.config(1.0, 1.0)
    with pytest.raises(CoincidentPoints):
        polar_decompose(relative_variables(cfg), kinematic_rates(cfg))


@pytest.mark.parametrize("sign", SIGNS)
def test_small_r_residual_scales_quadratically(sign):
    m1, m2 = 1.2, 0.7
    res = []
    for r in (1e-2, 1e-3):
        st_ = sampling.collinear_states(13, 200, sign, r)
        res.append(np.abs(kinetic_small_r(st_, m1, m2) - kinetic_embedding(st_, m1, m2)))
    ratio = np.median(res[0] / res[1])
    assert 80 < ratio < 120


@pytest.mark.parametrize("sign", SIGNS)
def test_small_r_dumbbell_is_fourth_order(sign):
    # with the CM at rest the r^2 corrections cancel, leaving r^4
    m1, m2 = 1.2, 0.7
    res = []
    for r in (1e-1, 1e-2):
        st_ = sampling.dumbbell_states(14, 50, sign, m1, m2, r=r, spin=False)
        res.append(np.abs(kinetic_small_r(st_, m1, m2) - kinetic_embedding(st_, m1, m2)))
    assert np.median(res[0] / res[1]) > 5e3


def test_small_r_printed_hyperbolic_sign():
    st_ = sampling.collinear_states(15, 20, H, 1e-3)
    truth = kinetic_embedding(st_, 1.0, 1.0)
    printed = kinetic_small_r(st_, 1.0, 1.0, as_printed=True)
    assert np.max(np.abs(printed - truth)) > 1e-2


@pytest.mark.parametrize("sign", SIGNS)
def test_audit_report(sign):
    st_ = PhaseState([0.1, -0.2, 0.05], [-0.3, 0.1, 0.2], [0.4, 0.1, -0.3], [0.0, 0.5, 0.2], sign)
    rep = audit(st_, 1.0, 1.0)
    for key in ("chart", "cm_particle", "cm_relative", "polar", "equal_mass", "small_r"):
        assert key in rep.values
    for key in ("chart", "cm_particle", "cm_relative", "polar", "equal_mass"):
        assert rep.residuals[key] < 1e-9
    assert not rep.errors


def test_audit_reports_coincident_points():
    st_ = PhaseState([0.1, 0, 0], [0.1, 0, 0], [0, 1.0, 0], [0, 0, 0], S)
    rep = audit(st_, 1.0, 2.0)
    assert "polar" in rep.errors
    assert rep.residuals["cm_particle"] < 1e-12


@pytest.mark.parametrize("sign", SIGNS)
def test_coincident_points_moving_together_are_pure_cm_motion(sign):
    st_ = PhaseState([0.2, -0.1, 0.3], [0.2, -0.1, 0.3], [0.4, 0.1, -0.2], [0.4, 0.1, -0.2], sign)
    cfg = st_.config(1.1, 0.6)
    rates = kinematic_rates(cfg)
    assert np.max(rates.Y1_dot.magnitude()) < 1e-15 and np.max(rates.Y2_dot.magnitude()) < 1e-15
    from curvebody.ring import bq_mul
    cm = 0.5 * 1.7 * bq_mul(rates.Xc_dot, rates.Xc_dot.bar()).s.re
    value, _ = kinetic_cm_rel(st_, 1.1, 0.6)
    assert value == pytest.approx(cm, abs=1e-14)
    assert value == pytest.approx(kinetic_embedding(st_, 1.1, 0.6), abs=1e-14)


@pytest.mark.parametrize("sign", SIGNS)
def test_dumbbell_closed_form(sign):
    # with the CM at rest only the radial and axis-turning terms survive
    m1, m2 = 1.4, 0.6
    st_ = sampling.dumbbell_states(16, 50, sign, m1, m2)
    cfg = st_.config(m1, m2)
    pol = polar_decompose(relative_variables(cfg), kinematic_rates(cfg), m1, m2)
    sigma = int(sign)
    s, _ = pol.trig()
    turn = sigma * pol.ndot.dot(pol.ndot).re
    f = pol.F
    lprime = (m1 * m2 * (m1 + m2) / f) * (pol.rdot ** 2 + turn * s ** 2) \
        - sigma * m1 ** 2 * m2 ** 2 * (m1 + m2) * s ** 2 * pol.rdot ** 2 / f ** 2
    assert np.max(turn) > 1e-2
    np.testing.assert_allclose(lprime / 2, kinetic_embedding(st_, m1, m2), rtol=1e-10, atol=1e-12)
