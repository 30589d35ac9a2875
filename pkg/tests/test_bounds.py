import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcspectral import bounds


def bracket_direct(p, q, r):
    """Bracket written in the original q variables, independent of the gap form."""
    ratio = (1 - 1 / q + 1 / r) / (0.5 - 1 / q + 1 / r)
    return 2**p * ratio ** (p - p / q + p / r)


def grid_oracle(p, r, q_star, points=4096):
    qs = np.linspace(q_star * (1 + 1e-9), 2.0, points)
    return min(bracket_direct(p, q, r) for q in qs)


def test_exponents_example():
    r, q_star = bounds.exponents(3, 3)
    assert r == pytest.approx(4.5) and q_star == pytest.approx(18 / 13)
    assert bounds.exponents(4, "inf") == (4.0, pytest.approx(4 / 3))


@given(st.floats(2.01, 50), st.one_of(st.floats(1.01, 1e6), st.just(math.inf)))
def test_exponent_identity(p, beta):
    r, q_star = bounds.exponents(p, beta)
    assert abs(1 / q_star - (0.5 + 1 / r)) < 1e-14


@pytest.mark.parametrize("p,beta", [(2.0, 2.0), (3.0, 1.0), (1.5, "inf")])
def test_exponent_errors(p, beta):
    with pytest.raises(bounds.ParameterError):
        bounds.exponents(p, beta)


def test_poincare_constant_examples():
    assert bounds.poincare_constant_upper(4, 2) == pytest.approx(1.5174, abs=1e-4)
    # direct evaluation at delta = 3/8 gives 2.10018 (checked with mpmath below)
    assert bounds.poincare_constant_upper(8, 2) == pytest.approx(2.1002, abs=1e-4)
    with pytest.raises(bounds.ParameterError):
        bounds.poincare_constant_upper(2, 1)


@pytest.mark.parametrize("r,q", [(4, 2), (8, 2), (3, 1.5), (100, 2)])
def test_poincare_constant_against_mpmath(r, q):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    d = mpmath.mpf(1) / q - mpmath.mpf(1) / r
    ref = 2**-d * ((1 - d) / (1 - 2 * d)) ** (1 - d) * mpmath.pi**d
    assert bounds.poincare_constant_upper(r, q) == pytest.approx(float(ref), rel=1e-14)


def test_pi_p_and_convex_bound():
    assert bounds.pi_p(2) == pytest.approx(math.pi, rel=1e-15)
    # 2 pi 3^(1/4) / (4 sin(pi/4)) = 2.92358...
    assert bounds.pi_p(4) == pytest.approx(2.92358, abs=1e-5)
    assert bounds.pi_p(3) == pytest.approx(3.04699, abs=1e-5)
    assert bounds.convex_lower_bound(2, 2) == pytest.approx((math.pi / 2) ** 2, rel=1e-15)
    assert bounds.convex_lower_bound(4, 2) == pytest.approx(4.56605, abs=1e-5)


@pytest.mark.parametrize("p", [2.5, 3, 4, 7])
def test_pi_p_against_mpmath(p):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    ref = 2 * mpmath.pi * (p - 1) ** (mpmath.mpf(1) / p) / (p * mpmath.sin(mpmath.pi / p))
    assert bounds.pi_p(p) == pytest.approx(float(ref), rel=1e-14)


def test_bracket_examples():
    assert bounds.q_bracket(4, 2, 8) == pytest.approx(16 * 5**2.5, rel=1e-13)
    assert bounds.q_bracket(3, 2, 3) == pytest.approx(8 * 2.5**2.5, rel=1e-13)


@given(st.floats(2.1, 10), st.floats(2.1, 50), st.floats(0.01, 0.99))
def test_gap_form_matches_direct_form(p, r, t):
    q_star = 1 / (0.5 + 1 / r)
    q = q_star + t * (2 - q_star)
    assert bounds.q_bracket(p, q, r) == pytest.approx(bracket_direct(p, q, r), rel=1e-10)


@pytest.mark.parametrize("p,r", [(3, 3), (4, 8), (4, 4), (6, 12), (2.5, 100)])
def test_bracket_diverges_at_q_star(p, r):
    q_star = 1 / (0.5 + 1 / r)
    assert bounds.q_bracket(p, q_star + 1e-9, r) > 1e6
    with pytest.raises(bounds.ParameterError):
        bounds.q_bracket(p, q_star, r)
    with pytest.raises(bounds.ParameterError):
        bounds.q_bracket(p, 2.1, r)


@pytest.mark.parametrize("p,r,q_star", [(4, 8, 1.6), (3, 3, 1.2), (4, 4, 4 / 3), (5, 20, 20 / 11)])
def test_infimum_matches_grid_oracle(p, r, q_star):
    q_opt, value = bounds.infimum_over_q(p, r, q_star)
    oracle = grid_oracle(p, r, q_star)
    assert value <= oracle * (1 + 1e-12)
    assert value == pytest.approx(oracle, rel=1e-6)
    assert q_star < q_opt <= 2.0
    assert value == pytest.approx(bracket_direct(p, q_opt, r), rel=1e-10)


def test_infimum_below_q2_value():
    _, value = bounds.infimum_over_q(4, 8, 1.6)
    assert value <= 894.43


def test_infimum_rejects_inconsistent_exponents():
    with pytest.raises(bounds.ParameterError):
        bounds.infimum_over_q(4, 8, 1.5)


@settings(max_examples=30, deadline=None)
@given(st.floats(2.05, 10), st.one_of(st.floats(1.05, 100), st.just(math.inf)),
       st.floats(1, 10))
def test_pi_cancellation(p, beta, K):
    """Measure preserving ingredients in the beta-regular bound cancel all pi factors."""
    mp = bounds.bound_measure_preserving(p, beta, K)
    if math.isinf(beta):
        gen = bounds.bound_inf_regular(p, K, math.pi, 1.0)
    else:
        gen = bounds.bound_beta_regular(p, beta, K, math.pi, math.pi ** (1 / beta))
    assert gen.rhs == pytest.approx(mp.rhs, rel=1e-12)


def test_ellipse_display():
    a, p = 0.5, 4
    s = math.sqrt(a * a + 1)
    K = (s + a) / (s - a)
    rep = bounds.bound_measure_preserving(p, "inf", K)
    _, inf_b = bounds.infimum_over_q(p, 4, 4 / 3)
    assert rep.rhs == pytest.approx(inf_b * ((s + a) / (s - a)) ** (p / 2), rel=1e-14)


@pytest.mark.parametrize("p", [3, 4, 6])
def test_rose_petal_display(p):
    rep = bounds.bound_measure_preserving(p, "inf", 2.0)
    _, inf_b = bounds.infimum_over_q(p, rep.r, rep.q_star)
    inner = inf_b / 2**p  # drop the 2^p in front of the ratio power
    assert rep.rhs == pytest.approx(inner * (2 * math.sqrt(2)) ** p, rel=1e-13)


@pytest.mark.parametrize("A,B,n,p", [(2, 1, 3, 3), (1, 0.5, 2, 4), (3, 1, 5, 5)])
def test_epicycloid_display(A, B, n, p):
    K = (A + B) / (A - B)
    area = (A * A - B * B) * (n + 1) / n * math.pi
    rep = bounds.bound_inf_regular(p, K, area, 4 * (A * A - B * B))
    inner = rep.ingredients["bracket"] / 2**p
    display = inner * 2 ** (p + 2) * (A + B) ** p * ((n + 1) / n) ** (p / 2 - 1)
    assert rep.rhs == pytest.approx(display, rel=1e-12)


def test_identity_examples():
    _, inf4 = bounds.infimum_over_q(4, 4, 4 / 3)
    assert bounds.bound_inf_regular(4, 1, math.pi, 1).rhs == pytest.approx(inf4, rel=1e-13)
    assert bounds.bound_measure_preserving(4, "inf", 1).rhs == pytest.approx(inf4, rel=1e-15)
    _, inf3 = bounds.infimum_over_q(3, 3, 1.2)
    assert bounds.bound_inf_regular(3, 1, math.pi, 1).rhs == pytest.approx(inf3, rel=1e-13)
    r, q_star = bounds.exponents(4, 2)
    _, inf_b2 = bounds.infimum_over_q(4, r, q_star)
    rep = bounds.bound_beta_regular(4, 2, 1, math.pi, math.sqrt(math.pi))
    assert rep.rhs == pytest.approx(inf_b2, rel=1e-13)


def test_epicycloid_beta_regular_composition():
    p, beta = 4, 2
    jnorm, area = math.sqrt(10 * math.pi / 3), 1.5 * math.pi
    rep = bounds.bound_beta_regular(p, beta, 1.0, area, jnorm)
    r, q_star = bounds.exponents(p, beta)
    _, inf_b = bounds.infimum_over_q(p, r, q_star)
    expected = inf_b * math.pi ** (p / r - p / 2) * area ** ((p - 2) / 2) * jnorm
    assert rep.rhs == pytest.approx(expected, rel=1e-14)
    assert rep.mu_lower == pytest.approx(1 / expected, rel=1e-14)


@given(st.floats(2.1, 8), st.floats(1, 20), st.floats(1.001, 3))
def test_mu_lower_decreases_in_K(p, K, factor):
    lo = bounds.bound_measure_preserving(p, "inf", K * factor).mu_lower
    hi = bounds.bound_measure_preserving(p, "inf", K).mu_lower
    assert lo < hi


@pytest.mark.parametrize("p,beta", [(3, "inf"), (4, "inf"), (4, 2.0)])
def test_intro_form_matches_its_own_grid(p, beta):
    rep = bounds.bound_intro_form(p, beta, 1.0)
    r, q_star = bounds.exponents(p, beta)
    qs = np.linspace(q_star * (1 + 1e-9), 2.0, 4096)
    vals = [bounds.poincare_constant_upper(r, q) ** p * math.pi ** (p / q) for q in qs]
    assert rep.ingredients["poincare_term"] <= min(vals) * (1 + 1e-12)
    assert rep.ingredients["poincare_term"] == pytest.approx(min(vals), rel=1e-6)


def test_report_serialization():
    d = bounds.bound_measure_preserving(3, "inf", 2.0).to_dict()
    assert d["beta"] == "inf" and d["variant"] == "measure-preserving-inf"
    assert d["mu_lower"] == pytest.approx(1 / d["rhs"])


@pytest.mark.parametrize("call", [
    lambda: bounds.bound_measure_preserving(2, "inf", 1),
    lambda: bounds.bound_measure_preserving(3, "inf", 0.5),
    lambda: bounds.bound_beta_regular(3, "inf", 1, 1, 1),
    lambda: bounds.bound_beta_regular(3, 2, 1, -1, 1),
    lambda: bounds.bound_inf_regular(3, 1, 1, 0),
])
def test_parameter_errors(call):
    with pytest.raises(bounds.ParameterError):
        call()
