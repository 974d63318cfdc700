"""Dirichlet series evaluation, abscissas, the mean-value identity, and
the parametrix-style expansion."""

import math

import numpy as np
import pytest

from cusplab.dirichlet import (ClassicalDirichletSeries, ConvergenceError,
                               ExponentialDirichletSeries, ParametrixExpansion,
                               TailModel, mean_value_bound, mean_value_integral,
                               p1_p2_profile)
from cusplab.quadrature import QuadratureSpec, integrate
from cusplab.special import riemann_zeta


def test_evaluate_trivial_cases():
    one = ExponentialDirichletSeries.from_pairs([(1.0, 0.0)])
    assert one.evaluate(3.7 + 2j) == 1.0
    two = ClassicalDirichletSeries.from_pairs([(1.0, 2.0)])
    assert two.evaluate(2.0) == pytest.approx(0.25, rel=1e-14)


def test_truncated_zeta_tail_certified():
    # sum_{n >= 2} n^{-s} at s = 3 should certify against zeta(3) - 1
    n_max = 4000
    terms = [(1.0, float(n)) for n in range(2, n_max)]
    tail = TailModel(coef_bound=1.0, abscissa=1.0, gap=math.log(n_max / (n_max - 1.0)))
    L = ClassicalDirichletSeries.from_pairs(terms)
    got = L.evaluate(3.0)
    want = riemann_zeta(3.0).real - 1.0
    assert got == pytest.approx(want, abs=2e-7)  # truncation level
    assert want == pytest.approx(0.2020569, abs=1e-7)


def test_convergence_margin_enforced():
    L = ExponentialDirichletSeries.from_pairs([(1.0, 1.0)],
                                              tail=TailModel(1.0, 0.5, 1.0))
    with pytest.raises(ConvergenceError):
        L.evaluate(0.4)


def test_abscissa_sentinels_and_estimates():
    finite = ExponentialDirichletSeries.from_pairs([(1.0, 0.0), (2.0, 1.0)])
    assert finite.abscissa_absolute() == float("-inf")
    zeta_like = ClassicalDirichletSeries.from_pairs(
        [(1.0, float(k)) for k in range(1, 600)])
    assert zeta_like.abscissa_absolute() == pytest.approx(1.0, abs=5e-3)
    # the tail-form limsup on a truncation is biased by log(1 - j/n)/l_j,
    # an O(1/log n) effect, hence the loose tolerance
    decaying = ExponentialDirichletSeries.from_pairs(
        [(1.0 / k ** 2, math.log(k)) for k in range(1, 4000)])
    assert decaying.abscissa_absolute() == pytest.approx(-1.0, abs=0.05)


def test_mean_value_closed_form_against_quadrature():
    L = ClassicalDirichletSeries.from_pairs([(1.0, 2.0)])
    # full period: zero
    assert mean_value_integral(L, 0.0, 2 * math.pi / math.log(2)) == pytest.approx(0.0, abs=1e-12)
    # quarter period: 1/log 2
    got = mean_value_integral(L, 0.0, 0.5 * math.pi / math.log(2))
    assert got == pytest.approx(1.0 / math.log(2), rel=1e-12)
    # quadrature of int_0^T Re L(it) dt
    T = 7.3
    quad = integrate(lambda t: (L.evaluate(complex(0.0, t))).real, 0.0, T,
                     QuadratureSpec(1e-12, 1e-14)).value
    assert mean_value_integral(L, 0.0, T) == pytest.approx(quad, abs=1e-10)


def test_mean_value_bound_sweep():
    rng = np.random.default_rng(2)
    lam = np.cumsum(rng.uniform(0.2, 1.0, 10)) + 1.2
    c = rng.uniform(-2, 2, 10)
    L = ClassicalDirichletSeries.from_pairs(list(zip(c, lam)))
    b = 0.7
    bound = mean_value_bound(L, b)
    for T in np.geomspace(0.1, 1e6, 50):
        assert abs(mean_value_integral(L, b, T)) <= bound + 1e-12


def test_mean_value_class_requirement():
    L = ClassicalDirichletSeries.from_pairs([(1.0, 0.9), (1.0, 2.0)])
    with pytest.raises(ConvergenceError):
        mean_value_integral(L, 0.0, 1.0)
    assert not L.in_decaying_class()


def test_exponential_classical_roundtrip():
    lam = [2.0, 3.0, 5.0]
    c = [0.4, -1.0, 2.0]
    L = ClassicalDirichletSeries.from_pairs(list(zip(c, lam)))
    E = L.to_exponential()
    for (ce, le), l0 in zip(E.terms, lam):
        assert math.exp(le) == pytest.approx(l0, rel=1e-15)
    s = 1.7 + 0.3j
    assert E.evaluate(s) == pytest.approx(L.evaluate(s), rel=1e-13)


def test_parametrix_eval_examples():
    single = ExponentialDirichletSeries.from_pairs([(1.0, 0.0)])
    p = ParametrixExpansion(kappa=2, d=1, series_list=(single,))
    assert p.evaluate(4.0) == pytest.approx(0.25, rel=1e-14)

    zero = ExponentialDirichletSeries.from_pairs([(0.0, 0.0)])
    p2 = ParametrixExpansion(kappa=2, d=1, series_list=(zero, single))
    s = 3 + 2j
    assert p2.evaluate(s) == pytest.approx(s ** -2.0, rel=1e-13)

    decay = ExponentialDirichletSeries.from_pairs([(1.0, 0.5)])
    p3 = ParametrixExpansion(kappa=1, d=2, series_list=(decay,))
    assert abs(p3.evaluate(80.0)) < 1e-18


def test_leading_term():
    L = ExponentialDirichletSeries.from_pairs([(0.0, 1.0), (3.0, 2.0)])
    assert L.leading_term() == (3.0, 2.0)
    zero = ExponentialDirichletSeries.from_pairs([(0.0, 1.0), (0.0, 2.0)])
    assert zero.leading_term() is None
    generic = ExponentialDirichletSeries.from_pairs([(1.5, 0.3), (2.0, 1.0)])
    assert generic.leading_term() == (1.5, 0.3)


def test_p1_p2_profile_single_term():
    # single-term L0 = a e^{-s l}: log-derivative residual is exactly the
    # prefactor -(kappa d/2)/s, so residual*|s| is bounded by kappa d/2
    a, ell = 1.7, 0.4
    L0 = ExponentialDirichletSeries.from_pairs([(a, ell)])
    p = ParametrixExpansion(kappa=2, d=1, series_list=(L0,))
    out = p1_p2_profile(p, b=1.0, t_grid=np.linspace(2.0, 60.0, 25))
    assert out["sup_p1_scaled"] <= 0.5 * p.kappa * p.d + 1e-9
    assert out["ell_star"] == ell
    for row in out["rows"]:
        assert row["re_logderiv_leading"] == pytest.approx(-ell, abs=1e-12)


def test_p1_p2_profile_two_terms_decay():
    L0 = ExponentialDirichletSeries.from_pairs([(1.0, 0.2), (0.6, 0.9)])
    L1 = ExponentialDirichletSeries.from_pairs([(0.8, 0.3)])
    p = ParametrixExpansion(kappa=1, d=1, series_list=(L0, L1))
    out = p1_p2_profile(p, b=1.2, t_grid=np.geomspace(5.0, 200.0, 12))
    # scaled residuals stay bounded: that is the O(1/s) structure
    assert out["sup_p1_scaled"] < 10.0
    assert out["sup_p2_scaled"] < 10.0


def test_p1_p2_profile_degenerate_kappa_zero():
    L0 = ExponentialDirichletSeries.from_pairs([(2.0, 0.5)])
    p = ParametrixExpansion(kappa=0, d=3, series_list=(L0,))
    out = p1_p2_profile(p, b=1.0, t_grid=[3.0, 10.0, 30.0])
    resid = [r["p2_residual_scaled"] for r in out["rows"]]
    assert max(abs(v) for v in resid) < 1e-10


def test_series_validation():
    with pytest.raises(ValueError):
        ExponentialDirichletSeries.from_pairs([(1.0, 1.0), (1.0, 0.5)])
    with pytest.raises(ValueError):
        ClassicalDirichletSeries.from_pairs([(1.0, -2.0)])
    with pytest.raises(ValueError):
        ParametrixExpansion(kappa=1, d=1, series_list=())


def test_series_json_roundtrip():
    L = ExponentialDirichletSeries.from_pairs([(1.0, 0.0), (complex(0, 2), 1.5)])
    back = ExponentialDirichletSeries.from_json(L.to_json())
    assert back.terms == L.terms
    C = ClassicalDirichletSeries.from_pairs([(0.5, 2.0), (-1.0, 3.0)])
    assert ClassicalDirichletSeries.from_json(C.to_json()).terms == C.terms
