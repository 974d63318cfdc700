"""Mollifier contract, test-function pair (psi, psi_hat), and the M_alpha
distribution family."""

import math

import numpy as np
import pytest

from cusplab.malpha import (MAlphaIndex, MAlphaModeError, SmoothFunction,
                            m_alpha_eval, m_alpha_pair)
from cusplab.mollifier import Mollifier
from cusplab.quadrature import QuadratureSpec, integrate
from cusplab.special import log_gamma
from cusplab.testfunction import TestFunctionPsi


# ------------------------------------------------------------ mollifier

def test_mollifier_contract():
    m = Mollifier()
    for t in np.linspace(-0.5, 0.5, 11):
        assert m(t) == 1.0
    for t in (1.0, 1.3, -2.0):
        assert m(t) == 0.0
    grid = np.linspace(-1.2, 1.2, 241)
    vals = np.array([m(t) for t in grid])
    assert np.all(vals >= 0.0) and np.all(vals <= 1.0)
    for t in grid:
        assert m(t) == m(-t)  # exact parity (evaluated through |t|)


def test_mollifier_derivatives_match_finite_differences():
    m = Mollifier()
    h = 1e-6
    for t in (0.55, 0.72, 0.9, -0.61):
        fd1 = (m(t + h) - m(t - h)) / (2 * h)
        assert abs(m.deriv(t, 1) - fd1) < 1e-8
        fd2 = (m(t + h) - 2 * m(t) + m(t - h)) / (h * h)
        assert abs(m.deriv(t, 2) - fd2) < 1e-3 * max(1.0, abs(fd2))
    assert m.deriv(0.2, 1) == 0.0 and m.deriv(1.1, 2) == 0.0


def test_mollifier_validation():
    with pytest.raises(ValueError):
        Mollifier(flat_radius=1.5)
    with pytest.raises(ValueError):
        Mollifier(support_radius=2.0)


# ------------------------------------------------------------------- psi

def test_psi_values_and_parity():
    psi = TestFunctionPsi(10.0, 0.5)
    assert psi(0.0) == pytest.approx(10.0 / math.pi, abs=1e-15)
    for t in (0.123, 0.7, 1.5):
        assert psi(t) == psi(-t)
    # support |t| < 1/A
    assert psi(2.0) == 0.0 and psi(-2.1) == 0.0
    # near the removable singularity the direct formula and series agree
    t = math.pi / (2 * 10.0)
    assert psi(t) == pytest.approx(math.sin(math.pi / 2) / (math.pi * t), rel=1e-12)


def test_psi_derivatives():
    psi = TestFunctionPsi(7.0, 0.8)
    h = 1e-6
    for t in (0.05, 0.4, 1.1):
        fd = (psi(t + h) - psi(t - h)) / (2 * h)
        assert abs(psi.deriv(t, 1) - fd) < 1e-7
        fd2 = (psi(t + h) - 2 * psi(t) + psi(t - h)) / (h * h)
        assert abs(psi.deriv(t, 2) - fd2) < 1e-3 * max(1.0, abs(fd2))


def test_psi_hat_against_defining_quadrature():
    psi = TestFunctionPsi(8.0, 0.5)
    for r in (0.0, 3.0, 8.0, 16.0):
        direct = integrate(lambda t: psi(t) * math.cos(r * t), 0.0, psi.support_radius,
                           QuadratureSpec(1e-12, 1e-14, 4000),
                           breakpoints=list(np.arange(0.1, 2.0, 0.11))).value * 2.0
        assert psi.hat(r) == pytest.approx(direct, abs=1e-9)


def test_psi_hat_indicator_shape():
    # the deviation of psi_hat from the indicator is the mollifier
    # transform's tail beyond T/A, which decays like exp(-c sqrt(T/A)):
    # A*T = 250 brings it below 1e-6
    psi = TestFunctionPsi(250.0, 1.0)
    assert abs(psi.hat(0.0) - 1.0) < 1e-6
    assert abs(psi.hat(500.0)) < 1e-5
    assert 1.0 - 1e-4 < psi.hat(125.0) < 1.0 + 1e-4
    small = TestFunctionPsi(10.0, 0.5)
    assert small.hat(5.0) == pytest.approx(small.hat(-5.0), abs=1e-12)


# ---------------------------------------------------------------- M_alpha

def test_m_alpha_pointwise_examples():
    assert m_alpha_eval(MAlphaIndex(0.0), -3.0) == 0.0
    assert m_alpha_eval(MAlphaIndex(0.0), 2.0) == 1.0
    assert m_alpha_eval(MAlphaIndex(1.0), 3.0) == pytest.approx(3.0, rel=1e-14)
    expected = 2.0 / math.exp(log_gamma(1.5).real)
    assert m_alpha_eval(MAlphaIndex(0.5), 4.0) == pytest.approx(expected, rel=1e-13)
    assert expected == pytest.approx(2.2567583342, abs=1e-9)


def test_m_alpha_mode_error():
    with pytest.raises(MAlphaModeError):
        m_alpha_eval(MAlphaIndex(-1.5), 1.0)
    with pytest.raises(MAlphaModeError):
        m_alpha_eval(MAlphaIndex(0.5, reduction_order=1), 1.0)


def test_recursion_identity_pointwise():
    # s M_{alpha-1}(s) = alpha M_alpha(s) on a grid
    grid = np.linspace(0.05, 8.0, 100)
    for alpha in (0.5, 1.0, 1.5, 2.0):
        for s in grid:
            lhs = s * m_alpha_eval(MAlphaIndex(alpha - 1.0), s)
            rhs = alpha * m_alpha_eval(MAlphaIndex(alpha), s)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def _gaussian_bump(center=1.2, width=0.35, R=6.0):
    # narrow enough that the tails at 0-side infinity and at R are far
    # below the tolerances (the pairing integrates by parts, so residual
    # boundary values would show up directly)
    def g0(s):
        return math.exp(-((s - center) / width) ** 2)

    def g1(s):
        return g0(s) * (-2.0 * (s - center) / width ** 2)

    def g2(s):
        return g0(s) * (4.0 * (s - center) ** 2 / width ** 4 - 2.0 / width ** 2)

    return SmoothFunction(derivs=(g0, g1, g2), support=(-R, R))


def test_pairing_delta_reduction():
    # alpha = 0, m = 1 pairs M_{-1} = delta: <delta, g> = g(0)
    g = _gaussian_bump(center=0.4, width=0.9)
    val = m_alpha_pair(MAlphaIndex(0.0, reduction_order=1), g)
    assert val == pytest.approx(g(0.0), rel=1e-10)


def test_pairing_direct_integral():
    # alpha = 1, m = 0: int s g(s) ds over s > 0
    g = _gaussian_bump()
    direct = integrate(lambda s: s * g(s), 0.0, 4.0, QuadratureSpec(1e-12, 1e-15)).value
    assert m_alpha_pair(MAlphaIndex(1.0, 0), g) == pytest.approx(direct, rel=1e-10)


def test_pairing_reduction_consistency():
    # same effective index alpha - m, different reductions, same value
    g = _gaussian_bump()
    pairs = [
        (MAlphaIndex(0.5, 1), MAlphaIndex(1.5, 2)),   # effective -0.5
        (MAlphaIndex(-0.5, 1), MAlphaIndex(0.5, 2)),  # effective -1.5
        (MAlphaIndex(1.0, 1), MAlphaIndex(0.0, 0)),   # effective 0
    ]
    for idx_a, idx_b in pairs:
        va = m_alpha_pair(idx_a, g)
        vb = m_alpha_pair(idx_b, g)
        assert abs(va - vb) <= 1e-8 * max(1.0, abs(va))


def test_pairing_rejects_low_raised_index():
    g = _gaussian_bump()
    with pytest.raises(MAlphaModeError):
        m_alpha_pair(MAlphaIndex(-1.5, 1), g)
