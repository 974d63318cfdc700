"""Closed-form integral suite for the adaptive Gauss-Kronrod integrator."""

import math

import pytest
from scipy.integrate import quad

from cusplab.quadrature import QuadratureSpec, Singularity, integrate

SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-14, max_subdivisions=2000)

# (integrand, a, b, singularities, exact value)
CLOSED_FORMS = [
    (lambda x: x, 0.0, 1.0, (), 0.5),
    (lambda x: x ** 7 - 3 * x ** 2, -1.0, 2.0, (), 255.0 / 8 - 9.0),
    (lambda x: math.exp(-x), 0.0, 5.0, (), 1.0 - math.exp(-5)),
    (lambda x: math.sin(x), 0.0, math.pi, (), 2.0),
    (lambda x: 1.0 / (1.0 + x * x), -1.0, 1.0, (), math.pi / 2),
    (lambda x: math.cos(50 * x), 0.0, 1.0, (), math.sin(50.0) / 50.0),
    (lambda x: math.log(x), 0.0, 1.0, (Singularity(0.0),), -1.0),
    (lambda x: math.log(1 - x), 0.0, 1.0, (Singularity(1.0),), -1.0),
    (lambda x: 1.0 / math.sqrt(x), 0.0, 1.0, (Singularity(0.0, -0.5),), 2.0),
    (lambda x: 1.0 / math.sqrt(1 - x), 0.0, 1.0, (Singularity(1.0, -0.5),), 2.0),
    (lambda x: x ** -0.25, 0.0, 1.0, (Singularity(0.0, -0.25),), 4.0 / 3),
    (lambda x: math.log(x) / math.sqrt(x), 0.0, 1.0, (Singularity(0.0, -0.5),), -4.0),
    (lambda x: 1.0 / math.sqrt(x * (1 - x)), 0.0, 1.0,
     (Singularity(0.0, -0.5), Singularity(1.0, -0.5)), math.pi),
    (lambda x: math.log(x) / math.sqrt(x * (1 - x)), 0.0, 1.0,
     (Singularity(0.0, -0.5), Singularity(1.0, -0.5)), -2.0 * math.pi * math.log(2)),
    (lambda x: math.sqrt(x), 0.0, 4.0, (), 16.0 / 3),
    (lambda x: math.exp(x) * math.sin(x), 0.0, 2.0,
     (), 0.5 * (math.exp(2) * (math.sin(2) - math.cos(2)) + 1.0)),
    (lambda x: abs(x - 0.3) ** 0.5, 0.3, 1.0, (Singularity(0.3, 0.5),),
     (0.7 ** 1.5) / 1.5),
    (lambda x: math.log(x) ** 2, 0.0, 1.0, (Singularity(0.0),), 2.0),
    (lambda x: x * math.log(x), 0.0, 1.0, (Singularity(0.0),), -0.25),
    (lambda x: 1.0 / (x ** 0.9), 0.0, 1.0, (Singularity(0.0, -0.9),), 10.0),
]


@pytest.mark.parametrize("case", range(len(CLOSED_FORMS)))
def test_closed_form_suite(case):
    f, a, b, sing, exact = CLOSED_FORMS[case]
    out = integrate(f, a, b, SPEC, singularities=sing)
    assert out.converged
    tol = max(SPEC.abs_tol, SPEC.rel_tol * abs(exact))
    assert abs(out.value - exact) <= 10.0 * tol


def test_sin_u_over_u2_paper_constant():
    # the displayed arcsine-log integral: (1/pi) int log x / sqrt(x(1-x)) = -2 log 2
    out = integrate(lambda x: math.log(x) / math.sqrt(x * (1 - x)), 0.0, 1.0, SPEC,
                    singularities=(Singularity(0.0, -0.5), Singularity(1.0, -0.5)))
    assert abs(out.value / math.pi - (-2.0 * math.log(2))) < 1e-10


def test_infinite_upper_limit():
    out = integrate(lambda x: math.exp(-x * x), 0.0, math.inf)
    assert abs(out.value - 0.5 * math.sqrt(math.pi)) < 1e-10


def test_complex_integrand():
    out = integrate(lambda t: complex(math.cos(t), math.sin(3 * t)), 0.0, 1.0)
    assert abs(out.value.real - math.sin(1.0)) < 1e-12
    assert abs(out.value.imag - (1 - math.cos(3.0)) / 3.0) < 1e-12


def test_nonconvergence_flag_carries_estimate():
    rough = lambda x: math.sin(1.0 / max(x, 1e-300)) if x > 0 else 0.0
    out = integrate(rough, 0.0, 1.0, QuadratureSpec(rel_tol=1e-14, abs_tol=0.0,
                                                    max_subdivisions=8))
    assert not out.converged
    ref, _ = quad(rough, 0, 1, limit=400)
    assert abs(out.value - ref) < 0.1  # best estimate is still in the ballpark


def test_breakpoints_match_plain_result():
    f = lambda x: math.sin(40 * x) * math.exp(-x)
    a = integrate(f, 0.0, 3.0, SPEC).value
    b = integrate(f, 0.0, 3.0, SPEC, breakpoints=[k * math.pi / 40 for k in range(1, 38)]).value
    assert abs(a - b) < 1e-11


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)
    with pytest.raises(ValueError):
        Singularity(0.0, power=-1.0)


def test_reversed_and_empty_ranges():
    assert integrate(lambda x: x, 1.0, 1.0).value == 0.0
    fwd = integrate(lambda x: x * x, 0.0, 2.0).value
    rev = integrate(lambda x: x * x, 2.0, 0.0).value
    assert abs(fwd + rev) < 1e-14
