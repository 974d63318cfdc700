"""Generators of test functions for the zero-counting suite.

Blaschke-type factors (s - rho)/(s - d + conj(rho)) are unimodular on the
axis Re s = d/2.  Reality on the real axis requires pairing each complex
rho with its conjugate, so the generated products use conjugate pairs (a
real rho contributes a single real factor).  An optional zero-free factor
exp(a (z - d/2)), a real, is unimodular on the axis and real on the line.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .zerocount import AnalyticFunction, ZeroEntry, ZeroList

__all__ = [
    "blaschke_factor",
    "blaschke_product",
    "polynomial_function",
    "random_blaschke_family",
    "random_polynomial",
]


def blaschke_factor(rho: complex, d: float) -> AnalyticFunction:
    rb = complex(rho).conjugate()
    return AnalyticFunction(
        value=lambda z: (z - rho) / (z - d + rb),
        derivative=lambda z: ((z - d + rb) - (z - rho)) / (z - d + rb) ** 2,
        name=f"blaschke({rho:.3g})")


def blaschke_product(zeros_upper: list[complex], d: float,
                     exp_slope: float = 0.0) -> tuple[AnalyticFunction, ZeroList]:
    """Product of conjugate-pair Blaschke factors times exp(a (z - d/2)).

    zeros_upper lists the zeros with Im >= 0; each strictly complex one is
    silently paired with its conjugate to keep the product real on the
    real axis.  Returns the function and the full zero list.
    """
    zs: list[complex] = []
    for rho in zeros_upper:
        rho = complex(rho)
        zs.append(rho)
        if rho.imag != 0.0:
            zs.append(rho.conjugate())
    poles = [d - z.conjugate() for z in zs]

    def value(z: complex) -> complex:
        out = cmath.exp(exp_slope * (z - 0.5 * d))
        for zz, pp in zip(zs, poles):
            out *= (z - zz) / (z - pp)
        return out

    def logderiv(z: complex) -> complex:
        out = complex(exp_slope)
        for zz, pp in zip(zs, poles):
            out += 1.0 / (z - zz) - 1.0 / (z - pp)
        return out

    fn = AnalyticFunction(
        value=value,
        derivative=lambda z: value(z) * logderiv(z),
        name=f"blaschke_product[{len(zs)} zeros]")
    return fn, ZeroList([ZeroEntry(z, 1) for z in zs])


def polynomial_function(coeffs: np.ndarray) -> AnalyticFunction:
    """Polynomial with highest-degree coefficient first (numpy convention)."""
    dcoeffs = np.polyder(coeffs)
    return AnalyticFunction(
        value=lambda z: complex(np.polyval(coeffs, z)),
        derivative=lambda z: complex(np.polyval(dcoeffs, z)),
        name=f"poly[deg {len(coeffs) - 1}]")


def random_polynomial(rng: np.random.Generator, degree: int = 10) -> tuple[AnalyticFunction, np.ndarray]:
    roots = rng.uniform(-1, 1, degree) + 1j * rng.uniform(-1, 1, degree)
    coeffs = np.poly(roots)
    return polynomial_function(coeffs), roots


def random_blaschke_family(rng: np.random.Generator, count: int, d: float, b: float,
                           T: float, max_pairs: int = 8,
                           margin: float = 0.15) -> list[tuple[AnalyticFunction, ZeroList]]:
    """Random conjugate-pair Blaschke products with zeros inside
    (d/2, b) x (0, T), kept `margin` away from every counting contour."""
    out = []
    lo_x = 0.5 * d + margin * (b - 0.5 * d)
    hi_x = b - margin * (b - 0.5 * d)
    for _ in range(count):
        n = int(rng.integers(1, max_pairs + 1))
        zeros = [complex(rng.uniform(lo_x, hi_x), rng.uniform(margin * T, (1 - margin) * T))
                 for _ in range(n)]
        slope = float(rng.uniform(-0.3, 0.3))
        out.append(blaschke_product(zeros, d, exp_slope=slope))
    return out
