"""Smooth flat-top mollifier built from the standard bump exp(1 - 1/(1-u^2)).

rho is even, identically 1 on [-flat_radius, flat_radius], supported in
(-support_radius, support_radius), with values in [0, 1].  The transition
is the integrated bump, so all derivatives vanish at both junction points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Mollifier", "bump"]


def bump(u: float) -> float:
    """exp(1 - 1/(1-u^2)) on (-1, 1), zero outside."""
    if abs(u) >= 1.0:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - u * u))


def _bump_deriv(u: float) -> float:
    if abs(u) >= 1.0:
        return 0.0
    g = 1.0 - u * u
    return bump(u) * (-2.0 * u / (g * g))


# Transition profile: S(w) = int_0^w bump(2v-1) dv / Z, w in [0, 1].
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _step_integral(w: float) -> float:
    if w <= 0.0:
        return 0.0
    x = 0.5 * w * (_GL_NODES + 1.0)
    vals = np.array([bump(2.0 * v - 1.0) for v in x])
    return 0.5 * w * float(np.dot(_GL_WEIGHTS, vals))


_STEP_NORM = _step_integral(1.0)


@dataclass(frozen=True)
class Mollifier:
    flat_radius: float = 0.5
    support_radius: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.flat_radius < self.support_radius:
            raise ValueError("need 0 < flat_radius < support_radius")
        if self.support_radius != 1.0:
            raise ValueError("support_radius is fixed to 1")

    def _w(self, a: float) -> float:
        return (a - self.flat_radius) / (self.support_radius - self.flat_radius)

    def __call__(self, t: float) -> float:
        a = abs(t)
        if a <= self.flat_radius:
            return 1.0
        if a >= self.support_radius:
            return 0.0
        return 1.0 - _step_integral(self._w(a)) / _STEP_NORM

    def deriv(self, t: float, order: int = 1) -> float:
        """First or second derivative; identically 0 on the flat regions."""
        a = abs(t)
        if a <= self.flat_radius or a >= self.support_radius:
            return 0.0
        width = self.support_radius - self.flat_radius
        w = self._w(a)
        sign = 1.0 if t >= 0 else -1.0
        if order == 1:
            return -sign * bump(2.0 * w - 1.0) / (_STEP_NORM * width)
        if order == 2:
            return -2.0 * _bump_deriv(2.0 * w - 1.0) / (_STEP_NORM * width * width)
        raise ValueError("only orders 1 and 2 are implemented")

    def transform(self, u: float) -> float:
        """Unit-mass Fourier transform (1/2pi) * int rho(t) e^{-iut} dt."""
        from .quadrature import integrate

        breaks = ()
        au = abs(u)
        if au > 8.0:
            n = int(au / math.pi) + 1
            breaks = tuple(k * math.pi / au for k in range(1, n + 1) if k * math.pi / au < 1.0)
        r = integrate(lambda t: self(t) * math.cos(u * t), 0.0, self.support_radius,
                      breakpoints=breaks)
        return r.value / math.pi
