"""The band-limited test function psi(t) = (1/pi) (sin(tT)/t) rho(A t).

Its Fourier transform (convention psi_hat(r) = int psi(t) e^{-irt} dt) is
the indicator of [-T, T] convolved with the unit-mass transform of the
scaled mollifier, so psi_hat ~ 1 on (-T, T) and ~ 0 outside, with a
transition layer of width ~A around +/-T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .mollifier import Mollifier
from .quadrature import QuadratureSpec, integrate

__all__ = ["TestFunctionPsi"]


def _sinc_scaled(t: float, T: float) -> float:
    """sin(tT)/t with the removable singularity filled by series."""
    x = t * T
    if abs(x) < 1e-4:
        x2 = x * x
        return T * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0))
    return math.sin(x) / t


def _sinc_scaled_d1(t: float, T: float) -> float:
    """d/dt [sin(tT)/t]."""
    x = t * T
    if abs(x) < 1e-4:
        # series: -T^3 t/3 * (1 - x^2/10)
        return -T * T * T * t / 3.0 * (1.0 - x * x / 10.0)
    return (T * math.cos(x) - math.sin(x) / t) / t


def _sinc_scaled_d2(t: float, T: float) -> float:
    x = t * T
    if abs(x) < 1e-4:
        return -T ** 3 / 3.0 + T ** 5 * t * t / 10.0
    return (-T * T * math.sin(x) - 2.0 * T * math.cos(x) / t + 2.0 * math.sin(x) / (t * t)) / t


@dataclass(frozen=True)
class TestFunctionPsi:
    cutoff_T: float
    scale_A: float
    mollifier: Mollifier = field(default_factory=Mollifier)

    def __post_init__(self):
        if self.cutoff_T <= 0 or self.scale_A <= 0:
            raise ValueError("cutoff_T and scale_A must be positive")

    @property
    def support_radius(self) -> float:
        return self.mollifier.support_radius / self.scale_A

    def __call__(self, t: float) -> float:
        if abs(t) >= self.support_radius:
            return 0.0
        return _sinc_scaled(t, self.cutoff_T) * self.mollifier(self.scale_A * t) / math.pi

    def deriv(self, t: float, order: int = 1) -> float:
        if abs(t) >= self.support_radius:
            return 0.0
        T, A = self.cutoff_T, self.scale_A
        s0 = _sinc_scaled(t, T)
        s1 = _sinc_scaled_d1(t, T)
        r0 = self.mollifier(A * t)
        r1 = self.mollifier.deriv(A * t, 1)
        if order == 1:
            return (s1 * r0 + s0 * A * r1) / math.pi
        if order == 2:
            s2 = _sinc_scaled_d2(t, T)
            r2 = self.mollifier.deriv(A * t, 2)
            return (s2 * r0 + 2.0 * A * s1 * r1 + A * A * s0 * r2) / math.pi
        raise ValueError("only orders 1 and 2 are implemented")

    def hat(self, r: complex | float, spec: QuadratureSpec | None = None) -> float | complex:
        """psi_hat(r) = int psi(t) e^{-irt} dt, by panelized quadrature.

        Real r gives 2 int_0^R psi(t) cos(rt) dt (psi is even and real);
        purely imaginary r = i*rho is accepted for small-eigenvalue terms.
        """
        spec = spec or QuadratureSpec(rel_tol=1e-10, abs_tol=1e-12, max_subdivisions=4000)
        R = self.support_radius
        if isinstance(r, complex) and r.imag != 0.0:
            if r.real != 0.0:
                raise ValueError("hat() supports real or purely imaginary frequencies")
            rho = r.imag
            f = lambda t: self(t) * math.cosh(rho * t)
            freq = self.cutoff_T
        else:
            rr = float(r.real if isinstance(r, complex) else r)
            f = lambda t: self(t) * math.cos(rr * t)
            freq = max(abs(rr), self.cutoff_T)
        step = math.pi / max(freq, 1.0 / R)
        breaks = [k * step for k in range(1, int(R / step) + 1) if k * step < R]
        out = integrate(f, 0.0, R, spec, breakpoints=breaks)
        return 2.0 * out.value

    def hat_at_zero(self, spec: QuadratureSpec | None = None) -> float:
        return self.hat(0.0, spec)
