"""Constant-curvature model backend: the classical scattering determinant

    phi(s) = sqrt(pi) Gamma(s - 1/2) zeta(2s - 1) / (Gamma(s) zeta(2s))

of the one-cusp modular surface (d = 1, kappa = 1).  Its correctness gate
is axis unitarity |phi(1/2 + it)| = 1 and the functional equation
phi(s) phi(1 - s) = 1, both to 1e-9.  Zeros in Re s > 1/2 sit at half the
nontrivial zeta zeros, s = (1 + rho_zeta)/2, so the located resonances
carry the Re rho = 1/4 pattern.
"""

from __future__ import annotations

import cmath
import math


from .special import PoleError, log_gamma, riemann_zeta
from .zerocount import AnalyticFunction, ZeroList, brute_force_zeros
from .scattering import ResonanceSet

__all__ = ["modular_phi", "modular_log_phi", "ModularPhi", "locate_modular_resonances"]

_D = 1


def modular_log_phi(s: complex) -> complex:
    s = complex(s)
    z2s = riemann_zeta(2.0 * s)
    z2s1 = riemann_zeta(2.0 * s - 1.0)
    if z2s == 0.0:
        raise PoleError(f"zeta(2s) vanishes at s={s:.6g}: pole of phi")
    return (0.5 * math.log(math.pi) + log_gamma(s - 0.5) - log_gamma(s)
            + cmath.log(z2s1) - cmath.log(z2s))


def modular_phi(s: complex) -> complex:
    """phi(s) for the modular surface; raises PoleError at its poles."""
    s = complex(s)
    if s == 1.0 or (s.imag == 0.0 and s.real <= 0.5 and (2 * s.real) == round(2 * s.real)):
        # s = 1 (zeta pole in the numerator) and the half-integer Gamma
        # pole chain need individual treatment; only s = 1/2 has a finite
        # limit, handled below.
        if s == 0.5:
            return -1.0 + 0.0j
        raise PoleError(f"phi has a pole or removable form at s={s:.6g}")
    return cmath.exp(modular_log_phi(s))


class ModularPhi:
    """Callable wrapper with the derivative interface the estimators use."""

    def __init__(self, fd_step: float = 1e-6):
        self.h = fd_step

    def __call__(self, s: complex) -> complex:
        return modular_phi(s)

    def deriv(self, s: complex) -> complex:
        # difference phi itself, not log phi: near a zero the logarithm
        # picks up branch jumps and would poison Newton refinement
        h = self.h
        return (modular_phi(s + h) - modular_phi(s - h)) / (2.0 * h)

    def logderiv(self, s: complex) -> complex:
        return self.deriv(s) / modular_phi(s)

    def unitarity_defect(self, t_grid) -> float:
        return max(abs(abs(modular_phi(complex(0.5, t))) - 1.0) for t in t_grid)

    def functional_equation_defect(self, s_samples) -> float:
        return max(abs(modular_phi(s) * modular_phi(1.0 - s) - 1.0) for s in s_samples)


def locate_modular_resonances(height: float, b: float = 1.2, im_min: float = 0.5,
                              min_cell: float = 1e-4) -> tuple[ResonanceSet, ZeroList]:
    """Zeros of phi in (1/2, b] x (im_min, height], flipped to resonances.

    The zeros sit at (1 + rho_zeta)/2; each zero z maps to the pole
    d - conj(z) in the upper half plane.  im_min > 0 keeps the search box
    off the real segment, where phi has its s = 1 pole."""
    fn = AnalyticFunction(
        value=modular_phi,
        derivative=ModularPhi().deriv,
        name="modular_phi")
    zeros = brute_force_zeros(fn, (0.55, b, im_min, height), min_cell=min_cell)
    rhos = [(_D - z.location.conjugate(), z.multiplicity) for z in zeros]
    rset = ResonanceSet(_D, 1, tuple((r, m) for r, m in rhos))
    return rset, zeros
