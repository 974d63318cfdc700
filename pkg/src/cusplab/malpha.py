"""The M_alpha family: M_alpha(s) = s_+^alpha / Gamma(alpha+1) for alpha > -1,
extended downward by distributional differentiation M_{alpha-1} = M_alpha'.

Indices at or below -1 are never evaluated pointwise.  A pairing against a
smooth function g reduces the index upward by repeated integration by parts:

    <M_{alpha - m}, g> = (-1)^m  int M_alpha(s) g^(m)(s) ds,

which needs alpha > -1 and the first m derivatives of g.  The identity
s M_{alpha-1}(s) = alpha M_alpha(s) ties the family together and is the
main correctness invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .quadrature import QuadratureSpec, Singularity, integrate
from .special import log_gamma

__all__ = ["MAlphaIndex", "SmoothFunction", "m_alpha_eval", "m_alpha_pair", "MAlphaModeError"]


class MAlphaModeError(ValueError):
    """Pointwise evaluation requested where only the pairing mode is defined."""


@dataclass(frozen=True)
class MAlphaIndex:
    alpha: float
    reduction_order: int = 0

    def __post_init__(self):
        if self.reduction_order < 0:
            raise ValueError("reduction_order must be >= 0")

    @property
    def effective(self) -> float:
        return self.alpha - self.reduction_order


@dataclass(frozen=True)
class SmoothFunction:
    """A smooth function with derivatives supplied up to some order.

    derivs[k] evaluates the k-th derivative (derivs[0] is the function).
    support gives [lo, hi] outside of which everything vanishes.
    """
    derivs: Sequence[Callable[[float], float]]
    support: tuple[float, float]

    def __call__(self, s: float, order: int = 0) -> float:
        return self.derivs[order](s)


def m_alpha_eval(idx: MAlphaIndex, s: float) -> float:
    """Pointwise M_alpha(s) = s_+^alpha / Gamma(alpha+1); needs alpha > -1."""
    if idx.reduction_order != 0 or idx.alpha <= -1.0:
        raise MAlphaModeError(
            "effective index <= -1 has no pointwise value; use m_alpha_pair")
    a = idx.alpha
    if s < 0.0:
        return 0.0
    if s == 0.0:
        return 0.0 if a > 0 else 1.0  # alpha = 0 is the Heaviside step
    return math.exp(a * math.log(s) - log_gamma(a + 1.0).real)


def m_alpha_pair(idx: MAlphaIndex, g: SmoothFunction,
                 spec: QuadratureSpec | None = None) -> float:
    """<M_{alpha - m}, g> via m-fold integration by parts.

    idx.alpha is the raised (integrated) index and must exceed -1; the
    distribution actually paired is M_{idx.effective}.
    """
    if idx.alpha <= -1.0:
        raise MAlphaModeError("raised index alpha must exceed -1 for the pairing")
    m = idx.reduction_order
    if m >= len(g.derivs):
        raise ValueError(f"pairing needs derivatives of g up to order {m}")
    spec = spec or QuadratureSpec()
    lo, hi = g.support
    hi = max(hi, 0.0)
    if hi <= 0.0:
        return 0.0
    a = idx.alpha
    sign = -1.0 if m % 2 else 1.0
    if a == 0.0:
        r = integrate(lambda s: g(s, m), 0.0, hi, spec)
    else:
        lg = log_gamma(a + 1.0).real
        f = lambda s: math.exp(a * math.log(s) - lg) * g(s, m)
        sing = [Singularity(0.0, a)] if a < 0 else []
        r = integrate(f, 0.0, hi, spec, singularities=sing)
    if not r.converged:
        from .quadrature import NonConvergenceError
        raise NonConvergenceError(r, "m_alpha_pair quadrature did not converge")
    return sign * r.value
