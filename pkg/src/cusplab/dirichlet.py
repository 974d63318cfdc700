"""Dirichlet series in exponential and classical form, the parametrix-style
expansion s^(-kappa d/2) * sum_j L_j(s)/s^j, and the mean-value identity.

Series here are finite, or truncated with a declared geometric tail model;
evaluation certifies the truncation against the requested accuracy instead
of pretending to analytic continuation.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "ConvergenceError",
    "ExponentialDirichletSeries",
    "ClassicalDirichletSeries",
    "ParametrixExpansion",
    "mean_value_integral",
    "mean_value_bound",
    "p1_p2_profile",
]

_MARGIN = 1e-6
NEG_INF = float("-inf")


class ConvergenceError(ValueError):
    pass


@dataclass(frozen=True)
class TailModel:
    """Declared bound |a_k| <= coef_bound * exp(abscissa * l_k) for dropped
    terms, with exponent gaps at least `gap`."""
    coef_bound: float
    abscissa: float
    gap: float

    def bound(self, re_s: float, ell_last: float) -> float:
        rate = re_s - self.abscissa
        if rate * self.gap <= 0.0:
            return math.inf
        q = math.exp(-rate * self.gap)
        return self.coef_bound * math.exp(-rate * (ell_last + self.gap)) / (1.0 - q)


@dataclass(frozen=True)
class ExponentialDirichletSeries:
    """L(s) = sum_k a_k exp(-s l_k) with strictly increasing l_k."""
    terms: tuple[tuple[complex, float], ...]
    tail: TailModel | None = None

    def __post_init__(self):
        ells = [l for _, l in self.terms]
        if any(b <= a for a, b in zip(ells, ells[1:])):
            raise ValueError("exponents l_k must be strictly increasing")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[complex, float]],
                   tail: TailModel | None = None) -> "ExponentialDirichletSeries":
        return cls(tuple((complex(a), float(l)) for a, l in pairs), tail)

    @classmethod
    def from_json(cls, text: str) -> "ExponentialDirichletSeries":
        pairs = []
        for a, l in json.loads(text):
            if isinstance(a, list):
                a = complex(a[0], a[1])
            pairs.append((a, float(l)))
        return cls.from_pairs(pairs)

    def to_json(self) -> str:
        return json.dumps([[_json_num(a), l] for a, l in self.terms])

    def abscissa_absolute(self) -> float:
        """Absolute-convergence abscissa.

        Finite series converge everywhere: -inf sentinel.  For a truncated
        series the declared tail abscissa wins; without a declaration the
        limsup is estimated from the stored truncation (head form when the
        coefficient sums diverge, tail form otherwise).
        """
        if self.tail is not None:
            return self.tail.abscissa
        return _abscissa_from_terms([(abs(a), l) for a, l in self.terms], finite=True)

    def evaluate(self, s: complex) -> complex:
        s = complex(s)
        sigma = s.real
        abscissa = self.tail.abscissa if self.tail is not None else NEG_INF
        if sigma <= abscissa + _MARGIN:
            raise ConvergenceError(
                f"Re s = {sigma:g} is not above the abscissa {abscissa:g} + margin")
        partial = sum(a * cmath.exp(-s * l) for a, l in self.terms)
        if self.tail is not None:
            ell_last = self.terms[-1][1] if self.terms else 0.0
            bound = self.tail.bound(sigma, ell_last)
            if bound > max(1e-12 * abs(partial), 1e-14):
                raise ConvergenceError(
                    f"declared tail bound {bound:.3e} exceeds the certification target")
        return partial

    def logderiv(self, s: complex) -> complex:
        """L'(s)/L(s); the tail certification mirrors evaluate()."""
        num = sum(-l * a * cmath.exp(-s * l) for a, l in self.terms)
        return num / self.evaluate(s)

    def leading_term(self) -> tuple[complex, float] | None:
        for a, l in self.terms:
            if a != 0.0:
                return a, l
        return None


@dataclass(frozen=True)
class ClassicalDirichletSeries:
    """L(s) = sum_k c_k / lambda_k^s with lambda_k > 0 strictly increasing."""
    terms: tuple[tuple[float, float], ...]
    tail: TailModel | None = None

    def __post_init__(self):
        lams = [l for _, l in self.terms]
        if any(l <= 0 for l in lams):
            raise ValueError("frequencies lambda_k must be positive")
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise ValueError("frequencies lambda_k must be strictly increasing")

    @classmethod
    def from_pairs(cls, pairs, tail=None) -> "ClassicalDirichletSeries":
        return cls(tuple((float(c), float(l)) for c, l in pairs), tail)

    @classmethod
    def from_json(cls, text: str) -> "ClassicalDirichletSeries":
        return cls.from_pairs(json.loads(text))

    def to_json(self) -> str:
        return json.dumps([[c, l] for c, l in self.terms])

    def to_exponential(self) -> ExponentialDirichletSeries:
        """Round-trip mapping lambda = exp(l)."""
        return ExponentialDirichletSeries.from_pairs(
            [(c, math.log(l)) for c, l in self.terms])

    def in_decaying_class(self) -> bool:
        """Membership in the lambda_0 > 1 subclass (decays as Re s -> inf)."""
        return bool(self.terms) and self.terms[0][1] > 1.0

    def abscissa_absolute(self) -> float:
        if self.tail is not None:
            return self.tail.abscissa
        return _abscissa_from_terms(
            [(abs(c), math.log(l)) for c, l in self.terms if l != 1.0], finite=True)

    def evaluate(self, s: complex) -> complex:
        s = complex(s)
        abscissa = self.tail.abscissa if self.tail is not None else NEG_INF
        if s.real <= abscissa + _MARGIN:
            raise ConvergenceError("Re s is not above the abscissa + margin")
        return sum(c * cmath.exp(-s * math.log(l)) for c, l in self.terms)


def _json_num(a: complex):
    return a.real if a.imag == 0.0 else [a.real, a.imag]


def _abscissa_from_terms(terms: list[tuple[float, float]], finite: bool) -> float:
    """limsup estimate of the absolute abscissa from stored (|a|, l) pairs.

    Head form log(sum_{j<=k}|a_j|)/l_k when the coefficient sum grows,
    tail form log(sum_{j>k}|a_j|)/l_k when it converges; exact -inf for
    genuinely finite series (no stored tail decay to extrapolate).
    """
    terms = [(a, l) for a, l in terms if a > 0.0]
    if len(terms) < 8:
        return NEG_INF if finite else math.nan
    mags = np.array([a for a, _ in terms])
    ells = np.array([l for _, l in terms])
    if ells[-1] <= 0:
        return NEG_INF
    total = mags.sum()
    tail_sums = total - np.cumsum(mags)
    n = len(terms)
    with np.errstate(divide="ignore"):
        if tail_sums[n // 2] < 0.25 * total:
            # summable coefficients: tail form, evaluated away from the
            # truncation end where the missing tail would bias it down
            lo, hi = n // 8, max(n // 8 + 2, n // 3)
            vals = np.log(tail_sums[lo:hi]) / ells[lo + 1:hi + 1]
        else:
            vals = np.log(np.cumsum(mags)[n // 2:]) / ells[n // 2:]
    vals = vals[np.isfinite(vals)]
    return float(vals.max()) if len(vals) else NEG_INF


def mean_value_integral(L: ClassicalDirichletSeries, b: float, T: float) -> float:
    """int_0^T Re L(b + it) dt in closed form, for real series with
    lambda_0 > 1: sum_k c_k lambda_k^(-b) sin(T log lambda_k)/log lambda_k."""
    if not L.in_decaying_class():
        raise ConvergenceError("mean-value lemma needs lambda_0 > 1")
    return sum(c * l ** (-b) * math.sin(T * math.log(l)) / math.log(l)
               for c, l in L.terms)


def mean_value_bound(L: ClassicalDirichletSeries, b: float) -> float:
    """T-independent bound sum_k |c_k| lambda_k^(-b) / log lambda_0."""
    if not L.in_decaying_class():
        raise ConvergenceError("mean-value lemma needs lambda_0 > 1")
    log_l0 = math.log(L.terms[0][1])
    return sum(abs(c) * l ** (-b) for c, l in L.terms) / log_l0


@dataclass(frozen=True)
class ParametrixExpansion:
    """phi(s) modeled as s^(-kappa d / 2) * sum_{j<=N} L_j(s) / s^j."""
    kappa: int
    d: int
    series_list: tuple[ExponentialDirichletSeries, ...]
    delta_abscissa: float = 0.0  # declared common convergence abscissa
    sharp_T: float | None = None  # truncation-decay scale; configuration only

    def __post_init__(self):
        if not self.series_list:
            raise ValueError("series_list must be nonempty")
        if self.kappa < 0 or self.d < 1:
            raise ValueError("need kappa >= 0 and d >= 1")

    @property
    def truncation_order(self) -> int:
        return len(self.series_list) - 1

    def evaluate(self, s: complex) -> complex:
        s = complex(s)
        if s.real <= self.delta_abscissa + _MARGIN:
            raise ConvergenceError("Re s must exceed the declared abscissa")
        prefac = cmath.exp(-0.5 * self.kappa * self.d * cmath.log(s))
        return prefac * sum(L.evaluate(s) / s ** j for j, L in enumerate(self.series_list))

    def logderiv(self, s: complex) -> complex:
        s = complex(s)
        num = 0.0 + 0.0j
        den = 0.0 + 0.0j
        for j, L in enumerate(self.series_list):
            lj = L.evaluate(s)
            dj = sum(-l * a * cmath.exp(-s * l) for a, l in L.terms)
            den += lj / s ** j
            num += dj / s ** j - j * lj / s ** (j + 1)
        return -0.5 * self.kappa * self.d / s + num / den

    def leading_term(self) -> tuple[complex, float] | None:
        return self.series_list[0].leading_term()


def p1_p2_profile(p: ParametrixExpansion, b: float, t_grid: Sequence[float]) -> dict:
    """Observed-vs-predicted table for the log-derivative and log-modulus
    structure of the expansion on the line Re s = b.

    Predictions use the leading series alone: Re L0'/L0 for the
    log-derivative (which tends to -l*), and -(kappa d/2) log|s| + log|L0|
    for the modulus.  Residual * |s| staying bounded is the structure test.
    """
    lead = p.leading_term()
    if lead is None:
        raise ConvergenceError("leading series vanishes identically")
    a_star, ell_star = lead
    L0 = p.series_list[0]
    rows = []
    sup_p1 = 0.0
    sup_p2 = 0.0
    for t in t_grid:
        s = complex(b, t)
        obs_ld = p.logderiv(s).real
        pred_ld = L0.logderiv(s).real
        r1 = (obs_ld - pred_ld) * abs(s)
        obs_log = math.log(abs(p.evaluate(s)))
        pred_log = -0.5 * p.kappa * p.d * math.log(abs(s)) + math.log(abs(L0.evaluate(s)))
        r2 = (obs_log - pred_log) * abs(s)
        sup_p1 = max(sup_p1, abs(r1))
        sup_p2 = max(sup_p2, abs(r2))
        rows.append({"t": t, "re_logderiv": obs_ld, "re_logderiv_leading": pred_ld,
                     "p1_residual_scaled": r1, "log_abs": obs_log,
                     "log_abs_leading": pred_log, "p2_residual_scaled": r2})
    return {"rows": rows, "sup_p1_scaled": sup_p1, "sup_p2_scaled": sup_p2,
            "ell_star": ell_star, "log_abs_a_star": math.log(abs(a_star))}
