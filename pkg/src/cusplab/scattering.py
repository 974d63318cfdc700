"""Factorized scattering determinants, the scattering phase, resonance
counting estimators, and the Weyl-term fit.

A PhiModel is the finite-product factorization

    phi(s) = phi(d/2) e^{iQ(s)} prod_rho [(s - d + conj(rho)) / (s - rho)]^mult

with Q a low-degree polynomial, real on the critical axis, and
Q(s) + Q(d-s) constant.  The resonance entries are the poles; the model is
unimodular on Re s = d/2 and satisfies phi(s) phi(d-s) = 1 whenever the
entry multiset is closed under conjugation.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import QuadratureSpec, integrate
from .testfunction import TestFunctionPsi
from .mollifier import Mollifier

__all__ = [
    "ResonanceSet",
    "SpectrumData",
    "PhiModel",
    "WeylFitResult",
    "PoleProximityError",
    "phase_derivative",
    "scattering_phase",
    "tilde_N",
    "smear",
    "strip_weighted_sum",
    "out_of_strip_count",
    "box_count",
    "resonance_kernel_integral",
    "lorentzian_strip_integral",
    "lorentzian_strip_quadrature",
    "general_weyl_count",
    "weyl_fit",
    "maass_selberg_bound",
    "maass_selberg_axis_rhs",
    "trace_formula_lhs",
    "phase_by_argument_tracking",
]


class PoleProximityError(ValueError):
    def __init__(self, s, rho):
        super().__init__(f"evaluation point {s:.6g} is too close to the resonance {rho:.6g}")
        self.rho = rho


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ResonanceSet:
    """Finite list of resonances (resolvent poles) with multiplicities."""
    d: int
    kappa: int
    entries: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        for rho, mult in self.entries:
            if mult < 1:
                raise ValueError("multiplicities must be positive")
            on_real_segment = (abs(rho.imag) < 1e-12
                               and 0.5 * self.d - 1e-12 <= rho.real <= self.d + 1e-12)
            if rho.real > 0.5 * self.d + 1e-12 and not on_real_segment:
                raise ValueError(
                    f"resonance {rho} violates Re rho <= d/2 or rho in [d/2, d]")

    @classmethod
    def from_list(cls, d: int, kappa: int, rhos: Sequence[complex],
                  mults: Sequence[int] | None = None) -> "ResonanceSet":
        mults = mults or [1] * len(rhos)
        return cls(d, kappa, tuple((complex(r), int(m)) for r, m in zip(rhos, mults)))

    def rho_array(self) -> np.ndarray:
        return np.array([r for r, _ in self.entries], dtype=complex)

    def mult_array(self) -> np.ndarray:
        return np.array([m for _, m in self.entries], dtype=float)

    def conjugate_symmetric(self, tol: float = 1e-10) -> bool:
        pool = sorted(self.entries, key=lambda e: (e[0].real, e[0].imag))
        flipped = sorted(((r.conjugate(), m) for r, m in self.entries),
                         key=lambda e: (e[0].real, e[0].imag))
        return all(abs(a[0] - b[0]) <= tol and a[1] == b[1]
                   for a, b in zip(pool, flipped))

    def convergence_partial_sums(self) -> list[float]:
        """Partial sums of mult (d - 2 Re rho)/|rho - d/2|^2, the quantity
        whose convergence the factorization requires."""
        out, acc = [], 0.0
        for rho, mult in sorted(self.entries, key=lambda e: abs(e[0] - 0.5 * self.d)):
            dist2 = abs(rho - 0.5 * self.d) ** 2
            if dist2 == 0.0:
                continue
            acc += mult * (self.d - 2.0 * rho.real) / dist2
            out.append(acc)
        return out

    def to_json(self) -> str:
        return json.dumps({
            "d": self.d, "kappa": self.kappa,
            "entries": [{"re": r.real, "im": r.imag, "mult": m} for r, m in self.entries],
        })

    @classmethod
    def from_json(cls, text: str) -> "ResonanceSet":
        obj = json.loads(text)
        return cls(int(obj["d"]), int(obj["kappa"]),
                   tuple((complex(e["re"], e["im"]), int(e["mult"])) for e in obj["entries"]))


@dataclass(frozen=True)
class SpectrumData:
    """Spectral parameters r_i with d^2/4 + r_i^2 the eigenvalues; small
    eigenvalues enter as purely imaginary r_i."""
    d: int
    entries: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        for r, m in self.entries:
            if m < 1:
                raise ValueError("multiplicities must be positive")
            if r.real != 0.0 and r.imag != 0.0:
                raise ValueError("spectral parameters are real or purely imaginary")

    @classmethod
    def from_list(cls, d: int, values: Sequence[complex],
                  mults: Sequence[int] | None = None) -> "SpectrumData":
        mults = mults or [1] * len(values)
        ent = sorted(((complex(v), int(m)) for v, m in zip(values, mults)),
                     key=lambda e: (e[0].real, e[0].imag))
        return cls(d, tuple(ent))

    def count_up_to(self, T: float) -> int:
        """N_pp(T): eigenvalues with lambda <= d^2/4 + T^2 (imaginary r_i,
        the small eigenvalues, are below d^2/4 and always count)."""
        n = 0
        for r, m in self.entries:
            if r.imag != 0.0 or r.real <= T:
                n += m
        return n

    def to_json(self) -> str:
        return json.dumps({"d": self.d,
                           "entries": [{"re": r.real, "im": r.imag, "mult": m}
                                       for r, m in self.entries]})

    @classmethod
    def from_json(cls, text: str) -> "SpectrumData":
        obj = json.loads(text)
        return cls(int(obj["d"]),
                   tuple((complex(e["re"], e["im"]), int(e["mult"])) for e in obj["entries"]))


@dataclass(frozen=True)
class PhiModel:
    """Scattering determinant in factorized form.

    q_coeffs are the coefficients of Q(s) = sum q_j (s - d/2)^j.  Reality
    of Q on the axis forces q_j real (even j) / imaginary (odd j), and
    Q(s) + Q(d-s) = const kills the even coefficients with j >= 2.
    """
    resonances: ResonanceSet
    phi_at_half: complex = 1.0 + 0.0j
    q_coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        d = self.resonances.d
        if len(self.q_coeffs) > 2 * (d // 2) + 2:
            raise ValueError("deg Q exceeds 2 floor(d/2) + 1")
        for j, q in enumerate(self.q_coeffs):
            q = complex(q)
            if j % 2 == 0 and abs(q.imag) > 1e-12:
                raise ValueError("even Q coefficients must be real (axis reality)")
            if j % 2 == 1 and abs(q.real) > 1e-12:
                raise ValueError("odd Q coefficients must be purely imaginary")
            if j % 2 == 0 and j >= 2 and abs(q) > 1e-12:
                raise ValueError("Q(s) + Q(d-s) constant kills even coefficients >= 2")
        if abs(abs(complex(self.phi_at_half)) - 1.0) > 1e-10:
            raise ValueError("|phi(d/2)| must be 1")
        q0 = complex(self.q_coeffs[0]) if self.q_coeffs else 0.0
        gauge = complex(self.phi_at_half) * cmath.exp(1j * q0)
        if abs(gauge * gauge - 1.0) > 1e-10:
            raise ValueError("(phi(d/2) e^{i q_0})^2 must equal 1 for the "
                             "functional equation")

    @property
    def d(self) -> int:
        return self.resonances.d

    @property
    def kappa(self) -> int:
        return self.resonances.kappa

    def q_poly(self, s: complex) -> complex:
        w = s - 0.5 * self.d
        out = 0.0 + 0.0j
        for j in reversed(range(len(self.q_coeffs))):
            out = out * w + self.q_coeffs[j]
        return out

    def q_poly_deriv(self, s: complex) -> complex:
        w = s - 0.5 * self.d
        out = 0.0 + 0.0j
        for j in reversed(range(1, len(self.q_coeffs))):
            out = out * w + j * self.q_coeffs[j]
        return out

    def log_value(self, s: complex) -> complex:
        """log phi(s) with each factor's log taken separately (the branch
        of the sum is immaterial once exponentiated)."""
        s = complex(s)
        rho = self.resonances.rho_array()
        mult = self.resonances.mult_array()
        gap = np.abs(s - rho)
        if gap.size and gap.min() < 1e-10 * (1.0 + abs(s)):
            raise PoleProximityError(s, rho[int(np.argmin(gap))])
        terms = mult * (np.log(s - self.d + np.conj(rho)) - np.log(s - rho))
        return (cmath.log(complex(self.phi_at_half)) + 1j * self.q_poly(s)
                + complex(np.sum(terms)))

    def __call__(self, s: complex) -> complex:
        return cmath.exp(self.log_value(s))

    def logderiv(self, s: complex) -> complex:
        s = complex(s)
        rho = self.resonances.rho_array()
        mult = self.resonances.mult_array()
        gap = np.abs(s - rho)
        if gap.size and gap.min() < 1e-10 * (1.0 + abs(s)):
            raise PoleProximityError(s, rho[int(np.argmin(gap))])
        terms = mult * (1.0 / (s - self.d + np.conj(rho)) - 1.0 / (s - rho))
        return 1j * self.q_poly_deriv(s) + complex(np.sum(terms))


def phase_derivative(m: PhiModel, T: float, parts: bool = False):
    """S'(T), from 2 pi S'(T) = i Q'(d/2 + iT) + resonance sum.

    Each strip resonance contributes (2 Re rho - d) / ((d - 2 Re rho)^2/4
    + (T - Im rho)^2) <= 0; exceptional real-segment poles (Re rho > d/2)
    contribute with the opposite sign and are reported separately.
    """
    d = m.d
    rho = m.resonances.rho_array()
    mult = m.resonances.mult_array()
    if rho.size:
        gap = np.abs(complex(0.5 * d, T) - rho)
        if gap.min() < 1e-12 * (1.0 + T):
            raise PoleProximityError(complex(0.5 * d, T), rho[int(np.argmin(gap))])
        num = 2.0 * rho.real - d
        den = 0.25 * (d - 2.0 * rho.real) ** 2 + (T - rho.imag) ** 2
        summands = mult * num / den
        res_sum = float(np.sum(summands))
        strip_sum = float(np.sum(summands[num <= 0]))
    else:
        res_sum = strip_sum = 0.0
    q_term = (1j * m.q_poly_deriv(complex(0.5 * d, T))).real
    value = (q_term + res_sum) / (2.0 * math.pi)
    if parts:
        return value, {"q_term": q_term, "resonance_sum": res_sum,
                       "strip_resonance_sum": strip_sum}
    return value


def scattering_phase(m: PhiModel, T: float) -> float:
    """S(T) with S(0) = 0: closed-form integral of phase_derivative."""
    d = m.d
    q_part = (m.q_poly(complex(0.5 * d, T)) - m.q_poly(complex(0.5 * d, 0.0))).real
    acc = 0.0
    for rho, mult in m.resonances.entries:
        a = 0.5 * (d - 2.0 * rho.real)
        if a == 0.0:
            continue
        mm = rho.imag
        acc += -2.0 * mult * (math.atan((T - mm) / a) - math.atan(-mm / a))
    return (q_part + acc) / (2.0 * math.pi)


def tilde_N(spec: SpectrumData, m: PhiModel, T: float) -> float:
    """N_pp(T) - S(T)."""
    if T <= 0:
        raise ValueError("T must be positive")
    return spec.count_up_to(T) - scattering_phase(m, T)


def _autocorrelation_kernel(mollifier: Mollifier) -> Callable[[float], float]:
    # |g_hat|^2-type kernel from g = rho(2 .): nonnegative by construction
    norm = integrate(lambda t: mollifier(2.0 * t) ** 2, -0.5, 0.5).value

    def kernel(u: float) -> float:
        half = integrate(lambda t: mollifier(2.0 * t) * math.cos(u * t), 0.0, 0.5,
                         breakpoints=[k * math.pi / abs(u) for k in range(1, int(0.5 * abs(u) / math.pi) + 1)]
                         if abs(u) > 8 else ()).value
        g_hat = 2.0 * half
        return g_hat * g_hat / (2.0 * math.pi * norm)

    return kernel


def smear(samples: Callable[[float], float], A: float, mollifier: Mollifier,
          kernel: str = "auto", grid_max: float = 80.0,
          n_grid: int = 400) -> Callable[[float], float]:
    """T -> int samples(T + A u) k(u) du with a unit-mass even kernel.

    kernel='mollifier' uses the mollifier's own transform and verifies
    nonnegativity on a grid (it fails for flat-top mollifiers, whose
    transform oscillates); 'nonnegative' uses the autocorrelation-squared
    kernel, which cannot go negative; 'auto' tries the first and falls
    back to the second.
    """
    if A <= 0:
        raise ValueError("A must be positive")
    grid = np.linspace(-grid_max, grid_max, 2 * n_grid + 1)
    if kernel in ("auto", "mollifier"):
        kvals = np.array([mollifier.transform(u) for u in grid])
        if kvals.min() < -1e-9:
            if kernel == "mollifier":
                raise PreconditionError(
                    f"mollifier transform dips to {kvals.min():.3e}; "
                    "a nonnegative smearing kernel is required")
            kfun = _autocorrelation_kernel(mollifier)
            kvals = np.array([kfun(u) for u in grid])
    else:
        kfun = _autocorrelation_kernel(mollifier)
        kvals = np.array([kfun(u) for u in grid])
    if kvals.min() < -1e-9:
        raise PreconditionError("smearing kernel is not nonnegative on the grid")
    kvals = np.clip(kvals, 0.0, None)
    mass = np.trapezoid(kvals, grid)
    kvals = kvals / mass

    def smoothed(T: float) -> float:
        fvals = np.array([samples(T + A * u) for u in grid])
        return float(np.trapezoid(fvals * kvals, grid))

    return smoothed


@dataclass(frozen=True)
class StripSumResult:
    value: float
    count: float
    predicted: float | None


def strip_weighted_sum(r: ResonanceSet, b: float, T: float,
                       leading: tuple[complex, float] | None = None) -> StripSumResult:
    """sum of mult (d - 2 Re rho) over strip resonances with
    0 <= Im rho <= T (boundary entries at half weight).

    Equals 2 sum (beta - d/2) over the flipped zeros beta = d - Re rho in
    [d/2, b].  With the leading Dirichlet data (a*, l*) the prediction
    (kappa/2pi) T log T - (T/pi)(kappa/2 + log|a*| - (d/2) l*) is attached.
    """
    d, kappa = r.d, r.kappa
    total = 0.0
    count = 0.0
    for rho, mult in r.entries:
        if not (d - b - 1e-12 <= rho.real <= 0.5 * d + 1e-12):
            continue
        if not (-1e-12 <= rho.imag <= T + 1e-12):
            continue
        w = float(mult)
        if abs(rho.imag) <= 1e-12 or abs(rho.imag - T) <= 1e-12:
            w *= 0.5
        total += w * (d - 2.0 * rho.real)
        count += w
    predicted = None
    if leading is not None:
        a_star, ell_star = leading
        predicted = (kappa / (2.0 * math.pi)) * T * math.log(T) \
            - (T / math.pi) * (0.5 * kappa + math.log(abs(a_star)) - 0.5 * d * ell_star)
    return StripSumResult(total, count, predicted)


def out_of_strip_count(r: ResonanceSet, b: float, T: float, eps: float,
                       alpha: float) -> tuple[int, float]:
    """Count of resonances with Re rho < d - b inside the disk of radius
    (eps T)^alpha around d/2 + iT, next to the O((eps T)^alpha) reference."""
    if not 0.0 < eps < 1.0:
        raise ValueError("need 0 < eps < 1")
    if not 0.0 < alpha <= 1.0:
        raise ValueError("need 0 < alpha <= 1")
    d = r.d
    radius = (eps * T) ** alpha
    center = complex(0.5 * d, T)
    n = sum(m for rho, m in r.entries
            if rho.real < d - b and abs(rho - center) <= radius)
    return n, radius


def box_count(r: ResonanceSet, center: float, half_width: float,
              b: float | None = None) -> int:
    """Resonances in the horizontal band |Im rho - center| <= half_width,
    restricted to the strip d - b <= Re rho <= d/2 when b is given."""
    d = r.d
    lo = d - b if b is not None else -math.inf
    return sum(m for rho, m in r.entries
               if abs(rho.imag - center) <= half_width and lo <= rho.real <= 0.5 * d + 1e-12)


def resonance_kernel_integral(rho: complex, d: int, b: float, T: float,
                              spec: QuadratureSpec | None = None) -> float:
    """int_{d/2}^b f_rho(sigma + iT) dsigma for the per-resonance kernel

        f_rho(s) = (2 Re rho - d)(2 Re s - d) Im(s - rho)
                   / (|s - rho|^2 |s - d + conj(rho)|^2),

    the imaginary part each resonance contributes to phi'/phi.  The value
    is an argument variation along a horizontal segment, so its absolute
    value can never exceed pi."""
    spec = spec or QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=4000)
    rho = complex(rho)
    if abs(rho.imag - T) < 1e-12 and 0.5 * d - 1e-12 <= rho.real <= b + 1e-12:
        raise PreconditionError("resonance sits on the integration segment")

    def f(sigma: float) -> float:
        s = complex(sigma, T)
        return ((2.0 * rho.real - d) * (2.0 * sigma - d) * (T - rho.imag)
                / (abs(s - rho) ** 2 * abs(s - d + rho.conjugate()) ** 2))

    out = integrate(f, 0.5 * d, b, spec)
    if abs(out.value) > math.pi + 1e-8:
        raise AssertionError(f"kernel integral {out.value:.6f} exceeds pi")
    return out.value


def lorentzian_strip_integral(rho: complex, d: int, T: float) -> float:
    """Closed form of int_{-T}^{T} (d - 2 Re rho)/|rho - d/2 + it|^2 dt:

        2 arctan[(d - 2 Re rho) T / (|rho - d/2|^2 - T^2)]
        + 2 pi sign(d - 2 Re rho) if |rho - d/2| < T.

    The case boundary |rho - d/2| = T is rejected as degenerate."""
    rho = complex(rho)
    dist2 = abs(rho - 0.5 * d) ** 2
    if abs(dist2 - T * T) < 1e-12 * max(1.0, T * T):
        raise ValueError("degenerate configuration |rho - d/2| = T")
    width = d - 2.0 * rho.real
    if width == 0.0:
        return 2.0 * math.pi if dist2 < T * T else 0.0
    val = 2.0 * math.atan(width * T / (dist2 - T * T))
    if dist2 < T * T:
        val += 2.0 * math.pi * math.copysign(1.0, width)
    return val


def lorentzian_strip_quadrature(rho: complex, d: int, T: float,
                                spec: QuadratureSpec | None = None) -> float:
    """Direct quadrature of the Lorentzian strip integral (oracle route)."""
    spec = spec or QuadratureSpec(rel_tol=1e-11, abs_tol=1e-13, max_subdivisions=8000)
    rho = complex(rho)
    a2 = (rho.real - 0.5 * d) ** 2
    f = lambda t: (d - 2.0 * rho.real) / (a2 + (rho.imag + t) ** 2)
    breaks = [x for x in (-rho.imag,) if -T < x < T]
    return integrate(f, -T, T, spec, breakpoints=breaks).value


def general_weyl_count(r: ResonanceSet, spec: SpectrumData, T: float) -> dict:
    """Disc count of resonances assembled through the Lorentzian identity.

    eigenvalue_count + (1/2pi) sum_rho int_{-T}^{T} ... dt
        = eigenvalue_count + R(T) + #{|rho - d/2| < T},
    with R(T) = (1/pi) sum arctan[...]; the output reports the pieces and
    the far/near decomposition of R."""
    d = r.d
    lorentz = 0.0
    R_far = 0.0
    R_near = 0.0
    disc = 0
    for rho, mult in r.entries:
        val = lorentzian_strip_integral(rho, d, T)
        lorentz += mult * val / (2.0 * math.pi)
        dist = abs(rho - 0.5 * d)
        inside = dist < T
        arctan_part = val / 2.0 - (math.pi * math.copysign(1.0, d - 2 * rho.real) if inside else 0.0)
        if abs(dist - T) > 1.0:
            R_far += mult * arctan_part / math.pi
        else:
            R_near += mult * arctan_part / math.pi
        if inside:
            disc += mult
    eig = spec.count_up_to(T)
    return {
        "disc_count": disc,
        "eigenvalue_count": eig,
        "lorentzian_sum": lorentz,
        "lhs": eig + lorentz,
        "R": R_far + R_near,
        "R_far": R_far,
        "R_near": R_near,
        "identity_residual": lorentz - (R_far + R_near) - disc,
    }


@dataclass(frozen=True)
class WeylFitResult:
    a_lead: float
    b_log: float
    c_lin: float
    residual_norm: float


def weyl_fit(samples: Sequence[tuple[float, float]], d: int) -> WeylFitResult:
    """Least squares for N(T) ~ a T^(d+1) + b T log T + c T."""
    if len(samples) < 10:
        raise ValueError("need at least 10 samples")
    Ts = np.array([t for t, _ in samples], dtype=float)
    if Ts.max() / Ts.min() < 10.0:
        raise ValueError("samples should span at least a decade in T")
    ys = np.array([y for _, y in samples], dtype=float)
    cols = np.stack([Ts ** (d + 1), Ts * np.log(Ts), Ts], axis=1)
    scale = np.linalg.norm(cols, axis=0)
    sol, res, rank, _ = np.linalg.lstsq(cols / scale, ys, rcond=None)
    if rank < 3:
        raise np.linalg.LinAlgError("Weyl fit design matrix is rank deficient")
    sol = sol / scale
    resid = float(np.linalg.norm(ys - cols @ sol))
    return WeylFitResult(float(sol[0]), float(sol[1]), float(sol[2]), resid)


def maass_selberg_bound(phi_abs: float, sigma: float, t: float, y: float,
                        d: int, kappa: int) -> tuple[bool, float]:
    """Check |phi(sigma + it)| against
    y^(kappa (2 sigma - d)) (sqrt(1 + (sigma-d/2)^2/t^2) + (sigma-d/2)/|t|)^kappa."""
    if t == 0.0:
        raise ValueError("t = 0 is degenerate for the bound")
    if sigma <= 0.5 * d:
        raise ValueError("the bound holds for sigma > d/2")
    ratio = (sigma - 0.5 * d) / abs(t)
    bound = y ** (kappa * (2.0 * sigma - d)) * (math.sqrt(1.0 + ratio * ratio) + ratio) ** kappa
    return phi_abs <= bound, bound


def maass_selberg_axis_rhs(phi, y: float, t: float, d: int, kappa: int = 1) -> float:
    """Axis value 2 kappa log y - phi'/phi(d/2+it)
    + Im(y^{2it} conj(phi))/t for a scalar (kappa = 1) determinant.

    phi must expose __call__ and logderiv.  Below |t| = 1e-4 the removable
    singularity of the oscillatory term is evaluated by a second-order
    expansion of sin(x(t))/t with x = 2 t log y - arg phi."""
    if kappa != 1:
        raise ValueError("only the scalar kappa = 1 case is modeled")
    s0 = complex(0.5 * d, t)
    val = phi(s0)
    if abs(abs(val) - 1.0) > 1e-8:
        raise PreconditionError(f"|phi(d/2+it)| = {abs(val):.6f} is not unimodular")
    base = 2.0 * kappa * math.log(y) - phi.logderiv(s0).real
    if abs(t) >= 1e-4:
        osc = (y ** (2j * t) * val.conjugate()).imag / t
        return base + osc
    # x(t) = 2 t log y - theta(t); theta' = phi'/phi on the axis (real)
    phi_half = phi(complex(0.5 * d, 0.0))
    sgn = 1.0 if phi_half.real >= 0 else -1.0
    x1 = 2.0 * math.log(y) - phi.logderiv(complex(0.5 * d, 0.0)).real
    h = 1e-3
    ld = lambda tt: phi.logderiv(complex(0.5 * d, tt)).real
    theta3 = (ld(h) - 2.0 * ld(0.0) + ld(-h)) / (h * h)
    x3 = -theta3 / 6.0
    osc = sgn * (x1 + (x3 - x1 ** 3 / 6.0) * t * t)
    return base + osc


def trace_formula_lhs(spec: SpectrumData, m: PhiModel, psi: TestFunctionPsi,
                      tr_phi_half: float,
                      quad: QuadratureSpec | None = None) -> float:
    """sum_lambda psi_hat(r_lambda) - (1/2) int S' psi_hat
    + (1/4) psi_hat(0) tr phi(d/2)."""
    quad = quad or QuadratureSpec(rel_tol=1e-8, abs_tol=1e-10, max_subdivisions=4000)
    total = 0.0
    for rr, mult in spec.entries:
        arg = rr if rr.imag == 0.0 else complex(0.0, rr.imag)
        hv = psi.hat(arg)
        total += mult * (hv.real if isinstance(hv, complex) else hv)
    upper = psi.cutoff_T + 60.0 * psi.scale_A + 10.0
    f = lambda t: phase_derivative(m, t) * psi.hat(t)
    integral = integrate(f, 0.0, upper, quad)
    total -= integral.value  # (1/2) * int_R = int_0^inf for even S' psi_hat
    total += 0.25 * psi.hat(0.0) * tr_phi_half
    return total


def phase_by_argument_tracking(phi, d: int, T: float, n: int = 4000) -> float:
    """(arg phi(d/2+iT) - arg phi(d/2))/2pi by continuous tracking; an
    independent route to S(T) - S(0) for unitary-axis functions."""
    ts = np.linspace(0.0, T, n + 1)
    prev = phi(complex(0.5 * d, 0.0))
    acc = 0.0
    for t in ts[1:]:
        cur = phi(complex(0.5 * d, t))
        acc += cmath.phase(cur / prev)
        prev = cur
    return acc / (2.0 * math.pi)
