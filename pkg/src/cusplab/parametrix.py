"""Transport coefficients of the hyperbolic-model wave parametrix on
rotationally symmetric comparison metrics.

The volume density comes from the radial Jacobi field j'' + K(r) j = 0,
j(0) = 0, j'(0) = 1, through Theta = (j/r)^d; the constant-curvature
density is Theta_0 = (sinh r / r)^d.  The transport system is solved in
its integrated form

    u_0 = sqrt(Theta_0/Theta) = (sinh r / j)^{d/2},
    u_k = (sinh r/j)^{d/2} sinh(r)^{-k}
          * int_0^r sinh(s)^{k-1} (j/sinh s)^{d/2}
                (-Lap + (k-1-d/2)^2 - d^2/4) u_{k-1}(s) ds,

with the radial Laplacian acting as f'' + d (j'/j) f'.  For K == -1 every
u_k with k >= 1 collapses to zero and u_0 to 1; that collapse is the
correctness gate for all sign conventions here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "RadialCurvatureProfile",
    "ThetaSolution",
    "ConjugatePointError",
    "UkTable",
    "theta_hyperbolic",
    "theta_hyperbolic_logderiv",
    "theta_radial",
    "u_k_radial",
    "verify_bound_uk",
    "c0_constant",
]


class ConjugatePointError(RuntimeError):
    def __init__(self, location: float):
        super().__init__(f"conjugate point at r = {location:.6g}")
        self.location = location


@dataclass(frozen=True)
class RadialCurvatureProfile:
    K: Callable[[float], float]
    r_max: float
    pinch: tuple[float, float]

    def __post_init__(self):
        if self.r_max <= 0:
            raise ValueError("r_max must be positive")
        lo, hi = self.pinch
        for r in np.linspace(0.0, self.r_max, 257):
            k = self.K(float(r))
            if not lo - 1e-9 <= k <= hi + 1e-9:
                raise ValueError(f"K({r:.4g}) = {k:.4g} violates the declared pinch bounds")

    @classmethod
    def constant(cls, value: float, r_max: float) -> "RadialCurvatureProfile":
        return cls(K=lambda r: value, r_max=r_max, pinch=(value, value))


def _sinh_over_r(r: float) -> float:
    if abs(r) < 1e-4:
        r2 = r * r
        return 1.0 + r2 / 6.0 * (1.0 + r2 / 20.0)
    return math.sinh(r) / r


def theta_hyperbolic(r: float, d: int) -> float:
    """Theta_0(r) = (sinh r / r)^d, normalized to 1 at r = 0."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return _sinh_over_r(r) ** d


def theta_hyperbolic_logderiv(r: float, d: int) -> float:
    """Theta_0'/Theta_0 = d (coth r - 1/r)."""
    if r < 1e-5:
        return d * r / 3.0 * (1.0 - r * r / 15.0)
    return d * (1.0 / math.tanh(r) - 1.0 / r)


@dataclass(frozen=True)
class ThetaSolution:
    d: int
    grid: np.ndarray
    jacobi: np.ndarray      # j(r) on the grid
    jacobi_d1: np.ndarray   # j'(r)
    theta: np.ndarray       # (j/r)^d, 1 at r = 0
    _dense: object

    def j(self, r: float) -> float:
        return float(self._dense(r)[0]) if r > 0 else 0.0

    def j_d1(self, r: float) -> float:
        return float(self._dense(r)[1]) if r > 0 else 1.0

    def theta_at(self, r: float) -> float:
        if r < 1e-12:
            return 1.0
        return (self.j(r) / r) ** self.d

    def log_deriv(self, r: float) -> float:
        """Theta'/Theta = d (j'/j - 1/r)."""
        if r < 1e-12:
            return 0.0
        return self.d * (self.j_d1(r) / self.j(r) - 1.0 / r)


def theta_radial(profile: RadialCurvatureProfile, d: int,
                 n_grid: int = 1200) -> ThetaSolution:
    """Solve the Jacobi equation and assemble the volume density.

    Raises ConjugatePointError when j crosses zero inside (0, r_max].
    """
    r0 = 1e-8
    k0 = profile.K(0.0)
    y0 = [r0 - k0 * r0 ** 3 / 6.0, 1.0 - k0 * r0 ** 2 / 2.0]

    def rhs(r, y):
        return [y[1], -profile.K(r) * y[0]]

    def conjugate(r, y):
        return y[0]
    conjugate.terminal = True
    conjugate.direction = -1

    sol = solve_ivp(rhs, (r0, profile.r_max), y0, method="DOP853",
                    rtol=1e-12, atol=1e-14, dense_output=True, events=conjugate)
    if sol.t_events[0].size > 0:
        raise ConjugatePointError(float(sol.t_events[0][0]))
    if not sol.success:
        raise RuntimeError(f"Jacobi ODE solver failed: {sol.message}")
    grid = np.linspace(0.0, profile.r_max, n_grid)
    jac = np.empty_like(grid)
    jac_d1 = np.empty_like(grid)
    theta = np.empty_like(grid)
    for i, r in enumerate(grid):
        if r < r0:
            jac[i], jac_d1[i], theta[i] = r, 1.0, 1.0
            continue
        y = sol.sol(r)
        jac[i], jac_d1[i] = y[0], y[1]
        theta[i] = (y[0] / r) ** d
    if np.any(jac[1:] <= 0.0):
        idx = int(np.argmax(jac[1:] <= 0.0)) + 1
        raise ConjugatePointError(float(grid[idx]))
    return ThetaSolution(d=d, grid=grid, jacobi=jac, jacobi_d1=jac_d1,
                         theta=theta, _dense=sol.sol)


@dataclass(frozen=True)
class UkTable:
    d: int
    grid: np.ndarray
    values: np.ndarray  # shape (k_max+1, len(grid))

    def column(self, k: int) -> np.ndarray:
        return self.values[k]

    def to_csv_rows(self):
        header = ["r"] + [f"u_{k}" for k in range(self.values.shape[0])]
        rows = [header]
        for i, r in enumerate(self.grid):
            rows.append([f"{r:.12g}"] + [f"{self.values[k, i]:.12g}"
                                         for k in range(self.values.shape[0])])
        return rows


class _ChebFrame:
    """Chebyshev workspace on [0, r_max] (first-kind nodes, no endpoints).

    Coefficient chopping at `chop` relative suppresses the rough
    interpolation noise of the ODE dense output; without it the repeated
    differentiation in the transport recursion amplifies that noise by
    1/h^2 per level.  Only O(1)-scaled functions get chopped.
    """

    def __init__(self, r_max: float, n: int, chop: float = 3e-12):
        self.r_max = r_max
        self.n = n
        self.chop = chop
        k = np.arange(n)
        self.x = np.cos((2 * k + 1) * math.pi / (2 * n))[::-1]
        self.r = 0.5 * r_max * (self.x + 1.0)
        V = np.polynomial.chebyshev.chebvander(self.x, n - 1)
        W = (2.0 / n) * V.T
        W[0] *= 0.5
        self._V, self._W = V, W

    def to_series(self, vals: np.ndarray, floor: float = 0.0) -> np.ndarray:
        """Transform to coefficients and cut the tail at the decay point.

        The cut removes every mode past the last coefficient exceeding
        max(chop * max|c|, floor); an absolute floor (the recursion's
        intrinsic noise level) is what lets a noise-dominated series
        collapse to exactly zero instead of keeping rough high modes.
        """
        c = self._W @ vals
        m = np.max(np.abs(c))
        thresh = max(self.chop * m, floor, 1e-300)
        sig = np.nonzero(np.abs(c) > thresh)[0]
        if len(sig) == 0:
            return np.zeros(1)
        return c[:sig[-1] + 1].copy()

    def deriv_vals(self, c: np.ndarray, order: int) -> np.ndarray:
        dc = np.polynomial.chebyshev.chebder(c, order, scl=2.0 / self.r_max)
        return np.polynomial.chebyshev.chebval(self.x, dc)

    def cumulative(self, c: np.ndarray) -> np.ndarray:
        """Values of int_0^r on the nodes."""
        C = np.polynomial.chebyshev.chebint(c, 1, scl=0.5 * self.r_max)
        return (np.polynomial.chebyshev.chebval(self.x, C)
                - np.polynomial.chebyshev.chebval(-1.0, C))

    def deriv_at_zero(self, c: np.ndarray, order: int) -> float:
        dc = np.polynomial.chebyshev.chebder(c, order, scl=2.0 / self.r_max)
        return float(np.polynomial.chebyshev.chebval(-1.0, dc))


# --- power-series algebra at the origin (dense coefficients in r) ---------

_SERIES_LEN = 12


def _ser_mul(a, b):
    out = np.zeros(_SERIES_LEN)
    for i, ai in enumerate(a):
        if ai == 0.0:
            continue
        top = min(_SERIES_LEN - i, len(b))
        out[i:i + top] += ai * np.asarray(b[:top])
    return out


def _ser_pow(a, p):
    """a(r)^p by the J.C.P. Miller recurrence; needs a[0] > 0."""
    a = np.asarray(a, dtype=float)
    out = np.zeros(_SERIES_LEN)
    out[0] = a[0] ** p
    for n in range(1, _SERIES_LEN):
        acc = 0.0
        for k in range(1, min(n, len(a) - 1) + 1):
            acc += ((p + 1) * k - n) * a[k] * out[n - k]
        out[n] = acc / (n * a[0])
    return out


def _ser_eval(a, r):
    out = np.zeros_like(r)
    for j, aj in enumerate(a):
        if aj != 0.0:
            out += aj * r ** j
    return out


def _ser_deriv(a):
    out = np.zeros(_SERIES_LEN)
    out[:len(a) - 1] = [j * a[j] for j in range(1, len(a))]
    return out


class _OriginModel:
    """Taylor data of the transport recursion at r = 0.

    The Jacobi field is odd, j = r E(r^2)-style, with coefficients from
    j'' = -K j; all densities are even power series built from it.  This
    keeps the r -> 0 end of each recursion level exact instead of losing
    one differentiation order per level to a numerical fit.
    """

    def __init__(self, profile: RadialCurvatureProfile, d: int):
        self.d = d
        # even Taylor coefficients of K by Richardson central differences
        h = min(0.05, profile.r_max / 16.0)
        K = profile.K
        kcoef = np.zeros(_SERIES_LEN)
        kcoef[0] = K(0.0)

        # symmetric samples: K extends evenly, so K(-x) := K(x)
        def ksym(x):
            return K(abs(x))
        for order, fd in ((2, self._fd2), (4, self._fd4), (6, self._fd6)):
            val = (4.0 * fd(ksym, h / 2) - fd(ksym, h)) / 3.0
            kcoef[order] = val / math.factorial(order)
        # j = sum j_m r^m (odd): (m+2)(m+1) j_{m+2} = -(K j)_m
        j = np.zeros(_SERIES_LEN)
        j[1] = 1.0
        for m in range(1, _SERIES_LEN - 2):
            conv = sum(kcoef[a] * j[m - a] for a in range(0, m + 1))
            j[m + 2] = -conv / ((m + 2) * (m + 1))
        self.j_series = j
        E = np.zeros(_SERIES_LEN)       # j / r
        E[:_SERIES_LEN - 1] = j[1:]
        sinh_over_r = np.zeros(_SERIES_LEN)
        for m in range(0, _SERIES_LEN, 2):
            sinh_over_r[m] = 1.0 / math.factorial(m + 1)
        j_over_sinh = _ser_mul(E, _ser_pow(sinh_over_r, -1.0))
        self.dens = _ser_pow(j_over_sinh, 0.5 * d)      # sqrt(Theta/Theta_0)
        self.u0 = _ser_pow(j_over_sinh, -0.5 * d)
        self.r_over_sinh = _ser_pow(sinh_over_r, -1.0)
        # Lambda_reg = j'/j - 1/r = E'/E (odd series)
        self.lam_reg = _ser_mul(_ser_deriv(E), _ser_pow(E, -1.0))

    @staticmethod
    def _fd2(f, h):
        return (f(h) - 2 * f(0.0) + f(-h)) / (h * h)

    @staticmethod
    def _fd4(f, h):
        return (f(2 * h) - 4 * f(h) + 6 * f(0.0) - 4 * f(-h) + f(-2 * h)) / h ** 4

    @staticmethod
    def _fd6(f, h):
        return (f(3 * h) - 6 * f(2 * h) + 15 * f(h) - 20 * f(0.0)
                + 15 * f(-h) + f(-3 * h) - 6 * f(-2 * h)) / h ** 6

    def source_series(self, prev: np.ndarray, shift: float) -> np.ndarray:
        """(-Lap + shift) applied to an even Taylor series."""
        p1 = _ser_deriv(prev)
        p2 = _ser_deriv(p1)
        p1_over_r = np.zeros(_SERIES_LEN)
        p1_over_r[:_SERIES_LEN - 1] = p1[1:]
        lap = p2 + self.d * (p1_over_r + _ser_mul(self.lam_reg, p1))
        return -lap + shift * prev

    def next_level(self, prev: np.ndarray, k: int, shift: float):
        """Taylor series of u_k from that of u_{k-1}; also returns the
        even source series g (integrand smooth part)."""
        g = _ser_mul(self.dens, self.source_series(prev, shift))
        weighted = np.array([g[j] / (k + j) for j in range(_SERIES_LEN)])
        uk = _ser_mul(_ser_mul(self.u0, _ser_pow_k(self.r_over_sinh, k)), weighted)
        return uk, g


def _ser_pow_k(a, k: int):
    out = np.zeros(_SERIES_LEN)
    out[0] = 1.0
    for _ in range(k):
        out = _ser_mul(out, a)
    return out


def u_k_radial(profile: RadialCurvatureProfile, d: int, k_max: int,
               n_grid: int = 256) -> UkTable:
    """Transport coefficients u_0 .. u_k_max along the radial geodesic.

    Works on a Chebyshev frame: derivatives for the radial Laplacian are
    spectral, the transport integral is the exact antiderivative of the
    (chopped) integrand series, and the r -> 0 region of the integral is
    rebuilt from a local Taylor model so the division by sinh(r)^k never
    amplifies the global series' absolute error.  n_grid is the spectral
    resolution; the constant-curvature collapse (u_k == 0 for k >= 1 when
    K == -1) holds to the chopping level by construction.
    """
    if k_max < 0 or k_max > 5:
        raise ValueError("k_max must lie in 0..5")
    sol = theta_radial(profile, d, n_grid=max(64, n_grid // 2))
    frame = _ChebFrame(profile.r_max, max(96, n_grid))
    r = frame.r
    j = np.array([sol.j(x) for x in r])
    jd1 = np.array([sol.j_d1(x) for x in r])
    sinh_r = np.sinh(r)
    jj_slope = d * jd1 / j                      # d j'/j, no node sits at 0
    dens_pow = (j / sinh_r) ** (0.5 * d)        # sqrt(Theta/Theta_0)
    u0_vals = 1.0 / dens_pow
    # The origin Taylor model replaces the global series where 1/r (and
    # 1/sinh in the transport identity) amplifies numerical error.  The
    # handover is a C^3 crossfade: a hard switch would leave a value jump
    # whose Gibbs oscillations get differentiated at the next level.
    r_hi = min(0.30, 0.20 * profile.r_max)
    r_lo = 0.4 * r_hi
    t_band = np.clip((r - r_lo) / (r_hi - r_lo), 0.0, 1.0)
    w_global = t_band ** 4 * (35.0 - 84.0 * t_band + 70.0 * t_band ** 2
                              - 20.0 * t_band ** 3)
    w_taylor = 1.0 - w_global
    patch = r <= r_hi

    grid_out = np.concatenate(([0.0], r))
    values = np.empty((k_max + 1, len(grid_out)))
    values[0] = np.concatenate(([1.0], u0_vals))

    origin = _OriginModel(profile, d)
    # Xi = Theta'/Theta - Theta_0'/Theta_0 = d (j'/j - coth r); it feeds the
    # transport identity  sinh u_k' + [k cosh + (sinh/2) Xi] u_k = G_k,
    # which supplies every first derivative algebraically.  Only the second
    # derivative needs one spectral differentiation per level.
    coth_r = np.cosh(r) / sinh_r
    xi = jj_slope - d * coth_r
    noise_scale = max(1.0, float(np.max(np.abs(u0_vals))))
    # Error ladder: differentiating a series whose tail is chopped at
    # `floor` costs about (nu_cut^2 * scl) * floor pointwise, and that
    # error is inherited by the next level's values.  Chopping each level
    # at its own inherited floor keeps rough error out of the derivative.
    floor = 1e-11 * noise_scale
    prev_vals = u0_vals
    prev_d1 = -0.5 * xi * u0_vals
    prev_taylor = origin.u0
    rp = r[patch]
    for k in range(1, k_max + 1):
        d1_series = frame.to_series(prev_d1, floor=floor)
        nu_cut = len(d1_series)
        floor = max(floor, 0.5 * nu_cut ** 2 * (2.0 / frame.r_max) * floor)
        f1 = prev_d1
        f2 = frame.deriv_vals(d1_series, 1)
        shift = (k - 1 - 0.5 * d) ** 2 - 0.25 * d * d
        G = -(f2 + jj_slope * f1) + shift * prev_vals
        uk_taylor, g_taylor = origin.next_level(prev_taylor, k, shift)
        g_vals = dens_pow * G                   # smooth part of the integrand
        g_vals[patch] = (w_global[patch] * g_vals[patch]
                         + w_taylor[patch] * _ser_eval(g_taylor, rp))
        integrand_series = frame.to_series(sinh_r ** (k - 1) * g_vals)
        I_vals = frame.cumulative(integrand_series)
        uk = u0_vals * I_vals / sinh_r ** k
        uk[patch] = (w_global[patch] * uk[patch]
                     + w_taylor[patch] * _ser_eval(uk_taylor, rp))
        values[k] = np.concatenate(([uk_taylor[0]], uk))
        G_blend = g_vals / dens_pow
        uk_d1 = (G_blend - uk * (k * np.cosh(r) + 0.5 * sinh_r * xi)) / sinh_r
        uk_d1[patch] = (w_global[patch] * uk_d1[patch]
                        + w_taylor[patch] * _ser_eval(_ser_deriv(uk_taylor), rp))
        noise_scale = max(noise_scale, float(np.max(np.abs(uk))))
        prev_vals, prev_d1, prev_taylor = uk, uk_d1, uk_taylor
    return UkTable(d=d, grid=grid_out, values=values)


def verify_bound_uk(table: UkTable, r_lo: float = 1.0) -> list[dict]:
    """Fit log|u_k| <= a + b r on [r_lo, r_max]; reports (a, b) per k."""
    mask = table.grid >= r_lo
    rr = table.grid[mask]
    out = []
    for k in range(table.values.shape[0]):
        y = np.log(np.abs(table.values[k][mask]) + 1e-300)
        b, a = np.polyfit(rr, y, 1)
        out.append({"k": k, "intercept": float(a), "slope": float(b),
                    "finite": bool(np.isfinite(a) and np.isfinite(b))})
    return out


def c0_constant(d: int) -> float:
    """Parametrix normalization (1/2) (2 pi)^(-d/2)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return 0.5 * (2.0 * math.pi) ** (-0.5 * d)
