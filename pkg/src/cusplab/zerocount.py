"""Weighted zero counting for holomorphic functions.

Three boundary-integral identities (a log-weighted half-disk count, and
linear / cosine-sinh weighted rectangle counts for functions unimodular on
a vertical axis and real on the real axis), plus an argument-principle
quadrisection oracle that locates zeros directly.

Sign conventions were re-derived from the Green identity
2 pi sum_zeros u(z) = contour integral of (u d_nu log|F| - log|F| d_nu u);
the half-disk identity carries a minus sign on the vertical-segment term,
and the cosine-weighted window has half-width pi/(2c), where the weight
vanishes.  Both are pinned by the zero-free trivial cases in the tests.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .quadrature import QuadratureSpec, Singularity, integrate

__all__ = [
    "AnalyticFunction",
    "ZeroEntry",
    "ZeroList",
    "CountingBox",
    "ContourProximityError",
    "PreconditionError",
    "carleman_weighted_count",
    "big_rectangle_weighted_sum",
    "small_rectangle_weighted_sum",
    "brute_force_zeros",
    "weighted_sum_direct",
]

_FD_STEP = 1e-6


class ContourProximityError(RuntimeError):
    def __init__(self, point: complex, msg: str = ""):
        super().__init__(msg or f"function vanishes too close to the contour near {point:.6g}")
        self.point = point


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class AnalyticFunction:
    value: Callable[[complex], complex]
    derivative: Callable[[complex], complex] | None = None
    name: str = ""

    def __call__(self, z: complex) -> complex:
        return self.value(z)

    def deriv(self, z: complex) -> complex:
        if self.derivative is not None:
            return self.derivative(z)
        h = _FD_STEP * max(1.0, abs(z))
        return (self.value(z + h) - self.value(z - h)) / (2.0 * h)

    def logderiv(self, z: complex) -> complex:
        return self.deriv(z) / self.value(z)


@dataclass(frozen=True)
class ZeroEntry:
    location: complex
    multiplicity: int = 1
    on_boundary: bool = False

    @property
    def weight(self) -> float:
        return 0.5 * self.multiplicity if self.on_boundary else float(self.multiplicity)


@dataclass
class ZeroList:
    entries: list[ZeroEntry] = field(default_factory=list)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def weighted_sum(self, u: Callable[[complex], float]) -> float:
        """sum of u over zeros, boundary entries at half weight."""
        return sum(e.weight * u(e.location) for e in self.entries)

    def to_json(self) -> str:
        return json.dumps([
            {"re": e.location.real, "im": e.location.imag,
             "mult": e.multiplicity, "boundary": e.on_boundary}
            for e in self.entries
        ])

    @classmethod
    def from_json(cls, text: str) -> "ZeroList":
        return cls([ZeroEntry(complex(d["re"], d["im"]), int(d["mult"]), bool(d.get("boundary", False)))
                    for d in json.loads(text)])


@dataclass(frozen=True)
class CountingBox:
    b: float
    d_half: float
    T: float
    c: float | None = None

    def __post_init__(self):
        if not self.b > self.d_half:
            raise ValueError("need b > d_half")
        if not self.T > 0:
            raise ValueError("need T > 0")
        if self.c is not None and not self.c > 0:
            raise ValueError("need c > 0")


def _guard_contour(F: AnalyticFunction, points: Sequence[complex], floor_rel: float = 1e-12):
    vals = [abs(F(z)) for z in points]
    top = max(vals)
    if top == 0.0:
        raise ContourProximityError(points[0])
    floor = floor_rel * top
    for z, v in zip(points, vals):
        if v < floor:
            raise ContourProximityError(z)


def carleman_weighted_count(F: AnalyticFunction, b: float, T: float,
                            spec: QuadratureSpec | None = None) -> float:
    """Log-weighted zero count over the half-disk {Re z > b, |z - b| < T}.

    Equals sum over zeros (with multiplicity) of log(T / |z - b|).
    """
    spec = spec or QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12, max_subdivisions=4000)
    if abs(F(b)) == 0.0:
        raise PreconditionError("F(b) must not vanish")
    guard = [b + T * cmath.exp(1j * th) for th in np.linspace(-math.pi / 2, math.pi / 2, 101)]
    guard += [b + 1j * t for t in np.linspace(-T, T, 101) if t != 0.0]
    _guard_contour(F, guard)

    circ = integrate(lambda th: math.log(abs(F(b + T * cmath.exp(1j * th)))),
                     -math.pi / 2, math.pi / 2, spec,
                     singularities=[Singularity(-math.pi / 2), Singularity(math.pi / 2)])
    seg_f = lambda t: math.log(T / abs(t)) * F.logderiv(b + 1j * t).real
    seg_lo = integrate(seg_f, -T, 0.0, spec, singularities=[Singularity(0.0)])
    seg_hi = integrate(seg_f, 0.0, T, spec, singularities=[Singularity(0.0)])
    for r in (circ, seg_lo, seg_hi):
        if not r.converged:
            from .quadrature import NonConvergenceError
            raise NonConvergenceError(r, "carleman boundary integral did not converge")
    total = circ.value - math.pi * math.log(abs(F(b))) - (seg_lo.value + seg_hi.value)
    return total / (2.0 * math.pi)


def _check_axis_and_reality(F: AnalyticFunction, box: CountingBox,
                            t_window: tuple[float, float], check_reality: bool):
    for t in np.linspace(*t_window, 41):
        v = abs(F(box.d_half + 1j * t))
        if abs(v - 1.0) > 1e-8:
            raise PreconditionError(
                f"|F| != 1 on the axis Re z = {box.d_half} (t={t:.4g}, |F|={v:.3e})")
    if check_reality:
        for x in np.linspace(box.d_half, box.b, 17):
            v = F(complex(x, 0.0))
            if abs(v.imag) > 1e-8 * (1.0 + abs(v)):
                raise PreconditionError(f"F not real on the real axis (x={x:.4g})")


def big_rectangle_weighted_sum(F: AnalyticFunction, box: CountingBox,
                               spec: QuadratureSpec | None = None) -> float:
    """Weighted count sum (T - gamma)(beta - d/2) over zeros in
    [d/2, b] x [0, T], from three boundary integrals."""
    spec = spec or QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12, max_subdivisions=4000)
    d2, b, T = box.d_half, box.b, box.T
    _check_axis_and_reality(F, box, (0.0, T), check_reality=True)
    guard = [b + 1j * t for t in np.linspace(0, T, 101)]
    guard += [x + 1j * T for x in np.linspace(d2, b, 41)]
    guard += [complex(x, 0.0) for x in np.linspace(d2, b, 41)]
    _guard_contour(F, guard)

    i_right_ld = integrate(lambda t: F.logderiv(b + 1j * t).real * (b - d2) * (T - t),
                           0.0, T, spec)
    i_top_bot = integrate(lambda x: math.log(abs(F(x + 1j * T)) / abs(F(complex(x, 0.0)))) * (x - d2),
                          d2, b, spec)
    i_right_log = integrate(lambda t: math.log(abs(F(b + 1j * t))) * (T - t), 0.0, T, spec)
    return (i_right_ld.value + i_top_bot.value - i_right_log.value) / (2.0 * math.pi)


def small_rectangle_weighted_sum(F: AnalyticFunction, box: CountingBox, T_center: float,
                                 spec: QuadratureSpec | None = None) -> float:
    """Weighted count sum cos(c(gamma - T)) sinh(c(beta - d/2)) over zeros in
    the window |gamma - T_center| <= pi/(2c), x in [d/2, b].

    The window half-width is pi/(2c): that is where the cosine weight
    vanishes, which is what makes the top/bottom boundary terms close.
    """
    if box.c is None:
        raise ValueError("CountingBox.c is required for the small-rectangle count")
    spec = spec or QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12, max_subdivisions=4000)
    d2, b, c = box.d_half, box.b, box.c
    w = math.pi / (2.0 * c)
    _check_axis_and_reality(F, box, (T_center - w, T_center + w), check_reality=False)
    guard = [b + 1j * (T_center + t) for t in np.linspace(-w, w, 81)]
    guard += [x + 1j * (T_center + s * w) for s in (-1.0, 1.0) for x in np.linspace(d2, b, 41)]
    _guard_contour(F, guard)

    sh, ch = math.sinh(c * (b - d2)), math.cosh(c * (b - d2))
    i_ld = integrate(lambda t: sh * math.cos(c * t) * F.logderiv(b + 1j * (T_center + t)).real,
                     -w, w, spec)
    i_log = integrate(lambda t: ch * math.cos(c * t) * math.log(abs(F(b + 1j * (T_center + t)))),
                      -w, w, spec)
    i_edges = integrate(
        lambda x: math.log(abs(F(x + 1j * (T_center + w))) * abs(F(x + 1j * (T_center - w))))
        * math.sinh(c * (x - d2)),
        d2, b, spec)
    return (i_ld.value - c * i_log.value + c * i_edges.value) / (2.0 * math.pi)


def weighted_sum_direct(zeros: ZeroList, kind: str, box: CountingBox,
                        T_center: float | None = None, b: float | None = None,
                        T: float | None = None) -> float:
    """Direct weighted sums over an explicit zero list (half weight on
    boundary-flagged entries), matching the three contour identities."""
    if kind == "carleman":
        bb = b if b is not None else box.b
        TT = T if T is not None else box.T
        def u(z):
            r = abs(z - bb)
            return math.log(TT / r) if (z.real > bb and r < TT) else 0.0
        return zeros.weighted_sum(u)
    if kind == "big":
        d2, bb, TT = box.d_half, box.b, box.T
        def u(z):
            if d2 <= z.real <= bb and 0.0 <= z.imag <= TT:
                return (TT - z.imag) * (z.real - d2)
            return 0.0
        return zeros.weighted_sum(u)
    if kind == "small":
        if box.c is None or T_center is None:
            raise ValueError("small kind needs box.c and T_center")
        d2, bb, c = box.d_half, box.b, box.c
        w = math.pi / (2.0 * c)
        def u(z):
            if d2 <= z.real <= bb and abs(z.imag - T_center) <= w:
                return math.cos(c * (z.imag - T_center)) * math.sinh(c * (z.real - d2))
            return 0.0
        return zeros.weighted_sum(u)
    raise ValueError(f"unknown kind {kind!r}")


# ----------------------------------------------------------------------------
# Argument-principle oracle


class _EdgeWalker:
    """Tracks the continuous argument of F along straight segments.

    A phase increment between consecutive samples is only trusted when the
    a-priori bound |dz| * |F'/F| on the true argument change is small; a
    raw |arg(f1/f0)| < pi/2 test alone aliases on near-unimodular
    functions, whose magnitude carries no warning of a full phase turn.
    """

    def __init__(self, F: AnalyticFunction, max_depth: int = 52):
        self.F = F
        self.max_depth = max_depth

    def _val(self, z: complex) -> complex:
        v = self.F(z)
        if v == 0.0 or not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ContourProximityError(z, f"F vanishes or is non-finite on the contour at {z:.6g}")
        return v

    def increment(self, z0: complex, z1: complex, f0=None, f1=None, depth: int = 0) -> float:
        f0 = self._val(z0) if f0 is None else f0
        f1 = self._val(z1) if f1 is None else f1
        length = abs(z1 - z0)
        speed = max(abs(self.F.deriv(z0) / f0), abs(self.F.deriv(z1) / f1))
        if length * speed <= 1.2:
            dphi = cmath.phase(f1 / f0)
            if abs(dphi) <= 1.2:
                return dphi
        if depth >= self.max_depth:
            raise ContourProximityError(z0, "phase step failed to resolve; zero on or near the contour")
        zm = 0.5 * (z0 + z1)
        fm = self._val(zm)
        return (self.increment(z0, zm, f0, fm, depth + 1)
                + self.increment(zm, z1, fm, f1, depth + 1))


def _winding(walker: _EdgeWalker, re0, re1, im0, im1) -> int:
    corners = [complex(re0, im0), complex(re1, im0), complex(re1, im1), complex(re0, im1)]
    total = 0.0
    for k in range(4):
        z0, z1 = corners[k], corners[(k + 1) % 4]
        pts = [z0 + (z1 - z0) * j / 4.0 for j in range(5)]
        for a0, a1 in zip(pts[:-1], pts[1:]):
            total += walker.increment(a0, a1)
    n = total / (2.0 * math.pi)
    if abs(n - round(n)) > 0.1:
        raise ContourProximityError(complex(re0, im0), "winding integral is not an integer")
    return int(round(n))


def _newton_refine(F: AnalyticFunction, z0: complex, mult: int, cell_size: float) -> complex:
    z = z0
    for _ in range(40):
        fz = F(z)
        if fz == 0.0:
            return z
        dz = F.deriv(z)
        if dz == 0.0:
            return z
        step = mult * fz / dz
        z_new = z - step
        if abs(z_new - z0) > 1.5 * cell_size:
            return z0  # refinement wandered off; keep the localized center
        if abs(step) < 1e-14 * max(1.0, abs(z)):
            return z_new
        z = z_new
    return z


# Off-center split fractions, tried in order when a split line lands on a
# zero: re-splitting the parent keeps the partition exact, whereas inflating
# a child could double-count a zero belonging to a sibling.
_SPLIT_FRACTIONS = (0.51371, 0.46293, 0.55817, 0.43241, 0.5)


def brute_force_zeros(F: AnalyticFunction, rect: tuple[float, float, float, float],
                      min_cell: float = 1e-6, max_cells: int = 200_000) -> ZeroList:
    """Locate all zeros of F inside rect = (re_lo, re_hi, im_lo, im_hi).

    Recursive subdivision pruned by the winding number of each cell; cells
    below min_cell are resolved by Newton iteration from the center.  The
    outer boundary must be zero-free, and F must be holomorphic on the
    whole rectangle: a pole inside would cancel a zero in the winding
    count and both would be silently pruned.  A cell whose contour walk
    fails is inflated by 10% and retried once (outer cell) or re-split at
    a shifted fraction (interior cells).
    """
    walker = _EdgeWalker(F)
    re0, re1, im0, im1 = rect

    def outer_winding():
        # spec'd recovery for an outer contour grazing a zero: inflate by
        # 10% about the center and retry once
        try:
            return _winding(walker, re0, re1, im0, im1)
        except ContourProximityError:
            cx, cy = 0.5 * (re0 + re1), 0.5 * (im0 + im1)
            hw, hh = 0.55 * (re1 - re0), 0.55 * (im1 - im0)
            return _winding(walker, cx - hw, cx + hw, cy - hh, cy + hh)

    found: list[ZeroEntry] = []
    outer_w = outer_winding()
    if outer_w == 0:
        return ZeroList([])

    budget = [max_cells]

    def split(r0, r1, i0, i1, w):
        """Partition a cell and return children with windings summing to w."""
        width, height = r1 - r0, i1 - i0
        last_err = None
        for frac in _SPLIT_FRACTIONS:
            if width > 2.3 * height:
                rm = r0 + frac * width
                children = [(r0, rm, i0, i1), (rm, r1, i0, i1)]
            elif height > 2.3 * width:
                im_ = i0 + frac * height
                children = [(r0, r1, i0, im_), (r0, r1, im_, i1)]
            else:
                rm = r0 + frac * width
                im_ = i0 + frac * height
                children = [(r0, rm, i0, im_), (rm, r1, i0, im_),
                            (r0, rm, im_, i1), (rm, r1, im_, i1)]
            try:
                out = [(ch, _winding(walker, *ch)) for ch in children]
            except ContourProximityError as err:
                last_err = err
                continue
            if sum(cw for _, cw in out) != w:
                last_err = ContourProximityError(
                    complex(r0, i0), "child windings inconsistent with parent")
                continue
            return out
        raise last_err

    def recurse(r0, r1, i0, i1, w):
        if w == 0:
            return
        size = max(r1 - r0, i1 - i0)
        if size <= min_cell:
            center = complex(0.5 * (r0 + r1), 0.5 * (i0 + i1))
            z = _newton_refine(F, center, w, size)
            found.append(ZeroEntry(z, w))
            return
        if budget[0] <= 0:
            raise RuntimeError("brute_force_zeros exceeded its cell budget")
        budget[0] -= 4
        for cell, cw in split(r0, r1, i0, i1, w):
            recurse(*cell, cw)

    recurse(re0, re1, im0, im1, outer_w)
    total_mult = sum(e.multiplicity for e in found)
    if total_mult != outer_w:
        raise RuntimeError(f"located multiplicity {total_mult} != outer winding {outer_w}")
    found.sort(key=lambda e: (e.location.imag, e.location.real))
    return ZeroList(found)
