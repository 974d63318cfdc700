"""Acceptance suite: every criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL
line per criterion with timings.
"""

import math
import time

import numpy as np
import pytest

from cusplab.cusp import (Lattice, c1_lattice, cusp_term, gamma_lattice,
                          sin_integral_renormalized)
from cusplab.families import random_blaschke_family
from cusplab.malpha import MAlphaIndex, SmoothFunction, m_alpha_eval, m_alpha_pair
from cusplab.parametrix import RadialCurvatureProfile, u_k_radial
from cusplab.scattering import (PhiModel, ResonanceSet, lorentzian_strip_integral,
                                lorentzian_strip_quadrature, phase_derivative,
                                strip_weighted_sum, weyl_fit)
from cusplab.special import EULER_GAMMA
from cusplab.testfunction import TestFunctionPsi
from cusplab.zerocount import (CountingBox, big_rectangle_weighted_sum,
                               brute_force_zeros, carleman_weighted_count,
                               small_rectangle_weighted_sum, weighted_sum_direct)


def _report(num, label, ok, t0):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} {status}  {label}  ({time.time() - t0:.2f}s)")
    assert ok, f"criterion {num} failed: {label}"


def test_criterion_01_c1_lattice_constant():
    t0 = time.time()
    value = c1_lattice(Lattice.integers(1), R_max=20000.0)
    ok = abs(value - (1.0 - math.log(2.0))) <= 1e-8
    ok = ok and (time.time() - t0) < 10.0
    _report(1, "C1(Z) = 1 - log 2 through the full pipeline (1e-8, <10s)", ok, t0)


def test_criterion_02_one_minus_gamma_constant():
    t0 = time.time()
    value = sin_integral_renormalized()
    ok = abs(value - (1.0 - EULER_GAMMA)) <= 1e-9
    ok = ok and (time.time() - t0) < 1.0
    _report(2, "renormalized sine integral = 1 - EulerGamma (1e-9, <1s)", ok, t0)


def test_criterion_03_zero_counting_suite():
    t0 = time.time()
    rng = np.random.default_rng(0)
    d, b, T, c = 1.0, 1.3, 6.0, 2.0
    box = CountingBox(b=b, d_half=0.5 * d, T=T, c=c)
    b_carleman, T_carleman = 0.45, 6.5
    fams = random_blaschke_family(rng, 20, d, b, T, max_pairs=8)
    worst = 0.0
    ok = True
    for fn, _known in fams:
        zeros = brute_force_zeros(fn, (0.42, 1.45, -6.6, 6.6), min_cell=1e-5)
        checks = [
            (carleman_weighted_count(fn, b_carleman, T_carleman),
             weighted_sum_direct(zeros, "carleman", box, b=b_carleman, T=T_carleman)),
            (big_rectangle_weighted_sum(fn, box),
             weighted_sum_direct(zeros, "big", box)),
            (small_rectangle_weighted_sum(fn, box, 3.0),
             weighted_sum_direct(zeros, "small", box, T_center=3.0)),
        ]
        for got, want in checks:
            err = abs(got - want)
            worst = max(worst, err)
            ok = ok and err <= max(1e-6, 1e-6 * abs(want))
    ok = ok and (time.time() - t0) < 300.0
    _report(3, f"20-function lemma suite vs brute force (worst {worst:.2e})", ok, t0)


def test_criterion_04_cusp_term_residuals():
    t0 = time.time()
    lattice = Lattice.integers(1)
    gam = gamma_lattice(lattice, 20000.0).value
    residuals = []
    for T in (50.0, 100.0, 200.0, 400.0):
        psi = TestFunctionPsi(T, 1.0 / math.log(T))
        residuals.append(abs(cusp_term(psi, lattice, gamma_value=gam).residual))
    ok = residuals[-1] <= 2.0 * float(np.median(residuals))
    ok = ok and (time.time() - t0) < 600.0
    _report(4, f"cusp-term residuals bounded on T=50..400 "
               f"(|res(400)|={residuals[-1]:.2e}, med={np.median(residuals):.2e})",
            ok, t0)


def test_criterion_05_parametrix_collapse():
    t0 = time.time()
    ok = True
    for d in (1, 2, 3):
        tab = u_k_radial(RadialCurvatureProfile.constant(-1.0, 5.0), d=d, k_max=3)
        ok = ok and float(np.max(np.abs(tab.column(0) - 1.0))) <= 1e-8
        for k in (1, 2, 3):
            ok = ok and float(np.max(np.abs(tab.column(k)))) <= 1e-6
    ok = ok and (time.time() - t0) < 60.0
    _report(5, "K == -1 collapse: |u0 - 1| <= 1e-8, |u_k| <= 1e-6 on (0,5]", ok, t0)


def test_criterion_06_m_alpha_recursion_and_pairing():
    t0 = time.time()
    grid = np.linspace(0.05, 10.0, 100)
    ok = True
    for alpha in (0.5, 1.0, 1.5, 2.0):
        for s in grid:
            lhs = s * m_alpha_eval(MAlphaIndex(alpha - 1.0), float(s))
            rhs = alpha * m_alpha_eval(MAlphaIndex(alpha), float(s))
            ok = ok and abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def g0(s):
        return math.exp(-((s - 1.2) / 0.35) ** 2)

    def g1(s):
        return g0(s) * (-2.0 * (s - 1.2) / 0.35 ** 2)

    def g2(s):
        return g0(s) * (4.0 * (s - 1.2) ** 2 / 0.35 ** 4 - 2.0 / 0.35 ** 2)

    g = SmoothFunction(derivs=(g0, g1, g2), support=(-6.0, 6.0))
    for idx_a, idx_b in [(MAlphaIndex(0.5, 1), MAlphaIndex(1.5, 2)),
                         (MAlphaIndex(-0.5, 1), MAlphaIndex(0.5, 2)),
                         (MAlphaIndex(1.0, 1), MAlphaIndex(0.0, 0))]:
        va, vb = m_alpha_pair(idx_a, g), m_alpha_pair(idx_b, g)
        ok = ok and abs(va - vb) <= 1e-8 * max(1.0, abs(va))
    ok = ok and (time.time() - t0) < 10.0
    _report(6, "s M_{a-1} = a M_a pointwise (1e-12) and pairing reductions (1e-8)",
            ok, t0)


def test_criterion_07_lorentzian_identity():
    t0 = time.time()
    rng = np.random.default_rng(1)
    worst = 0.0
    count = 0
    while count < 200:
        rho = complex(rng.uniform(-4.0, 0.49), rng.uniform(-30.0, 30.0))
        T = rng.uniform(0.5, 40.0)
        if abs(abs(rho - 0.5) - T) < 1e-2:
            continue  # stay off the degenerate case boundary
        count += 1
        got = lorentzian_strip_integral(rho, 1, T)
        want = lorentzian_strip_quadrature(rho, 1, T)
        worst = max(worst, abs(got - want))
    ok = worst <= 1e-8 and (time.time() - t0) < 60.0
    _report(7, f"Lorentzian closed form = quadrature on 200 configs "
               f"(worst {worst:.2e})", ok, t0)


def test_criterion_08_factorization_invariants():
    t0 = time.time()
    rng = np.random.default_rng(2)
    rhos = []
    for _ in range(5000):
        u = complex(rng.uniform(0.02, 0.48), rng.uniform(0.1, 2000.0))
        rhos += [u, u.conjugate()]
    model = PhiModel(ResonanceSet.from_list(1, 1, rhos), q_coeffs=(0.0, 0.8j))
    worst_axis = max(abs(abs(model(complex(0.5, t))) - 1.0)
                     for t in np.linspace(0.0, 2200.0, 60))
    worst_feq = 0.0
    for _ in range(60):
        s = complex(rng.uniform(-2.0, 3.0), rng.uniform(-2100.0, 2100.0))
        worst_feq = max(worst_feq, abs(model(s) * model(1.0 - s) - 1.0))
    sign_ok = True
    for T in np.linspace(0.0, 2100.0, 50):
        _, parts = phase_derivative(model, float(T), parts=True)
        sign_ok = sign_ok and parts["resonance_sum"] <= 0.0
    ok = worst_axis <= 1e-10 and worst_feq <= 1e-10 and sign_ok
    ok = ok and (time.time() - t0) < 120.0
    _report(8, f"10^4-resonance model: axis unitarity {worst_axis:.1e}, "
               f"functional eq {worst_feq:.1e}, phase sum <= 0", ok, t0)


def test_criterion_09_weyl_fit_oracle():
    t0 = time.time()
    rng = np.random.default_rng(3)
    d = 1
    a0, b0, c0 = 0.3, -1.0 / math.pi, (1.0 - math.log(2.0)) / math.pi
    Ts = np.geomspace(100.0, 1e4, 4000)
    ys = a0 * Ts ** (d + 1) + b0 * Ts * np.log(Ts) + c0 * Ts
    da, db = [], []
    for _ in range(100):
        noise = (Ts ** d / np.log(Ts)) * rng.uniform(-1.0, 1.0, len(Ts))
        fit = weyl_fit(list(zip(Ts, ys + noise)), d)
        da.append((fit.a_lead - a0) / a0)
        db.append((fit.b_log - b0) / b0)
    rms_a = math.sqrt(float(np.mean(np.square(da))))
    rms_b = math.sqrt(float(np.mean(np.square(db))))
    ok = rms_a <= 0.01 and rms_b <= 0.05 and (time.time() - t0) < 120.0
    _report(9, f"noisy Weyl fit: leading {rms_a:.2%} (<=1%), "
               f"T log T {rms_b:.2%} (<=5%) over 100 draws", ok, t0)


def test_criterion_10_model_surface_end_to_end():
    t0 = time.time()
    from cusplab.modular import ModularPhi, locate_modular_resonances

    mp = ModularPhi()
    rng = np.random.default_rng(4)
    gate_u = mp.unitarity_defect(np.linspace(0.1, 80.0, 50))
    samples = [complex(rng.uniform(-0.4, 1.4), rng.uniform(0.5, 90.0))
               for _ in range(50)]
    gate_f = mp.functional_equation_defect(samples)
    gates_ok = gate_u <= 1e-9 and gate_f <= 1e-9

    T = 100.0  # resonances located up to height 2T = 200 in the zeta plane
    rset, zeros = locate_modular_resonances(height=T, b=1.2, im_min=0.5,
                                            min_cell=1e-4)
    pattern_ok = all(abs(r.real - 0.25) < 1e-6 for r, _ in rset.entries)
    out = strip_weighted_sum(rset, b=1.2, T=T, leading=(math.sqrt(math.pi), 0.0))
    deviation = abs(out.value - out.predicted) / abs(out.predicted)
    ok = gates_ok and pattern_ok and deviation <= 0.15
    ok = ok and (time.time() - t0) < 900.0
    _report(10, f"model surface: gates {max(gate_u, gate_f):.1e} (<=1e-9); "
                f"{len(zeros)} resonances at Re=1/4; strip sum {out.value:.2f} vs "
                f"predicted {out.predicted:.2f} ({deviation:.1%} <= 15%)", ok, t0)
