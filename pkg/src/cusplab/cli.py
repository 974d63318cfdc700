"""Command-line driver: every experiment as a subcommand with
machine-readable output.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence
(with a diagnostic JSON on stderr).  All runs are deterministic for a
fixed configuration and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .cusp import (Lattice, StabilizationError, c1_lattice, c_d_constant, cusp_term,
                   gamma_lattice, gamma_lattice_theta, sin_integral_renormalized)
from .parametrix import (ConjugatePointError, RadialCurvatureProfile,
                         c0_constant, u_k_radial, verify_bound_uk)
from .quadrature import NonConvergenceError
from .scattering import (PhiModel, ResonanceSet, SpectrumData, general_weyl_count,
                         phase_derivative, scattering_phase, strip_weighted_sum,
                         tilde_N, weyl_fit)
from .special import EULER_GAMMA
from .testfunction import TestFunctionPsi
from .zerocount import (CountingBox, big_rectangle_weighted_sum,
                        brute_force_zeros, carleman_weighted_count,
                        small_rectangle_weighted_sum, weighted_sum_direct)
from .families import random_blaschke_family, random_polynomial

_LATTICES = {
    "Z1": lambda: Lattice.integers(1),
    "Z2": lambda: Lattice.integers(2),
    "Z3": lambda: Lattice.integers(3),
}


class ConfigError(ValueError):
    pass


def _load_lattice(spec: str) -> Lattice:
    if spec in _LATTICES:
        return _LATTICES[spec]()
    if spec.startswith("@"):
        with open(spec[1:], encoding="utf-8") as fh:
            return Lattice.from_json(fh.read())
    raise ConfigError(f"unknown lattice {spec!r} (use Z1|Z2|Z3 or @basis.json)")


def _emit(rows: list[dict], header_note: str, args) -> None:
    """Write rows as CSV (with a leading comment naming the quantities) or
    as a JSON object; deterministic field order."""
    if not rows:
        rows = [{}]
    fields = list(rows[0].keys())
    if args.format == "json":
        payload = json.dumps({"quantity": header_note, "rows": rows},
                             indent=2, sort_keys=False)
        _write(payload + "\n", args.out)
        return
    buf = io.StringIO()
    buf.write(f"# {header_note}\n")
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    _write(buf.getvalue(), args.out)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


# --------------------------------------------------------------------- cmds

def cmd_lattice_const(args) -> int:
    if args.self_test:
        return _self_test_lattice()
    lat = _load_lattice(args.lattice)
    g = gamma_lattice(lat, args.r_max)
    rows = [{
        "dimension": lat.dimension,
        "gamma_lattice": _fmt(g.value),
        "gamma_error_estimate": _fmt(g.error),
        "c_d": _fmt(c_d_constant(lat.dimension)),
        "c1_lattice": _fmt(1.0 + c_d_constant(lat.dimension) + g.value - EULER_GAMMA),
    }]
    _emit(rows, "cusp lattice constants (dimensionless): renormalized shell-sum "
                "constant gamma(Lambda), parity constant C(d), C1 = 1 + C(d) + "
                "gamma(Lambda) - EulerGamma", args)
    return 0


def _self_test_lattice() -> int:
    ok = True
    z1 = Lattice.integers(1)
    v = c1_lattice(z1)
    ok &= _check("C1(Z) = 1 - log 2", abs(v - (1.0 - math.log(2.0))) < 1e-8)
    ok &= _check("gamma(Z) = EulerGamma",
                 abs(gamma_lattice(z1, 20000.0).value - EULER_GAMMA) < 1e-9)
    ok &= _check("theta-integral oracle agrees (Z1)",
                 abs(gamma_lattice_theta(z1) - EULER_GAMMA) < 1e-10)
    ok &= _check("1 - EulerGamma sine-integral constant",
                 abs(sin_integral_renormalized() - (1.0 - EULER_GAMMA)) < 1e-9)
    return 0 if ok else 1


def cmd_cusp_term(args) -> int:
    lat = _load_lattice(args.lattice)
    gam = gamma_lattice(lat, args.r_max).value
    if args.self_test:
        psi = TestFunctionPsi(50.0, 1.0 / math.log(50.0))
        res = cusp_term(psi, lat, gamma_value=gam)
        ok = _check("cusp residual bounded at T=50", abs(res.residual) < 0.5)
        ok &= _check("renormalized sine constant", abs(
            sin_integral_renormalized() - (1.0 - EULER_GAMMA)) < 1e-9)
        return 0 if ok else 1
    rows = []
    for T in args.t_grid:
        psi = TestFunctionPsi(T, args.scale_c / math.log(T))
        res = cusp_term(psi, lat, gamma_value=gam)
        rows.append({"T": T, "value": _fmt(res.value), "predicted": _fmt(res.predicted),
                     "residual": _fmt(res.residual)})
    _emit(rows, "renormalized cusp trace term vs -(T/pi) log T + C1(Lambda) T/pi "
                "(dimensionless; T = frequency cutoff)", args)
    if args.plot:
        from .report import cusp_term_figure
        cusp_term_figure([{k: float(v) for k, v in r.items()} for r in rows], args.plot)
    return 0


def cmd_count_zeros(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    tol = args.tol or 1e-6
    d, b, T, c = 1.0, 1.3, 6.0, 2.0
    box = CountingBox(b=b, d_half=0.5 * d, T=T, c=c)
    failures = 0
    if args.self_test:
        fn, known = random_blaschke_family(rng, 1, d, b, T, max_pairs=3)[0]
        zl = brute_force_zeros(fn, (0.42, 1.45, -6.6, 6.6), min_cell=1e-5)
        ok = _check("oracle multiplicity matches construction",
                    zl.total_multiplicity() == known.total_multiplicity())
        got = big_rectangle_weighted_sum(fn, box)
        want = weighted_sum_direct(zl, "big", box)
        ok &= _check("big-rectangle identity", abs(got - want) < 1e-6)
        return 0 if ok else 1
    if args.function == "poly-demo":
        fn, roots = random_polynomial(rng, 10)
        zl = brute_force_zeros(fn, (-1.3, 1.3, -1.3, 1.3), min_cell=1e-6)
        rows.append({"function": fn.name, "lemma": "winding-count",
                     "lhs_quadrature": zl.total_multiplicity(), "rhs_direct": len(roots),
                     "abs_diff": abs(zl.total_multiplicity() - len(roots)), "status": "ok"})
    else:
        fams = random_blaschke_family(rng, args.count, d, b, T, max_pairs=4)
        lemmas = {"carleman": True, "big-rect": True, "small-rect": True}
        if args.lemma != "all":
            lemmas = {args.lemma: True}
        for i, (fn, _known) in enumerate(fams):
            # 0.42 keeps the reflected Blaschke poles out of the oracle box
            zl = brute_force_zeros(fn, (0.42, 1.45, -1.1 * T, 1.1 * T), min_cell=1e-5)
            pairs = {}
            if "carleman" in lemmas:
                pairs["carleman"] = (carleman_weighted_count(fn, b, T),
                                     weighted_sum_direct(zl, "carleman", box, b=b, T=T))
            if "big-rect" in lemmas:
                pairs["big-rect"] = (big_rectangle_weighted_sum(fn, box),
                                     weighted_sum_direct(zl, "big", box))
            if "small-rect" in lemmas:
                pairs["small-rect"] = (small_rectangle_weighted_sum(fn, box, 0.5 * T),
                                       weighted_sum_direct(zl, "small", box, T_center=0.5 * T))
            for name, (lhs, rhs) in pairs.items():
                good = abs(lhs - rhs) <= max(tol, tol * abs(rhs))
                failures += 0 if good else 1
                rows.append({"function": f"blaschke[{i}]", "lemma": name,
                             "lhs_quadrature": _fmt(lhs), "rhs_direct": _fmt(rhs),
                             "abs_diff": _fmt(abs(lhs - rhs)),
                             "status": "ok" if good else "FAIL"})
    _emit(rows, "weighted zero counts: boundary-integral evaluation (lhs) vs "
                "direct sum over located zeros (rhs); dimensionless", args)
    return 0 if failures == 0 else 1


def cmd_parametrix(args) -> int:
    profile = _profile_from_args(args)
    tab = u_k_radial(profile, d=args.d, k_max=args.k_max, n_grid=args.n_grid)
    if args.self_test:
        flat = u_k_radial(RadialCurvatureProfile.constant(-1.0, 5.0), args.d, 3)
        ok = _check("u0 == 1 under K == -1",
                    float(np.max(np.abs(flat.column(0) - 1.0))) < 1e-8)
        for k in (1, 2, 3):
            ok &= _check(f"u{k} == 0 under K == -1",
                         float(np.max(np.abs(flat.column(k)))) < 1e-6)
        return 0 if ok else 1
    rows = [dict(zip(tab.to_csv_rows()[0], vals)) for vals in tab.to_csv_rows()[1:]]
    _emit(rows, "Hadamard transport coefficients u_k on the radial geodesic "
                "(r in curvature units)", args)
    if args.plot:
        from .report import parametrix_figure
        parametrix_figure(tab, args.plot)
    if args.growth_report:
        rep = verify_bound_uk(tab)
        sys.stderr.write(json.dumps({"growth_fit": rep}) + "\n")
    return 0


def _profile_from_args(args) -> RadialCurvatureProfile:
    name = args.curvature
    r_max = args.r_max
    if name == "hyperbolic":
        return RadialCurvatureProfile.constant(-1.0, r_max)
    if name == "flat":
        return RadialCurvatureProfile.constant(0.0, r_max)
    if name == "pinched-demo":
        return RadialCurvatureProfile(K=lambda r: -2.5 - 1.5 * math.cos(r),
                                      r_max=r_max, pinch=(-4.0, -1.0))
    if name == "bump-demo":
        eps = args.eps

        def K(r):
            w = (r - 2.0) / 1.5
            return -1.0 - (eps * math.exp(1.0 - 1.0 / (1.0 - w * w)) if abs(w) < 1 else 0.0)
        return RadialCurvatureProfile(K=K, r_max=r_max, pinch=(-1.0 - eps, -1.0))
    raise ConfigError(f"unknown curvature profile {name!r}")


def _demo_model(seed: int, n: int = 40) -> tuple[SpectrumData, PhiModel]:
    rng = np.random.default_rng(seed)
    rhos = []
    for _ in range(n):
        u = complex(rng.uniform(0.05, 0.45), rng.uniform(0.3, 50.0))
        rhos += [u, u.conjugate()]
    spec = SpectrumData.from_list(1, sorted(rng.uniform(0.0, 50.0, 60)))
    return spec, PhiModel(ResonanceSet.from_list(1, 1, rhos))


def cmd_phase(args) -> int:
    if args.resonances:
        with open(args.resonances, encoding="utf-8") as fh:
            rset = ResonanceSet.from_json(fh.read())
        model = PhiModel(rset)
        spec = SpectrumData.from_list(rset.d, [])
        if args.spectrum:
            with open(args.spectrum, encoding="utf-8") as fh:
                spec = SpectrumData.from_json(fh.read())
    else:
        spec, model = _demo_model(args.seed)
    if args.self_test:
        ok = _check("axis unitarity", max(
            abs(abs(model(complex(0.5 * model.d, t))) - 1.0)
            for t in np.linspace(0.0, 30.0, 61)) < 1e-10)
        sprime, parts = phase_derivative(model, 11.3, parts=True)
        ok &= _check("phase-derivative strip sum <= 0", parts["strip_resonance_sum"] <= 0.0)
        return 0 if ok else 1
    rows = []
    for T in args.t_grid:
        rows.append({"T": T,
                     "S_prime": _fmt(phase_derivative(model, T)),
                     "S": _fmt(scattering_phase(model, T)),
                     "tilde_N": _fmt(tilde_N(spec, model, T))})
    _emit(rows, "scattering phase S, its derivative, and N_pp - S "
                "(dimensionless; T = spectral parameter)", args)
    if args.plot:
        from .report import phase_figure
        phase_figure([{k: float(v) for k, v in r.items()} for r in rows], args.plot)
    return 0


def cmd_weyl_fit(args) -> int:
    rng = np.random.default_rng(args.seed)
    d = args.d
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            reader = csv.reader(row for row in fh if not row.startswith("#"))
            header = next(reader)
            samples = [(float(r[0]), float(r[1])) for r in reader]
    else:
        Ts = np.geomspace(args.t_min, args.t_max, args.n_samples)
        a0 = c0_constant(d)
        b0, c0 = -1.0 / math.pi, (1.0 - math.log(2.0)) / math.pi
        ys = a0 * Ts ** (d + 1) + b0 * Ts * np.log(Ts) + c0 * Ts
        if args.noise > 0:
            ys = ys + args.noise * (Ts ** d / np.log(Ts)) * rng.uniform(-1, 1, len(Ts))
        samples = list(zip(Ts, ys))
    fit = weyl_fit(samples, d)
    if args.self_test:
        Ts = np.geomspace(100.0, 1e4, 40)
        exact = 0.2 * Ts ** (d + 1) - Ts * np.log(Ts) / math.pi + 0.1 * Ts
        ref = weyl_fit(list(zip(Ts, exact)), d)
        ok = _check("exact synthetic recovery",
                    abs(ref.a_lead - 0.2) < 1e-9 and abs(ref.b_log + 1 / math.pi) < 1e-9)
        return 0 if ok else 1
    rows = [{"a_lead": _fmt(fit.a_lead), "b_log": _fmt(fit.b_log),
             "c_lin": _fmt(fit.c_lin), "residual_norm": _fmt(fit.residual_norm)}]
    _emit(rows, "least-squares coefficients of a T^(d+1) + b T log T + c T", args)
    if args.plot:
        from .report import weyl_fit_figure
        weyl_fit_figure([{"T": t, "value": v} for t, v in samples], fit, d, args.plot)
    return 0


def cmd_model_surface(args) -> int:
    from .modular import ModularPhi, locate_modular_resonances, modular_phi
    mp = ModularPhi()
    rng = np.random.default_rng(args.seed)
    gate_u = mp.unitarity_defect(np.linspace(0.1, 50.0, 40))
    samples = [complex(rng.uniform(-0.4, 1.4), rng.uniform(0.5, 80.0)) for _ in range(40)]
    gate_f = mp.functional_equation_defect(samples)
    if args.self_test:
        ok = _check("unitarity gate (1e-9)", gate_u < 1e-9)
        ok &= _check("functional-equation gate (1e-9)", gate_f < 1e-9)
        return 0 if ok else 1
    rset, zeros = locate_modular_resonances(height=args.height, b=args.b,
                                            min_cell=args.min_cell)
    res = strip_weighted_sum(rset, b=args.b, T=args.height,
                             leading=(math.sqrt(math.pi), 0.0))
    rows = [{"re": r.real, "im": r.imag, "mult": m} for (r, m) in rset.entries]
    _emit(rows, "model-surface resonances (poles of the scattering "
                "determinant; dimensionless spectral plane)", args)
    summary = {
        "unitarity_defect": gate_u,
        "functional_equation_defect": gate_f,
        "count": len(rows),
        "strip_weighted_sum": res.value,
        "strip_sum_predicted": res.predicted,
        "relative_deviation": abs(res.value - res.predicted) / abs(res.predicted),
    }
    sys.stderr.write(json.dumps(summary, indent=2) + "\n")
    if args.plot:
        from .report import model_surface_figure
        model_surface_figure(rows, args.plot)
    return 0


def cmd_general_count(args) -> int:
    if args.self_test:
        spec0, model = _demo_model(args.seed)
        out = general_weyl_count(model.resonances, spec0, args.T)
        return 0 if _check("identity residual ~ 0",
                           abs(out["identity_residual"]) < 1e-8) else 1
    if not args.resonances:
        raise ConfigError("general-count requires --resonances")
    with open(args.resonances, encoding="utf-8") as fh:
        rset = ResonanceSet.from_json(fh.read())
    if args.spectrum:
        with open(args.spectrum, encoding="utf-8") as fh:
            spec = SpectrumData.from_json(fh.read())
    else:
        spec = SpectrumData.from_list(rset.d, [])
    out = general_weyl_count(rset, spec, args.T)
    rows = [{k: _fmt(v) for k, v in out.items()}]
    _emit(rows, "disc resonance count via the Lorentzian strip identity "
                "(counts and dimensionless remainders)", args)
    return 0


def _check(label: str, ok: bool) -> bool:
    print(f"{'PASS' if ok else 'FAIL'}  {label}")
    return ok


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cusplab",
                                description="numerical laboratory for spectral "
                                            "counting on cusp manifolds")
    p.add_argument("--version", action="version", version=f"cusplab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with defaults for this subcommand")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--plot", help="render a PNG figure to this path")
        sp.add_argument("--self-test", action="store_true",
                        help="run the module invariant suite instead")

    sp = sub.add_parser("lattice-const", help="cusp lattice constants")
    common(sp)
    sp.add_argument("--lattice", default="Z1")
    sp.add_argument("--r-max", type=float, default=20000.0)
    sp.set_defaults(func=cmd_lattice_const)

    sp = sub.add_parser("count-zeros", help="zero-counting lemma cross-checks")
    common(sp)
    sp.add_argument("--function", choices=("blaschke-demo", "poly-demo"),
                    default="blaschke-demo")
    sp.add_argument("--lemma", choices=("carleman", "big-rect", "small-rect", "all"),
                    default="all")
    sp.add_argument("--count", type=int, default=5)
    sp.set_defaults(func=cmd_count_zeros)

    sp = sub.add_parser("cusp-term", help="renormalized cusp trace term sweep")
    common(sp)
    sp.add_argument("--lattice", default="Z1")
    sp.add_argument("--r-max", type=float, default=20000.0)
    sp.add_argument("--t-grid", type=_float_list, default=[50.0, 100.0, 200.0, 400.0])
    sp.add_argument("--scale-c", type=float, default=1.0,
                    help="mollifier scale A = scale_c / log T")
    sp.set_defaults(func=cmd_cusp_term)

    sp = sub.add_parser("parametrix", help="transport coefficients u_k")
    common(sp)
    sp.add_argument("--curvature", default="hyperbolic",
                    choices=("hyperbolic", "flat", "pinched-demo", "bump-demo"))
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--k-max", type=int, default=3)
    sp.add_argument("--r-max", type=float, default=5.0)
    sp.add_argument("--eps", type=float, default=0.01)
    sp.add_argument("--n-grid", type=int, default=256)
    sp.add_argument("--growth-report", action="store_true")
    sp.set_defaults(func=cmd_parametrix)

    sp = sub.add_parser("phase", help="scattering phase and counting function")
    common(sp)
    sp.add_argument("--resonances", help="ResonanceSet JSON path")
    sp.add_argument("--spectrum", help="SpectrumData JSON path")
    sp.add_argument("--t-grid", type=_float_list, default=[5.0, 10.0, 20.0, 40.0])
    sp.set_defaults(func=cmd_phase)

    sp = sub.add_parser("weyl-fit", help="three-term Weyl model fit")
    common(sp)
    sp.add_argument("--input", help="CSV of (T, value) samples")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--t-min", type=float, default=100.0)
    sp.add_argument("--t-max", type=float, default=1e4)
    sp.add_argument("--n-samples", type=int, default=4000)
    sp.add_argument("--noise", type=float, default=0.0)
    sp.set_defaults(func=cmd_weyl_fit)

    sp = sub.add_parser("model-surface", help="constant-curvature model backend")
    common(sp)
    sp.add_argument("--height", type=float, default=40.0)
    sp.add_argument("--b", type=float, default=1.2)
    sp.add_argument("--min-cell", type=float, default=1e-4)
    sp.set_defaults(func=cmd_model_surface)

    sp = sub.add_parser("general-count", help="Lorentzian-identity disc count")
    common(sp)
    sp.add_argument("--resonances")
    sp.add_argument("--spectrum")
    sp.add_argument("--T", type=float, default=50.0)
    sp.set_defaults(func=cmd_general_count)
    return p


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _apply_config(args) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    valid = set(vars(args))
    for key, val in cfg.items():
        dest = key.replace("-", "_")
        if dest not in valid:
            raise ConfigError(f"unknown config key {key!r}")
        setattr(args, dest, val)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except (ConfigError, ValueError, FileNotFoundError) as err:
        sys.stderr.write(f"configuration error: {err}\n")
        return 2
    except (NonConvergenceError, StabilizationError, ConjugatePointError) as err:
        diag = {"error": type(err).__name__, "message": str(err)}
        if isinstance(err, StabilizationError):
            diag["sequence"] = list(err.sequence)
        sys.stderr.write(json.dumps(diag) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
