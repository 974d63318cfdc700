"""Figure rendering for the CLI report path.

Each helper takes tidy rows (list of dicts) and writes a PNG next to the
delimited output.  Matplotlib is used with the Agg backend only here, so
importing the library proper never touches a display.
"""

from __future__ import annotations

from typing import Sequence


def _axes(title: str, xlabel: str, ylabel: str):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: str):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    import matplotlib.pyplot as plt
    plt.close(fig)


def cusp_term_figure(rows: Sequence[dict], path: str):
    T = [r["T"] for r in rows]
    fig, ax = _axes("Renormalized cusp term vs prediction", "T (frequency)", "value")
    ax.plot(T, [r["value"] for r in rows], "o-", label="computed")
    ax.plot(T, [r["predicted"] for r in rows], "s--", label="-(T/pi) log T + C1 T/pi")
    ax2 = ax.twinx()
    ax2.plot(T, [r["residual"] for r in rows], "^:", color="tab:red", label="residual")
    ax2.set_ylabel("residual")
    ax.legend(loc="upper right")
    _save(fig, path)


def phase_figure(rows: Sequence[dict], path: str):
    T = [r["T"] for r in rows]
    fig, ax = _axes("Scattering phase and combined counting function",
                    "T (frequency)", "value")
    ax.plot(T, [r["S"] for r in rows], label="S(T)")
    ax.plot(T, [r["tilde_N"] for r in rows], label="N_pp(T) - S(T)")
    ax.legend()
    _save(fig, path)


def weyl_fit_figure(rows: Sequence[dict], fit, d: int, path: str):
    import numpy as np
    T = np.array([r["T"] for r in rows])
    y = np.array([r["value"] for r in rows])
    model = fit.a_lead * T ** (d + 1) + fit.b_log * T * np.log(T) + fit.c_lin * T
    fig, ax = _axes("Weyl-term fit", "T (frequency)", "counting value")
    ax.loglog(T, y, ".", ms=3, label="samples")
    ax.loglog(T, model, "-", label="a T^{d+1} + b T log T + c T")
    ax.legend()
    _save(fig, path)


def parametrix_figure(table, path: str):
    fig, ax = _axes("Transport coefficients", "r (geodesic radius)", "u_k(r)")
    for k in range(table.values.shape[0]):
        ax.plot(table.grid, table.values[k], label=f"u_{k}")
    ax.legend()
    _save(fig, path)


def model_surface_figure(rows: Sequence[dict], path: str):
    fig, ax = _axes("Model-surface resonances", "Re rho", "Im rho")
    ax.plot([r["re"] for r in rows], [r["im"] for r in rows], "x", ms=4)
    ax.axvline(0.25, color="tab:gray", lw=0.8, ls="--")
    _save(fig, path)
