"""Render the built-in figures from lanfa run directories.

All numbers come straight from report.csv; this module computes nothing
mathematical beyond axis transforms. FAILED iterations appear as gaps,
EXACT iterations as floor markers at the producer's noise floor.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reader import EXACT, FAILED, PlotsError, group_rows, load_run, series

FIGURE_IDS = ("1", "2", "3", "4", "5")


def render(figure, run_paths, out):
    figure = str(figure)
    if figure not in FIGURE_IDS:
        raise PlotsError(f"unknown figure {figure!r}; known: {', '.join(FIGURE_IDS)}")
    runs = [load_run(p) for p in run_paths]
    if not runs:
        raise PlotsError("need at least one run directory")
    if figure == "4":
        fig = _render_sweep(runs)
    else:
        fig = _render_convergence(runs, with_ratio_panels=figure in ("1", "3"))
    fig.savefig(out, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return out


def _convergence_runs(runs):
    for run in runs:
        if run.kind != "convergence":
            raise PlotsError(
                f"run {run.path!r} has kind {run.kind!r}, expected 'convergence'"
            )
        run.require_columns(["spectrum", "function", "k", "err_lanczos_fa", "err_opt2", "ratio"])


def _floor_markers(ax, ks, exact_ks, floor):
    if exact_ks:
        ax.plot(exact_ks, [floor] * len(exact_ks), linestyle="none", marker="v", markersize=4, alpha=0.6)


def _render_convergence(runs, with_ratio_panels):
    _convergence_runs(runs)
    # one column per (run, function); curves per spectrum
    panels = []
    for run in runs:
        for (func,), rows in group_rows(run.rows, "function").items():
            panels.append((run, func, rows))
    ncols = len(panels)
    nrows = 2 if with_ratio_panels else 1
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols, 2.8 * nrows), squeeze=False, sharex="col"
    )
    bound_cols = [
        ("bound_rational", "--"),
        ("bound_uniform", ":"),
        ("bound_triangle", "-."),
    ]
    for col, (run, func, rows) in enumerate(panels):
        ax = axes[0][col]
        floor = run.noise_floor
        for (spec,), srows in group_rows(rows, "spectrum").items():
            ks, errs, exact_ks = series(run, srows, "err_lanczos_fa")
            ax.semilogy(ks, errs, label=f"{spec}")
            _floor_markers(ax, ks, exact_ks, floor)
            ks, opt, _ = series(run, srows, "err_opt2")
            ax.semilogy(ks, opt, linewidth=0.8, alpha=0.6, label=f"{spec} optimal")
            for bcol, style in bound_cols:
                if bcol in run.columns:
                    ks, vals, _ = series(run, srows, bcol)
                    if any(not math.isnan(v) for v in vals):
                        ax.semilogy(ks, vals, style, linewidth=0.8, label=f"{spec} {bcol[6:]} bound")
        ax.set_title(func, fontsize=9)
        ax.set_ylabel("error")
        ax.legend(fontsize=5)
        if with_ratio_panels:
            axr = axes[1][col]
            for (spec,), srows in group_rows(rows, "spectrum").items():
                ks, ratios, exact_ks = series(run, srows, "ratio")
                axr.semilogy(ks, ratios, label=spec)
                _floor_markers(axr, ks, exact_ks, 1.0)
            axr.axhline(1.0, linewidth=0.6, color="gray")
            axr.set_ylabel("ratio to optimal")
            axr.set_xlabel("iteration")
            axr.legend(fontsize=5)
        else:
            ax.set_xlabel("iteration")
    fig.suptitle(_suptitle(runs), fontsize=10)
    return fig


def _render_sweep(runs):
    for run in runs:
        if run.kind != "sweep":
            raise PlotsError(f"run {run.path!r} has kind {run.kind!r}, expected 'sweep'")
        run.require_columns(["method", "kappa", "q", "worst_ratio", "reference"])
    methods = []
    for run in runs:
        for row in run.rows:
            if row["method"] not in methods:
                methods.append(row["method"])
    fig, axes = plt.subplots(
        len(methods), 2, figsize=(8, 3.0 * len(methods)), squeeze=False
    )
    for mi, method in enumerate(methods):
        ax_q, ax_k = axes[mi]
        rows = [r for run in runs for r in run.rows if r["method"] == method]
        run0 = runs[0]
        kappas = sorted({float(r["kappa"]) for r in rows})
        qs = sorted({int(r["q"]) for r in rows})
        # ratio vs q, one series per kappa
        for kap in kappas:
            pts = sorted(
                (int(r["q"]), float(r["worst_ratio"])) for r in rows if float(r["kappa"]) == kap
            )
            ax_q.loglog([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"kappa={kap:g}")
        # reference curve at the largest kappa, straight from the CSV
        ref = sorted(
            (int(r["q"]), float(r["reference"]))
            for r in rows
            if float(r["kappa"]) == kappas[-1]
        )
        ax_q.loglog([p[0] for p in ref], [p[1] for p in ref], ":", color="black", label="reference")
        ax_q.set_xlabel("denominator degree q")
        ax_q.set_ylabel(f"worst ratio ({method})")
        ax_q.legend(fontsize=5)
        # ratio vs kappa, one series per q
        for q in qs:
            pts = sorted(
                (float(r["kappa"]), float(r["worst_ratio"])) for r in rows if int(r["q"]) == q
            )
            ax_k.loglog([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"q={q}")
        ref = sorted(
            (float(r["kappa"]), float(r["reference"])) for r in rows if int(r["q"]) == qs[-1]
        )
        ax_k.loglog([p[0] for p in ref], [p[1] for p in ref], ":", color="black", label="reference")
        ax_k.set_xlabel("condition number kappa")
        ax_k.legend(fontsize=5)
    fig.suptitle(_suptitle(runs), fontsize=10)
    return fig


def _suptitle(runs):
    parts = []
    for run in runs:
        exp = run.meta.get("experiment", "?")
        bits = run.meta.get("precision_bits", "?")
        parts.append(f"{exp} ({bits} bits)")
    return ", ".join(parts)
