"""Figures rendered from the CSV artifacts of ``sweep`` and ``analytic``.

Every plot reads its CSV back from disk; nothing depends on in-memory run
state. Files are written with the non-interactive Agg backend.
"""

from __future__ import annotations

from enum import Enum
from pathlib import Path

import numpy as np

from ..errors import SchemaError
from . import analytic_compare, sweep

REGIME_TOL = 0.1


class PlotKind(str, Enum):
    REGIMES_VS_C = "RegimesVsC"
    QUANTITIES_VS_N = "QuantitiesVsN"
    ANALYTIC_OVERLAY = "AnalyticOverlay"


SWEEP_METRICS = ["roc_auc_test", "variance", "eta_max", "expressivity_sq"]
ANALYTIC_METRICS = [("variance", "variance"), ("eta_max", "eta_max"), ("expressivity_sq", "expressivity_sq")]


def _read(path) -> tuple[str, list[dict], list[str]]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path} does not exist")
    schema = ""
    with open(path, newline="") as fh:
        first = fh.readline()
    if first.startswith("#"):
        schema = first[1:].strip()
    rows = sweep.read_csv(path)
    if not rows:
        raise SchemaError(f"{path} has no data rows")
    return schema, rows, list(rows[0].keys())


def _require(columns, needed, path, known=None):
    missing = [c for c in needed if c not in columns]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}")
    if known is not None:
        unknown = [c for c in columns if not known(c)]
        if unknown:
            raise SchemaError(f"{path}: unknown columns {unknown}")


def _sweep_column(col: str) -> bool:
    return col in sweep.BASE_COLUMNS or col in sweep.TAIL_COLUMNS or col.startswith(("g_", "F_"))


def _check_schema(schema, allowed, path):
    if schema and schema not in allowed:
        raise SchemaError(f"{path}: unsupported schema {schema!r}, expected one of {sorted(allowed)}")


def _f(v):
    try:
        return float(v)
    except (TypeError, ValueError):
        return np.nan


def _nanmean(vals) -> float:
    a = np.asarray(vals, dtype=float)
    a = a[~np.isnan(a)]
    return float(a.mean()) if a.size else np.nan


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _colors(keys):
    plt = _pyplot()
    cmap = plt.get_cmap("viridis")
    keys = sorted(keys)
    return {k: cmap(i / max(len(keys) - 1, 1)) for i, k in enumerate(keys)}


def _ok_rows(rows):
    return [r for r in rows if r.get("status", "ok") == "ok"]


def emit_plots(result_csv, kind, out_dir=None) -> list[Path]:
    """Render one figure of ``kind`` from ``result_csv``; returns the written paths."""
    kind = PlotKind(kind)
    result_csv = Path(result_csv)
    out_dir = Path(out_dir) if out_dir is not None else result_csv.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    schema, rows, columns = _read(result_csv)
    if kind is PlotKind.REGIMES_VS_C:
        return [_regimes_vs_c(rows, columns, schema, result_csv, out_dir)]
    if kind is PlotKind.QUANTITIES_VS_N:
        return [_quantities_vs_n(rows, columns, schema, result_csv, out_dir)]
    return [_analytic_overlay(rows, columns, schema, result_csv, out_dir)]


def _regimes_vs_c(rows, columns, schema, path, out_dir) -> Path:
    _check_schema(schema, {sweep.SCHEMA}, path)
    _require(columns, ["kernel", "n", "seed", "c", "C"] + SWEEP_METRICS, path, _sweep_column)
    metrics = SWEEP_METRICS + [c for c in columns if c.startswith(("g_", "F_"))]
    rows = _ok_rows(rows)
    series = sorted({(r["circuit"], r["kernel"]) for r in rows})
    dims = sorted({int(r["n"]) for r in rows})
    colors = _colors(dims)
    styles = ["-", "--", ":", "-."]
    plt = _pyplot()
    fig, axes = plt.subplots(1, len(metrics), figsize=(3.2 * len(metrics), 3.0), squeeze=False)
    for ax, metric in zip(axes[0], metrics):
        for si, (circ, kern) in enumerate(series):
            for n in dims:
                sel = [r for r in rows if r["circuit"] == circ and r["kernel"] == kern and int(r["n"]) == n]
                cs = sorted({_f(r["c"]) for r in sel})
                ys = []
                for c in cs:
                    at_c = [r for r in sel if _f(r["c"]) == c]
                    # best test AUC over C per seed; other quantities are C-invariant or averaged
                    per_seed = {}
                    for r in at_c:
                        v = _f(r[metric])
                        s = r["seed"]
                        if metric == "roc_auc_test":
                            per_seed[s] = max(per_seed.get(s, -np.inf), v)
                        else:
                            per_seed.setdefault(s, []).append(v)
                    vals = [_nanmean(v) if isinstance(v, list) else v for v in per_seed.values()]
                    ys.append(_nanmean(vals))
                ys = np.asarray(ys)
                if np.all(np.isnan(ys)):
                    continue
                label = f"{circ + ' ' if circ else ''}{kern} n={n}"
                ax.plot(cs, ys, styles[si % len(styles)], color=colors[n], label=label)
        ax.set_xscale("log")
        if metric in ("variance", "expressivity_sq"):
            ax.set_yscale("symlog", linthresh=1e-8)
        ax.set_xlabel("c")
        ax.set_title(metric)
    axes[0][0].legend(fontsize=6)
    fig.tight_layout()
    out = out_dir / f"{path.stem}_regimes_vs_c.png"
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def _quantities_vs_n(rows, columns, schema, path, out_dir) -> Path:
    _check_schema(schema, {sweep.SCHEMA, sweep.OPTIMA_SCHEMA}, path)
    _require(columns, ["kernel", "n", "seed", "c", "roc_auc_test", "eta_max", "variance"], path, _sweep_column)
    optima = sweep.optimal_cells(_ok_rows(rows)) if schema == sweep.SCHEMA else _ok_rows(rows)
    metrics = ["c", "roc_auc_test", "variance", "eta_max"] + [c for c in columns if c.startswith(("g_", "F_"))]
    series = sorted({(r["circuit"], r["kernel"]) for r in optima})
    plt = _pyplot()
    fig, axes = plt.subplots(1, len(metrics), figsize=(3.2 * len(metrics), 3.0), squeeze=False)
    for ax, metric in zip(axes[0], metrics):
        for circ, kern in series:
            sel = [r for r in optima if r["circuit"] == circ and r["kernel"] == kern]
            dims = sorted({int(r["n"]) for r in sel})
            mean = [_nanmean([_f(r[metric]) for r in sel if int(r["n"]) == n]) for n in dims]
            if np.all(np.isnan(mean)):
                continue
            ax.plot(dims, mean, "o-", label=f"{circ + ' ' if circ else ''}{kern}")
        ax.set_xlabel("n")
        ax.set_title("c*" if metric == "c" else metric)
        if metric in ("c", "variance"):
            ax.set_yscale("log")
    axes[0][0].legend(fontsize=6)
    fig.tight_layout()
    out = out_dir / f"{path.stem}_quantities_vs_n.png"
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def regime_bounds(c, var_exact, var_small, plateau, tol: float = REGIME_TOL) -> tuple[float, float]:
    """Bandwidths where the small-c power law stops holding and the plateau starts.

    The small regime is the initial stretch where the power law is within
    ``tol`` relative of the exact variance; the large regime is the final
    stretch where the exact variance stays within ``tol`` of the plateau.
    """
    c = np.asarray(c, dtype=float)
    var_exact = np.asarray(var_exact, dtype=float)
    small_ok = np.abs(np.asarray(var_small) - var_exact) <= tol * var_exact
    i = 0
    while i < len(c) and small_ok[i]:
        i += 1
    lo = c[max(i - 1, 0)]
    large_ok = np.abs(var_exact - plateau) <= tol * plateau
    j = len(c)
    while j > 0 and large_ok[j - 1]:
        j -= 1
    hi = c[min(j, len(c) - 1)]
    return float(lo), float(max(hi, lo))


def _analytic_overlay(rows, columns, schema, path, out_dir) -> Path:
    _check_schema(schema, {analytic_compare.SCHEMA}, path)
    _require(columns, analytic_compare.COLUMNS, path, analytic_compare.COLUMNS.__contains__)
    keys = sorted({(int(r["n"]), int(r["L"])) for r in rows})
    colors = _colors(keys)
    plt = _pyplot()
    fig, axes = plt.subplots(1, len(ANALYTIC_METRICS), figsize=(3.6 * len(ANALYTIC_METRICS), 3.2), squeeze=False)
    first = True
    for n, L in keys:
        sel = sorted((r for r in rows if int(r["n"]) == n and int(r["L"]) == L), key=lambda r: _f(r["c"]))
        c = np.array([_f(r["c"]) for r in sel])
        if first:
            lo, hi = regime_bounds(
                c,
                [_f(r["analytic_variance"]) for r in sel],
                [_f(r["variance_limit_small_c"]) for r in sel],
                _f(sel[0]["variance_limit_large_c"]),
            )
            for ax in axes[0]:
                ax.axvspan(c[0], lo, color="tab:blue", alpha=0.12, lw=0)
                ax.axvspan(lo, hi, color="tab:orange", alpha=0.12, lw=0)
                ax.axvspan(hi, c[-1], color="tab:green", alpha=0.12, lw=0)
            first = False
        for ax, (a_col, title) in zip(axes[0], ANALYTIC_METRICS):
            ax.plot(c, [_f(r[f"analytic_{a_col}"]) for r in sel], "-", color=colors[(n, L)], label=f"n={n} L={L}")
            ax.plot(c, [_f(r[f"mc_{a_col}"]) for r in sel], "o", ms=2.5, color=colors[(n, L)])
            ax.set_title(title)
    for ax in axes[0]:
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("c")
    axes[0][0].legend(fontsize=6)
    fig.tight_layout()
    out = out_dir / f"{path.stem}_analytic_overlay.png"
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
