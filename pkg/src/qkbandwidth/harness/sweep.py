"""Bandwidth x regularisation grid search.

One job per ``(seed, n)``: split and preprocess the data, then for every
kernel and bandwidth build the train Gram and the test-train cross Gram
once, compute the single-matrix metrics, compare quantum kernels against
the classical references at the same bandwidth, and fit one SVM per
regularisation value. Jobs run on a bounded process pool
(``QKB_WORKERS``, default 1) and their rows are written in grid order, so
the CSV is identical for any worker count.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..circuits import CircuitSpec
from ..data import Dataset, load_csv, preprocess, synth_hidden_manifold, synth_uniform
from ..kernels import KernelKind, KernelSpec, data_digest, gram_pair
from ..metrics import frobenius_distance, geometric_differences, metric_report, trace_normalize
from ..svm import decision_values, roc_auc, svm_fit
from .config import ExperimentConfig, parse_kernel_name

log = logging.getLogger(__name__)

SCHEMA = "qkbandwidth-sweep v1"
OPTIMA_SCHEMA = "qkbandwidth-optima v1"
SUMMARY_SCHEMA = "qkbandwidth-summary v1"
WORKERS_ENV = "QKB_WORKERS"

BASE_COLUMNS = [
    "dataset", "circuit", "kernel", "n", "seed", "c", "C", "lambda",
    "roc_auc_test", "svm_converged", "svm_iter",
    "variance", "variance_offdiag", "mean", "eta_max", "mean_sq", "expressivity_sq",
]
TAIL_COLUMNS = ["trace_audit", "status", "error"]


def sweep_columns(references) -> list[str]:
    cols = list(BASE_COLUMNS)
    for ref in references:
        cols += [f"g_{ref}", f"F_{ref}"]
    return cols + TAIL_COLUMNS


@dataclass
class SweepResult:
    rows: list[dict]
    columns: list[str]
    optima: list[dict] = field(default_factory=list)
    failures: int = 0

    @property
    def ok(self) -> bool:
        return self.failures == 0


def load_dataset(cfg: ExperimentConfig) -> Dataset:
    src = cfg.dataset
    if src == "synthetic:hidden_manifold":
        N = cfg.sample_size or 400
        ds = synth_hidden_manifold(N, cfg.synth_d, cfg.synth_manifold_dim, seed=cfg.data_seed)
    elif src == "synthetic:uniform":
        # labels from the sign of a fixed smooth function so the SVM has a target
        N = cfg.sample_size or 400
        base = synth_uniform(N, max(cfg.dims), seed=cfg.data_seed)
        X = base.features
        y = np.where(np.sin(X).sum(axis=1) > np.median(np.sin(X).sum(axis=1)), 1.0, -1.0)
        ds = Dataset(X, y, base.name)
    else:
        ds = load_csv(src, cfg.label_column)
        if cfg.sample_size and ds.n_rows > cfg.sample_size:
            idx = np.sort(np.random.default_rng(cfg.data_seed).choice(ds.n_rows, cfg.sample_size, replace=False))
            ds = ds.subset(idx)
    if ds.labels is None:
        raise ValueError(f"dataset {src!r} has no labels; set label_column")
    name = cfg.dataset_name or Path(ds.name).stem or ds.name
    return Dataset(ds.features, ds.labels, name)


def kernel_specs(cfg: ExperimentConfig, n: int) -> list[KernelSpec]:
    """Kernels of one job in output order: quantum kinds per circuit, then classical."""
    specs = []
    for fam in cfg.circuits:
        circuit = CircuitSpec(fam, n, cfg.layers, param_seed=cfg.param_seed)
        for name in cfg.kernels:
            kind, _ = parse_kernel_name(name)
            if kind in ("FQK", "PQK"):
                specs.append(KernelSpec(kind, circuit, gamma=cfg.gamma))
    for name in cfg.kernels:
        kind, order = parse_kernel_name(name)
        if kind == "RBF":
            specs.append(KernelSpec(KernelKind.RBF))
        elif kind == "Poly":
            specs.append(KernelSpec(KernelKind.POLY, poly_order=order))
    return specs


def reference_spec(name: str) -> KernelSpec:
    kind, order = parse_kernel_name(name)
    if kind == "RBF":
        return KernelSpec(KernelKind.RBF)
    if kind == "Poly":
        return KernelSpec(KernelKind.POLY, poly_order=order)
    raise ValueError(f"reference kernel must be classical, got {name!r}")


class GramCache:
    """Train/cross Gram pairs keyed by (data hash, circuit, kernel, c, seed)."""

    def __init__(self):
        self._store = {}

    def get(self, spec: KernelSpec, X_train, X_test, seed: int):
        circuit_key = spec.circuit.key() if spec.circuit is not None else ()
        key = (data_digest(X_train), data_digest(X_test), circuit_key, spec.label, spec.gamma, spec.bandwidth, seed)
        if key not in self._store:
            self._store[key] = gram_pair(spec, X_train, X_test)
        return self._store[key]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _run_job(args) -> list[dict]:
    cfg_dict, dataset, seed, n = args
    cfg = ExperimentConfig.from_dict(cfg_dict)
    prep = preprocess(dataset, n, seed, cfg.train_fraction, cfg.standardize, cfg.fit_on)
    cache = GramCache()
    rows = []
    for spec0 in kernel_specs(cfg, n):
        for c in cfg.c_grid:
            spec = spec0.with_bandwidth(c)
            base = {
                "dataset": dataset.name,
                "circuit": spec.circuit_name,
                "kernel": spec.label,
                "n": n,
                "seed": seed,
                "c": float(c),
            }
            try:
                rows.extend(_cell(cfg, spec, prep, seed, cache, base))
            except Exception as exc:  # noqa: BLE001 - a failed cell is recorded, not fatal
                log.warning("cell %s failed: %s", base, exc)
                for C in cfg.C_grid:
                    rows.append(dict(base, C=float(C), **{"lambda": cfg.lam(C)}, status="failed", error=f"{type(exc).__name__}: {exc}"))
    return rows


def _cell(cfg, spec, prep, seed, cache, base):
    K, cross = cache.get(spec, prep.X_train, prep.X_test, seed)
    quantum = spec.kind in (KernelKind.FQK, KernelKind.PQK)
    report = metric_report(K.values, spec.circuit.n_qubits if quantum else None, spec.kind is KernelKind.FQK)
    metrics = {k: v for k, v in report.to_row().items() if k != "n_samples"}

    lams = [cfg.lam(C) for C in cfg.C_grid]
    comparisons = {}
    audit = 0.0
    if quantum:
        N = K.n
        audit = abs(np.trace(trace_normalize(K.values)) - N)
        for ref in cfg.references:
            Kc, _ = cache.get(reference_spec(ref).with_bandwidth(spec.bandwidth), prep.X_train, prep.X_test, seed)
            audit = max(audit, abs(np.trace(trace_normalize(Kc.values)) - N))
            comparisons[ref] = (
                geometric_differences(Kc.values, K.values, lams),
                frobenius_distance(Kc.values, K.values),
            )

    out = []
    for idx, C in enumerate(cfg.C_grid):
        model = svm_fit(K.values, prep.y_train, C, tol=cfg.svm_tol, max_iter=cfg.svm_max_iter)
        auc = roc_auc(decision_values(model, cross), prep.y_test)
        row = dict(base, C=float(C), roc_auc_test=auc, svm_converged=model.converged, svm_iter=model.n_iter, **metrics)
        row["lambda"] = lams[idx]
        for ref in cfg.references:
            if ref in comparisons:
                row[f"g_{ref}"] = comparisons[ref][0][idx]
                row[f"F_{ref}"] = comparisons[ref][1]
        row["trace_audit"] = audit
        row["status"] = "ok"
        row["error"] = ""
        out.append(row)
    return out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def optimal_cells(rows: list[dict]) -> list[dict]:
    """Per (dataset, circuit, kernel, n, seed): the first grid cell with the best test ROC-AUC."""
    best = {}
    order = []
    for r in rows:
        if r.get("status") != "ok":
            continue
        key = (r["dataset"], r["circuit"], r["kernel"], int(r["n"]), int(r["seed"]))
        auc = float(r["roc_auc_test"])
        if key not in best:
            order.append(key)
            best[key] = r
        elif auc > float(best[key]["roc_auc_test"]):
            best[key] = r
    return [best[k] for k in order]


def run_sweep(cfg: ExperimentConfig, write: bool = True) -> SweepResult:
    dataset = load_dataset(cfg)
    jobs = [(cfg.to_dict(), dataset, seed, n) for seed in cfg.seeds for n in cfg.dims]
    workers = min(_workers(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_job, jobs))
    else:
        chunks = [_run_job(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    columns = sweep_columns(cfg.references)
    result = SweepResult(rows, columns, optimal_cells(rows), sum(r.get("status") != "ok" for r in rows))
    if write:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        cfg.dump(out / "config.json")
        write_csv(out / "sweep.csv", rows, columns, SCHEMA)
        write_csv(out / "optima.csv", result.optima, columns, OPTIMA_SCHEMA)
        summary = summarize(read_csv(out / "optima.csv"))
        write_csv(out / "summary.csv", summary, summary_columns(cfg.references), SUMMARY_SCHEMA)
    return result


# ---------------------------------------------------------------- CSV io


def write_csv(path, rows, columns, schema) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# {schema}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))


def _num(v):
    try:
        return float(v)
    except (TypeError, ValueError):
        return math.nan


SUMMARY_FIELDS = ["c", "C", "roc_auc_test", "eta_max", "variance", "expressivity_sq"]


def summary_columns(references) -> list[str]:
    fields_ = SUMMARY_FIELDS + [f"{p}_{r}" for r in references for p in ("g", "F")]
    cols = ["dataset", "circuit", "kernel", "n", "n_seeds"]
    for f in fields_:
        cols += [f"{f}_mean", f"{f}_median"]
    return cols


def summarize(optima_rows: list[dict]) -> list[dict]:
    """Mean and median over seeds of the per-seed optimal cells, read from CSV rows."""
    groups = {}
    order = []
    for r in optima_rows:
        key = (r["dataset"], r["circuit"], r["kernel"], r["n"])
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(r)
    fields_ = [k for k in (optima_rows[0].keys() if optima_rows else []) if k in SUMMARY_FIELDS or k[:2] in ("g_", "F_")]
    out = []
    for key in order:
        rs = groups[key]
        row = {"dataset": key[0], "circuit": key[1], "kernel": key[2], "n": key[3], "n_seeds": len(rs)}
        for f in fields_:
            vals = np.array([_num(r[f]) for r in rs])
            vals = vals[np.isfinite(vals)]
            row[f"{f}_mean"] = float(np.mean(vals)) if vals.size else None
            row[f"{f}_median"] = float(np.median(vals)) if vals.size else None
        out.append(row)
    return out
