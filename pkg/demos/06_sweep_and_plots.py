"""A reduced grid search written to CSV, summarised from disk and rendered as figures."""

import sys
from pathlib import Path

from qkbandwidth.harness import ExperimentConfig, PlotKind, emit_plots, run_analytic_compare, run_sweep
from qkbandwidth.harness.config import default_c_grid

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_results")
cfg = ExperimentConfig(
    sample_size=160, dims=[2, 4], kernels=["FQK", "RBF"], references=["RBF"],
    c_grid=default_c_grid(num=8), C_grid=[32.0, 1024.0], seeds=[0, 1], output_dir=str(out),
)
result = run_sweep(cfg)
print(f"{len(result.rows)} rows, failures: {result.failures}")
for r in result.optima:
    print(f"  {r['kernel']} n={r['n']} seed={r['seed']}: c*={r['c']:.3g} C*={r['C']:g} AUC {r['roc_auc_test']:.3f}")
print((out / "summary.csv").read_text())
run_analytic_compare([1, 2], [2], N=300, out=out / "analytic.csv")
for kind, csv in ((PlotKind.REGIMES_VS_C, "sweep.csv"), (PlotKind.QUANTITIES_VS_N, "optima.csv"),
                  (PlotKind.ANALYTIC_OVERLAY, "analytic.csv")):
    print("wrote", emit_plots(out / csv, kind)[0])
