"""Command-line entry point: ``qkbandwidth {sweep,analytic,plot,gram-export}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from ..circuits import CircuitSpec
from ..data import preprocess, save_csv
from ..errors import QKError
from ..kernels import KernelKind, KernelSpec, data_digest, gram_pair
from .analytic_compare import run_analytic_compare
from .config import ExperimentConfig, default_c_grid, parse_kernel_name
from .plots import PlotKind, emit_plots
from .sweep import load_dataset, run_sweep

log = logging.getLogger("qkbandwidth")


def _add_config_args(p):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key; VALUE is parsed as JSON when possible")
    p.add_argument("--out", help="output directory (same as --set output_dir=...)")


def _config(args) -> ExperimentConfig:
    overrides = list(args.overrides)
    if getattr(args, "out", None):
        overrides.append(f"output_dir={args.out}")
    return ExperimentConfig.load(args.config, overrides)


def cmd_sweep(args) -> int:
    cfg = _config(args)
    result = run_sweep(cfg)
    out = Path(cfg.output_dir)
    print(f"wrote {len(result.rows)} rows to {out / 'sweep.csv'}")
    for r in result.optima:
        print(f"  {r['circuit'] or '-'} {r['kernel']} n={r['n']} seed={r['seed']}: "
              f"c*={r['c']:.4g} C*={r['C']:g} auc={r['roc_auc_test']:.4f}")
    if not result.ok:
        print(f"{result.failures} rows failed; see the status column", file=sys.stderr)
        return 1
    return 0


def cmd_analytic(args) -> int:
    c_grid = default_c_grid(args.c_min, args.c_max, args.num)
    out = Path(args.out)
    rows = run_analytic_compare(args.n, args.L, args.N, args.seed, c_grid, out)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_plot(args) -> int:
    for path in emit_plots(args.csv, args.kind, args.out):
        print(f"wrote {path}")
    return 0


def cmd_gram_export(args) -> int:
    cfg = _config(args)
    ds = load_dataset(cfg)
    n = args.n if args.n is not None else cfg.dims[0]
    seed = args.seed if args.seed is not None else cfg.seeds[0]
    prep = preprocess(ds, n, seed, cfg.train_fraction, cfg.standardize, cfg.fit_on)
    kind, order = parse_kernel_name(args.kernel)
    circuit = None
    if kind in ("FQK", "PQK"):
        circuit = CircuitSpec(args.circuit or cfg.circuits[0], n, cfg.layers, param_seed=cfg.param_seed)
    spec = KernelSpec(KernelKind(kind), circuit, gamma=cfg.gamma, bandwidth=args.c, poly_order=order or 2)
    K, cross = gram_pair(spec, prep.X_train, prep.X_test)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{spec.circuit_name + '_' if spec.circuit_name else ''}{spec.label}_n{n}_seed{seed}_c{args.c:g}"
    K.to_csv(out / f"{stem}_train.csv")
    np.savetxt(out / f"{stem}_cross.csv", cross, delimiter=",", fmt="%.17g",
               header=f"qkbandwidth cross-gram v1\ntrain_hash={data_digest(prep.X_train)}\n"
                      f"test_hash={data_digest(prep.X_test)}\nshape={cross.shape[0]}x{cross.shape[1]}")
    save_csv(out / f"data_n{n}_seed{seed}_train.csv", prep.X_train, prep.y_train)
    save_csv(out / f"data_n{n}_seed{seed}_test.csv", prep.X_test, prep.y_test)
    cfg.dump(out / "config.json")
    print(f"wrote {K.n}x{K.n} Gram and {cross.shape[0]}x{cross.shape[1]} cross Gram to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qkbandwidth", description="Bandwidth-tuned quantum kernel experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="bandwidth x regularisation grid search")
    _add_config_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analytic", help="closed-form curves vs sampled Gram matrices")
    p.add_argument("--n", type=int, nargs="+", default=[1, 2, 4])
    p.add_argument("--L", type=int, nargs="+", default=[2])
    p.add_argument("--N", type=int, default=720)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c-min", type=float, default=1e-3)
    p.add_argument("--c-max", type=float, default=10**1.5)
    p.add_argument("--num", type=int, default=40)
    p.add_argument("--out", default="results/analytic.csv")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("plot", help="render figures from a CSV written by sweep or analytic")
    p.add_argument("csv")
    p.add_argument("--kind", choices=[k.value for k in PlotKind], required=True)
    p.add_argument("--out", help="directory for images (default: next to the CSV)")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("gram-export", help="write one train Gram, its cross Gram and the preprocessed folds")
    _add_config_args(p)
    p.add_argument("--kernel", default="FQK")
    p.add_argument("--circuit")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_gram_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (QKError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
