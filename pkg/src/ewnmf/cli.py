"""Command-line entry point: ``ewnmf <subcommand> [options]``.

Subcommands
-----------
factorize       run one factorization and write W, H, T, basis and trace
unmix-demo      weight recovery on corrupted signal mixtures
sweep-gamma     clustering quality over the gamma grid
sweep-clusters  clustering quality versus the number of clusters
gen-synthetic   write the synthetic clustered benchmark to CSV
"""

import argparse
import logging
import os
import sys
from dataclasses import replace

import numpy as np

from . import data as dp
from . import experiments as ex
from .clustering import accuracy, kmeans, nmi
from .errors import EWNMFError
from .factorization import run_factorization


def _common(p):
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--input", help="matrix CSV (rows = attributes)")
    p.add_argument("--labels", help="labels file, one integer per line")
    p.add_argument("--objective", help="frobenius | weighted_frobenius | "
                   "weighted_kl | weighted_alpha | hard_weight")
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--k", type=int, help="reduced dimension")
    p.add_argument("--iters", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--output-dir")
    p.add_argument("--no-normalize", action="store_true",
                   help="skip per-column min-max scaling")


def build_parser():
    parser = argparse.ArgumentParser(prog="ewnmf", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="run one factorization")
    _common(p)

    p = sub.add_parser("unmix-demo", help="corrupted mixture weight demo")
    _common(p)
    p.add_argument("--length", type=int)
    p.add_argument("--corrupt-fraction", type=float)

    for name in ("sweep-gamma", "sweep-clusters"):
        p = sub.add_parser(name)
        _common(p)
        p.add_argument("--gamma-grid", help="comma-separated gamma values")
        if name == "sweep-clusters":
            p.add_argument("--cluster-counts", help="e.g. 2..10 or 2,4,6")

    p = sub.add_parser("gen-synthetic", help="write the synthetic benchmark")
    _common(p)
    p.add_argument("--classes", type=int)
    p.add_argument("--points-per-class", type=int)
    p.add_argument("--attributes", type=int)
    p.add_argument("--corrupt", type=float)
    return parser


_FLAG_KEYS = ("labels", "objective", "gamma", "alpha", "k", "iters", "seed",
              "repeats", "restarts", "output_dir", "length", "corrupt_fraction",
              "classes", "points_per_class", "attributes", "corrupt")


def config_from_args(args):
    cfg = ex.load_config(args.config) if args.config else ex.ExperimentConfig()
    updates = {}
    if args.input:
        updates["dataset"] = args.input
    for key in _FLAG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            updates[key] = v
    if args.no_normalize:
        updates["normalize"] = False
    if getattr(args, "gamma_grid", None):
        updates["gamma_grid"] = ex._coerce("gamma_grid", args.gamma_grid)
    if getattr(args, "cluster_counts", None):
        updates["cluster_counts"] = ex._coerce("cluster_counts", args.cluster_counts)
    if args.command == "unmix-demo" and args.gamma is not None:
        updates["demo_gamma"] = args.gamma
    return replace(cfg, **updates)


def cmd_factorize(cfg):
    if cfg.dataset == "synthetic":
        ds = ex.resolve_dataset(cfg)
    else:
        ds = dp.load_dataset(cfg.dataset, cfg.labels)
    X = dp.minmax_normalize_columns(ds.X) if cfg.normalize else ds.X
    K = cfg.k or ds.n_classes
    model = run_factorization(X, cfg.objective_spec(), K, cfg.iters, cfg.seed)
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    dp.save_matrix_csv(model.W, os.path.join(out, "W.csv"))
    dp.save_matrix_csv(model.H, os.path.join(out, "H.csv"))
    if model.T is not None:
        ex.export_weights(model.T, os.path.join(out, "T.csv"))
    ex.export_basis(model, os.path.join(out, "basis.csv"))
    ex.export_cost_trace(model, os.path.join(out, "trace.csv"))
    msg = f"final cost {model.final_cost:.6g} after {model.iteration} iterations"
    if cfg.labels is not None or cfg.dataset == "synthetic":
        labels = dp.canonicalize_labels(ds.labels)
        res = kmeans(model.H, int(np.unique(labels).size), seed=cfg.seed,
                     restarts=cfg.restarts)
        dp.save_labels(res.assignments, os.path.join(out, "assignments.txt"))
        acc, nm = accuracy(labels, res.assignments), nmi(labels, res.assignments)
        with open(os.path.join(out, "metrics.csv"), "w") as fh:
            fh.write("acc,nmi,final_cost\n")
            fh.write(f"{acc!r},{nm!r},{model.final_cost!r}\n")
        msg += f"; ACC {acc:.4f} NMI {nm:.4f}"
    print(msg)


def cmd_unmix(cfg):
    res = ex.run_unmix_demo(cfg, cfg.output_dir)
    print(f"median weight, destroyed segment: {res.corrupted_median:.4g}")
    print(f"median weight, clean samples:     {res.clean_median:.4g}")
    print(f"ratio: {res.ratio:.4g}")


def cmd_sweep(cfg, runner):
    report = runner(cfg)
    runs, agg = ex.write_report(report, cfg.output_dir)
    for row in report.aggregates():
        g = "-" if row["gamma"] is None else f"{row['gamma']:g}"
        print(f"{row['method']:6s} gamma={g:>6s} k={row['k']:<3d} "
              f"ACC={row['acc_mean']:.4f} NMI={row['nmi_mean']:.4f}")
    print(f"wrote {runs} and {agg}")


def cmd_gen(cfg):
    ds = dp.gen_clustered_synthetic(cfg.classes, cfg.points_per_class,
                                    cfg.attributes, cfg.corrupt, cfg.seed)
    os.makedirs(cfg.output_dir, exist_ok=True)
    xp = os.path.join(cfg.output_dir, "X.csv")
    lp = os.path.join(cfg.output_dir, "labels.txt")
    dp.save_matrix_csv(ds.X, xp)
    dp.save_labels(ds.labels, lp)
    print(f"wrote {xp} ({ds.X.shape[0]}x{ds.X.shape[1]}) and {lp}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        if args.command == "factorize":
            cmd_factorize(cfg)
        elif args.command == "unmix-demo":
            cmd_unmix(cfg)
        elif args.command == "sweep-gamma":
            cmd_sweep(cfg, ex.run_gamma_sweep)
        elif args.command == "sweep-clusters":
            cmd_sweep(cfg, ex.run_cluster_count_experiment)
        else:
            cmd_gen(cfg)
    except (EWNMFError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
