"""Command-line interface.

Subcommands:
  fuse       weighted fusion of a visual/thermal PGM pair
  logpolar   log-polar transform of a single PGM
  synth      deterministic synthetic paired dataset
  experiment run a recognition experiment (incremental or k-fold) and
             write the report CSV

Visual inputs must already be grayscale PGM; convert color sources
externally (recommended luma: 0.299R + 0.587G + 0.114B).
"""

from __future__ import annotations

import argparse
import sys

from . import eigenspace, mlp
from .dataset import load_manifest, synth_dataset
from .errors import PolarFuseError
from .fusion import FusionWeights, fuse
from .imagecore import load_pgm, save_pgm
from .logpolar import LogPolarParams, log_polar
from .pipeline import (
    Method,
    PipelineConfig,
    incremental_protocol,
    kfold_protocol,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarfuse",
        description="Fusion + log-polar face recognition pipelines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fuse = sub.add_parser("fuse", help="weighted fusion of two PGM images")
    p_fuse.add_argument("--visual", required=True)
    p_fuse.add_argument("--thermal", required=True)
    p_fuse.add_argument("--alpha", type=float, default=0.70)
    p_fuse.add_argument("--beta", type=float, default=0.30)
    p_fuse.add_argument("--out", required=True)

    p_lp = sub.add_parser("logpolar", help="log-polar transform of a PGM image")
    p_lp.add_argument("--input", required=True)
    p_lp.add_argument("--angular", type=int, default=360)
    p_lp.add_argument("--radial", type=int, default=128)
    p_lp.add_argument("--size", type=int, default=128)
    p_lp.add_argument("--out", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic paired dataset")
    p_synth.add_argument("--classes", type=int, required=True)
    p_synth.add_argument("--per-class", type=int, required=True)
    p_synth.add_argument("--width", type=int, required=True)
    p_synth.add_argument("--height", type=int, required=True)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True)

    p_exp = sub.add_parser("experiment", help="run a recognition experiment")
    p_exp.add_argument("--manifest", required=True)
    p_exp.add_argument(
        "--method", choices=[m.value for m in Method], default=Method.FUSE_FIRST.value
    )
    p_exp.add_argument(
        "--protocol", choices=["incremental", "kfold"], required=True
    )
    p_exp.add_argument("--steps", type=int, default=11)
    p_exp.add_argument("--k", type=int, default=3)
    pca = p_exp.add_mutually_exclusive_group()
    pca.add_argument("--pca-tau", type=float, default=None)
    pca.add_argument("--pca-k", type=int, default=None)
    p_exp.add_argument("--hidden", default="100", help="comma-separated layer sizes")
    p_exp.add_argument("--alpha", type=float, default=0.70)
    p_exp.add_argument("--beta", type=float, default=0.30)
    p_exp.add_argument("--angular", type=int, default=360)
    p_exp.add_argument("--radial", type=int, default=128)
    p_exp.add_argument("--size", type=int, default=128)
    p_exp.add_argument("--lr", type=float, default=0.02)
    p_exp.add_argument("--mc", type=float, default=0.09)
    p_exp.add_argument("--epochs", type=int, default=700_000)
    p_exp.add_argument("--goal", type=float, default=1e-6)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--report", required=True)
    return parser


def _run_fuse(args) -> None:
    v = load_pgm(args.visual)
    t = load_pgm(args.thermal)
    save_pgm(fuse(v, t, FusionWeights(args.alpha, args.beta)), args.out)


def _run_logpolar(args) -> None:
    img = load_pgm(args.input)
    params = LogPolarParams(
        angular_samples=args.angular, radial_samples=args.radial, out_size=args.size
    )
    save_pgm(log_polar(img, params), args.out)


def _run_synth(args) -> None:
    manifest = synth_dataset(
        classes=args.classes,
        per_class=args.per_class,
        dims=(args.width, args.height),
        seed=args.seed,
        out_dir=args.out,
    )
    print(f"wrote {len(manifest.records)} record(s) under {args.out}")


def _run_experiment(args) -> None:
    if args.pca_k is not None:
        policy = eigenspace.KPolicy(fixed_k=args.pca_k, variance_fraction=None)
    else:
        tau = 0.95 if args.pca_tau is None else args.pca_tau
        policy = eigenspace.KPolicy(variance_fraction=tau)
    hidden = tuple(int(h) for h in args.hidden.split(",") if h.strip())
    cfg = PipelineConfig(
        method=Method(args.method),
        weights=FusionWeights(args.alpha, args.beta),
        lp=LogPolarParams(
            angular_samples=args.angular,
            radial_samples=args.radial,
            out_size=args.size,
        ),
        pca_policy=policy,
        mlp_hidden=hidden,
        train=mlp.TrainConfig(
            epochs=args.epochs,
            lr=args.lr,
            mc=args.mc,
            grad_goal=args.goal,
            seed=args.seed,
        ),
    )
    manifest = load_manifest(args.manifest)
    if args.protocol == "incremental":
        report = incremental_protocol(manifest, cfg, steps=args.steps, seed=args.seed)
    else:
        report = kfold_protocol(manifest, cfg, k=args.k, seed=args.seed)
    report.write_csv(args.report)
    print(report.to_table())


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "fuse": _run_fuse,
        "logpolar": _run_logpolar,
        "synth": _run_synth,
        "experiment": _run_experiment,
    }
    try:
        handlers[args.command](args)
    except (PolarFuseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
