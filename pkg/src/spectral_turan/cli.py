"""Command line: ``spectral-turan <command> [flags]``.

Exit status is 0 when every check passes, 1 when a bound is violated (the
witness is printed) and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .graph import GraphError
from .harness import ExperimentConfig, run, to_csv


def _floats(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spectral-turan", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph file (edge list or graph6)")
    common.add_argument("--format", default="edge-list", choices=["edge-list", "graph6"])
    common.add_argument("--f", help="forbidden graph, e.g. K3, K4, C5, K2,3")
    common.add_argument("--r", type=int)
    common.add_argument("--eps", type=_floats, default=[0.1], help="comma-separated")
    common.add_argument("--delta", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--out", help="CSV destination (default stdout)")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--mode", default="auto", choices=["exact", "local", "auto"])
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze", parents=[common], help="all bound checks on one graph")

    p = sub.add_parser("corpus", parents=[common], help="bound checks over a graph corpus")
    p.add_argument("--max-n", type=int, default=7, help="exhaustive corpus size when no --input")
    p.add_argument("--ell-max", type=int, default=4)

    p = sub.add_parser("k2t", parents=[common], help="K_{2,t} sizes in G(n, 1/2 + eps)")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--p", type=float)

    p = sub.add_parser("bht-search", parents=[common], help="anneal for large lambda among f-free graphs")
    p.add_argument("--m", type=int, default=12)
    p.add_argument("--iterations", type=int, default=3000)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--vertices", type=int)

    p = sub.add_parser("stability-sweep", parents=[common], help="certificates under perturbation")
    p.add_argument("--family", default="turan", choices=["turan", "biclique"])
    p.add_argument("--size", type=int, default=30)
    p.add_argument("--perturb", type=_floats, default=[0.0, 0.01, 0.02, 0.05, 0.3])

    sub.add_parser("certify", parents=[common], help="stability certificate for one graph")
    return ap


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    kw = {k.replace("-", "_"): v for k, v in vars(ns).items() if v is not None}
    fields = ExperimentConfig.__dataclass_fields__
    return ExperimentConfig(**{k: v for k, v in kw.items() if k in fields})


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = config_from_args(ns)
    if cfg.command in ("analyze", "certify") and not cfg.input:
        print(f"error: {cfg.command} needs --input", file=sys.stderr)
        return 2
    try:
        res = run(cfg)
    except (OSError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = to_csv(res.rows, cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if res.artifact and cfg.command == "certify":
        dest = Path(cfg.out).with_suffix(".cert") if cfg.out else None
        if dest:
            dest.write_text(res.artifact)
        else:
            sys.stdout.write(res.artifact)
    if res.exit_code == 1:
        viol = res.summary.get("violations")
        print(f"violation: {viol}", file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
