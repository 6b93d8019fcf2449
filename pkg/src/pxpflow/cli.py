"""Command-line front end: run one quench, compare models, or sweep parameters.

Exit codes: 0 on success, 1 on usage or I/O errors, 2 on numerical failure
(Krylov non-convergence or an eigensolver breakdown).

A JSON config file (--config) uses the manifest.json schema and overrides
any flags it names, so a persisted manifest re-runs verbatim.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .evolve import EvolutionConfig, KrylovConvergenceError
from .hamiltonian import ModelSpec
from .quench import (
    DELTA_GRID,
    SERIES_DELTAS,
    RunManifest,
    compare_models,
    manifest_from_dict,
    run_experiment,
    sweep,
)
from .rdm import adjacent, odd_separated


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the contract reserves 2 for
    # numerical failures, so usage errors are remapped to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_delta_range(text: str) -> tuple:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected start:stop:step")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("need step > 0 and stop >= start")
    n = int(round((stop - start) / step))
    return tuple(round(start + i * step, 10) for i in range(n + 1))


def _parse_float_list(text: str) -> tuple:
    if not text.strip():
        return ()
    return tuple(float(x) for x in text.split(","))


def _parse_int_list(text: str) -> tuple:
    if not text.strip():
        return ()
    return tuple(int(x) for x in text.split(","))


def _parse_subsystems(tokens: str, n_sites: int) -> tuple:
    subs = []
    for token in tokens.split(","):
        token = token.strip()
        if token.startswith("odd"):
            subs.append(odd_separated(n_sites, int(token[3:])))
        elif token.startswith("adj"):
            subs.append(adjacent(n_sites, int(token[3:])))
        else:
            raise ValueError(f"unknown subsystem token {token!r}; use oddL or adjL")
    return tuple(subs)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("pxp", "pxpz", "pxpxp"), default="pxp")
    p.add_argument("--n-sites", type=int, default=20)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="z-dressing strength (pxpz; default 0.05)")
    p.add_argument("--r", type=int, default=None, help="z-dressing range (pxpz; default 3)")
    p.add_argument("--g", type=float, default=None,
                   help="double-flip strength (pxpxp; default 0.25)")
    p.add_argument("--tau", type=float, default=0.01)
    p.add_argument("--t-max", type=float, default=40.0)
    p.add_argument("--snapshot-every", type=int, default=1)
    p.add_argument("--deltas", type=_parse_delta_range, default=DELTA_GRID,
                   metavar="START:STOP:STEP", help="shift grid for degree curves")
    p.add_argument("--series-deltas", type=_parse_float_list, default=SERIES_DELTAS,
                   metavar="D1,D2,...", help="shifts whose full time series are persisted")
    p.add_argument("--subsystems", default=None,
                   help="comma list of oddL / adjL tokens (default: odd 1..4 plus adj2, "
                        "dropping any that leave the chain)")
    p.add_argument("--negativity-ks", type=_parse_int_list, default=None,
                   metavar="K1,K2,...",
                   help="block sizes for pair negativity ('' disables; default all that fit)")
    p.add_argument("--no-ee", action="store_true", help="skip the half-chain entropy series")
    p.add_argument("--config", default=None,
                   help="JSON manifest; any field present overrides the flags")


def _manifest_from_args(args) -> RunManifest:
    model_kwargs = {"family": args.model, "n_sites": args.n_sites}
    if args.model == "pxpz":
        model_kwargs["lam"] = 0.05 if args.lam is None else args.lam
        model_kwargs["r"] = 3 if args.r is None else args.r
    elif args.model == "pxpxp":
        model_kwargs["g"] = 0.25 if args.g is None else args.g
    model = ModelSpec(**model_kwargs)
    subsystems = ()
    if args.subsystems is not None:
        subsystems = _parse_subsystems(args.subsystems, args.n_sites)
    manifest = RunManifest(
        model=model,
        evolution=EvolutionConfig(
            tau=args.tau, t_max=args.t_max, snapshot_every=args.snapshot_every
        ),
        subsystems=subsystems,
        negativity_ks=args.negativity_ks,
        delta_grid=args.deltas,
        series_deltas=args.series_deltas,
        track_ee=not args.no_ee,
    )
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
        merged = manifest.to_dict()
        merged.update({k: v for k, v in overrides.items() if k in merged})
        manifest = manifest_from_dict(merged)
    manifest.validate()
    return manifest


def _cmd_run(args) -> int:
    out = run_experiment(_manifest_from_args(args), args.out)
    print(out)
    return 0


def _cmd_compare(args) -> int:
    manifests = []
    for path in args.config:
        with open(path) as fh:
            manifests.append(manifest_from_dict(json.load(fh)))
    table = compare_models(manifests)
    sys.stdout.write(table.to_text())
    return 0


def _cmd_sweep(args) -> int:
    key, _, values = args.sweep.partition("=")
    key = key.strip()
    if not values:
        raise ValueError("--sweep expects KEY=V1,V2,...")
    flag = {"g": "g", "lambda": "lam", "r": "r", "n-sites": "n_sites", "tau": "tau",
            "t-max": "t_max", "model": "model"}.get(key)
    if flag is None:
        raise ValueError(f"cannot sweep over {key!r}")
    manifests, labels = [], []
    for raw in values.split(","):
        raw = raw.strip()
        value = raw if flag == "model" else (int(raw) if flag in ("r", "n_sites") else float(raw))
        setattr(args, flag, value)
        manifests.append(_manifest_from_args(args))
        labels.append(f"{key.replace('-', '_')}_{raw}")
    dirs = sweep(manifests, labels, args.out, max_workers=args.workers)
    for d in dirs:
        print(d)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pxpflow", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    p_run = commands.add_parser("run", help="run one quench and write its output directory")
    _add_run_flags(p_run)
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.set_defaults(func=_cmd_run)

    p_cmp = commands.add_parser("compare", help="run several manifests and tabulate degrees")
    p_cmp.add_argument("--config", action="append", required=True,
                       help="manifest JSON; give two or more")
    p_cmp.set_defaults(func=_cmd_compare)

    p_swp = commands.add_parser("sweep", help="run one flag over several values in parallel")
    _add_run_flags(p_swp)
    p_swp.add_argument("--sweep", required=True, metavar="KEY=V1,V2,...",
                       help="flag to vary: g, lambda, r, n-sites, tau, t-max, model")
    p_swp.add_argument("--out", required=True, help="root directory for per-value runs")
    p_swp.add_argument("--workers", type=int, default=None)
    p_swp.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (KrylovConvergenceError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
