"""Command-line front-end: load states from JSON files or the zoo, run
detection, discord and audits, and emit machine-readable reports.

Exit codes: 0 success, 2 invalid input, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import report, zoo
from .audit import FAMILIES, separability_audit
from .bounds import CRITERIA, DetectConfig, detect
from .cmn import CmnParams
from .discord import OptimizerCfg, global_discord_cmn
from .linalg import DensityMatrix, ValidationError
from .tensor import Bipartition, iter_bipartitions

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL = 3


class InputError(Exception):
    pass


def state_to_statefile(rho: DensityMatrix) -> dict:
    matrix = [
        {"re": float(z.real), "im": float(z.imag)} for z in rho.data.reshape(-1)
    ]
    return {"dims": list(rho.dims), "matrix": matrix}


def statefile_to_state(doc) -> DensityMatrix:
    try:
        dims = tuple(int(d) for d in doc["dims"])
        entries = doc["matrix"]
        side = int(np.prod(dims))
        if len(entries) != side * side:
            raise InputError(
                f"matrix has {len(entries)} entries, expected {side * side}"
            )
        flat = np.array(
            [complex(e["re"], e["im"]) for e in entries], dtype=complex
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state file: {exc}") from exc
    try:
        return DensityMatrix(dims, flat.reshape(side, side))
    except ValidationError as exc:
        raise InputError(f"invalid density matrix: {exc}") from exc


def load_state(path: str) -> tuple:
    """Load a state from a file path, '-' (stdin) or a zoo: URI.

    Returns (state, canonical payload string used for the input digest).
    """
    if path.startswith("zoo:"):
        name = path[4:]
        try:
            rho = zoo.from_name(name)
        except KeyError as exc:
            raise InputError(str(exc)) from exc
        payload = report.dumps(state_to_statefile(rho))
        return rho, payload
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"state file is not valid JSON: {exc}") from exc
    rho = statefile_to_state(doc)
    return rho, report.dumps(state_to_statefile(rho))


def _parse_p(text):
    if text in ("inf", "infinity"):
        return math.inf
    try:
        val = float(text)
    except ValueError:
        raise InputError(f"invalid p value {text!r}")
    if val <= 0:
        raise InputError("p must be positive")
    return val


def _default_seed():
    env = os.environ.get("CMNLAB_SEED")
    return int(env) if env else 0


def _emit(args, doc, csv_rows=None):
    text = report.dumps(doc)
    if getattr(args, "csv", None):
        with open(args.csv, "w") as fh:
            fh.write("partition,criterion,value,bound,violated,saturated,preconditions_met\n")
            for row in csv_rows or []:
                fh.write(",".join(row) + "\n")
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_analyze(args):
    rho, payload = load_state(args.state)
    start = time.perf_counter()
    ps = (math.inf, 1.0) if args.p == "both" else (_parse_p(args.p),)
    cfg = DetectConfig(
        h=args.h,
        ps=ps,
        filter=not args.no_filter,
        recursive=not args.no_recursive,
        fnf_tol=args.tolerance,
    )
    verdict = detect(rho, cfg)
    doc = report.document(
        "analyze",
        report.input_digest(payload),
        {"verdict": report.verdict_to_dict(verdict)},
        timing=time.perf_counter() - start,
    )
    _emit(args, doc, report.verdict_to_csv_rows(verdict))
    return EXIT_OK


def cmd_discord(args):
    rho, payload = load_state(args.state)
    start = time.perf_counter()
    p = _parse_p(args.p)
    opt = OptimizerCfg(restarts=args.restarts, seed=args.seed)
    n = len(rho.dims)
    if args.partition:
        side_a = tuple(int(s) for s in args.partition.split(","))
        parts = [Bipartition.of(side_a, n)]
    else:
        parts = list(iter_bipartitions(n))
    results = []
    for part in parts:
        d_min = min(
            int(np.prod([rho.dims[i] for i in part.side_a])),
            int(np.prod([rho.dims[i] for i in part.side_b])),
        )
        h = args.h if args.h is not None else min(2, d_min**2)
        res = global_discord_cmn(rho, part, CmnParams(h, p), opt)
        results.append(report.discord_result_to_dict(res, part.label()))
    doc = report.document(
        "discord",
        report.input_digest(payload),
        {"h": args.h, "p": args.p, "seed": args.seed, "results": results},
        timing=time.perf_counter() - start,
    )
    _emit(args, doc)
    return EXIT_OK


def cmd_audit(args):
    if args.family not in FAMILIES:
        raise InputError(
            f"unknown family {args.family!r}; available: {', '.join(sorted(FAMILIES))}"
        )
    if args.criterion not in CRITERIA:
        raise InputError(
            f"unknown criterion {args.criterion!r}; available: {', '.join(CRITERIA)}"
        )
    start = time.perf_counter()
    rep = separability_audit(args.family, args.criterion, args.trials, args.seed)
    doc = report.document(
        "audit",
        report.input_digest(f"{args.family}:{args.criterion}:{args.trials}:{args.seed}"),
        {"audit": report.audit_report_to_dict(rep)},
        timing=time.perf_counter() - start,
    )
    _emit(args, doc)
    return EXIT_OK


def cmd_zoo(args):
    if args.action == "list":
        for name in sorted(zoo.ZOO):
            print(name)
        return EXIT_OK
    if not args.name:
        raise InputError("zoo emit requires a state name")
    try:
        rho = zoo.from_name(args.name)
    except KeyError as exc:
        raise InputError(str(exc)) from exc
    _emit(args, state_to_statefile(rho))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cmnlab",
        description="Multipartite entanglement detection and global discord "
        "via correlation minor norms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run all separability criteria on a state")
    pa.add_argument("state", help="state file path, '-' for stdin, or zoo:NAME")
    pa.add_argument("--h", type=int, default=None, help="minor order (default d^2)")
    pa.add_argument("--p", default="both", help="Schatten exponent: inf, 1, finite, or 'both'")
    pa.add_argument("--no-filter", action="store_true", help="skip SLOCC filtering")
    pa.add_argument("--no-recursive", action="store_true",
                    help="skip the recursive reduced-state sweep")
    pa.add_argument("--tolerance", type=float, default=1e-9)
    pa.add_argument("--csv", help="also write a flat CSV of bound reports")
    pa.add_argument("--output", help="write the JSON report to a file")
    pa.set_defaults(func=cmd_analyze)

    pd = sub.add_parser("discord", help="CMN-based global quantum discord")
    pd.add_argument("state")
    pd.add_argument("--h", type=int, default=None)
    pd.add_argument("--p", default="1")
    pd.add_argument("--partition", help="comma-separated party indices of side A")
    pd.add_argument("--restarts", type=int, default=32)
    pd.add_argument("--seed", type=int, default=_default_seed())
    pd.add_argument("--output")
    pd.set_defaults(func=cmd_discord)

    pu = sub.add_parser("audit", help="Monte Carlo soundness audit")
    pu.add_argument("family")
    pu.add_argument("criterion")
    pu.add_argument("--trials", type=int, default=1000)
    pu.add_argument("--seed", type=int, default=_default_seed())
    pu.add_argument("--output")
    pu.set_defaults(func=cmd_audit)

    pz = sub.add_parser("zoo", help="list or emit named states")
    pz.add_argument("action", choices=["list", "emit"])
    pz.add_argument("name", nargs="?")
    pz.add_argument("--output")
    pz.set_defaults(func=cmd_zoo)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
