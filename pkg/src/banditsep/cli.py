"""Command-line entry point.

Subcommands: run, bounds, gen-data, verify, reduce-setsplit, adversary,
verify-poly. The BANDITSEP_OUT environment variable overrides the output
directory of ``run``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds as bounds_mod
from .core import run_bandit_session, save_dataset, verify_strong_separability
from .harness import ExperimentConfig, build_learner, run_experiment, verify_dataset
from .instances import (
    IgnorantAdversary,
    gen_packing_pairs,
    gen_sector_dataset,
    gen_wedge_dataset,
    load_weak_instance,
    reduce_set_splitting,
    save_weak_instance,
)
from .polyprops import run_suite


def _cmd_run(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    manifest = run_experiment(config)
    print(json.dumps(manifest, indent=2))
    return 0


def _fmt(bv) -> str:
    if bv is None:
        return "-"
    v = bv.value
    return f"{v:.6g}" if v is not None else f"2^{bv.log2:.4f}"


def _cmd_bounds(args) -> int:
    if args.gamma <= 0:
        print("error: gamma must be positive", file=sys.stderr)
        return 2
    rep = bounds_mod.bound_report(args.k, args.r, args.gamma, args.d)
    rows = [
        ("expected mistakes, strong, upper", rep.strong_upper),
        ("update count, strong, upper", rep.strong_updates),
        ("expected mistakes, strong, lower", rep.strong_lower),
        ("mistakes, full info, upper", rep.perceptron_upper),
        ("mistakes, full info, lower", rep.fullinfo_lower),
        ("expected mistakes, nearest-neighbor, upper", rep.nn_upper),
        ("expected mistakes, ignorant, lower", rep.ignorant_lower),
        ("expected mistakes, kernelized weak, upper", rep.kernelized_weak),
    ]
    width = max(len(r[0]) for r in rows)
    for label, bv in rows:
        extra = "" if bv is None or bv.value is not None else "  (log2 annotated)"
        print(f"{label:<{width}}  {_fmt(bv)}{extra}")
    mt = rep.transform
    gp = mt.gamma_new
    gp_s = f"{gp:.6g}" if gp is not None else f"2^{mt.log2_gamma:.4f}"
    print(f"{'transformed strong margin':<{width}}  {gp_s}")
    return 0


def _cmd_gen_data(args) -> int:
    if args.kind in ("wedge-strong", "wedge-weak"):
        stream = gen_wedge_dataset(args.kind.split("-")[1], args.t, args.seed)
        mode = args.kind.split("-")[1]
    elif args.kind == "sector":
        stream = gen_sector_dataset(args.t, gamma=0.3, seed=args.seed)
        mode = "weak"
    else:
        print(f"error: unknown kind {args.kind!r}", file=sys.stderr)
        return 2
    save_dataset(
        args.out, stream.examples, stream.K, stream.d, stream.gamma,
        stream.radius, mode, stream.witness,
    )
    print(f"wrote {len(stream)} examples to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    report = verify_dataset(args.file)
    print(json.dumps(report, indent=2))
    ok = report.get("weak", {}).get("pass", True) or report.get("strong", {}).get("pass", True)
    return 0 if ok else 1


def _cmd_reduce(args) -> int:
    with open(args.infile) as f:
        raw = json.load(f)
    inst = reduce_set_splitting(raw["S"], [list(c) for c in raw["C"]])
    save_weak_instance(args.outfile, inst)
    print(f"wrote {len(inst.samples)} samples (d={inst.d}, K={inst.K}) to {args.outfile}")
    return 0


def _cmd_adversary(args) -> int:
    U, V = gen_packing_pairs(args.gamma, args.t, args.d, seed=args.seed)
    adv = IgnorantAdversary(U, V, args.t, args.gamma)
    stream = adv.stream()
    learner = build_learner(args.learner, 2, args.d)
    trace = run_bandit_session(learner, stream, seed=args.seed)
    ok, viol = verify_strong_separability(adv.emitted, adv.witness(), args.gamma)
    out = {
        "mistakes": trace.mistakes,
        "rounds": trace.rounds,
        "switch_round": adv.state.tau,
        "witness_strong_separable": ok,
        "violation": viol,
    }
    print(json.dumps(out, indent=2))
    return 0 if ok else 1


def _cmd_verify_poly(args) -> int:
    results = run_suite(fast=args.fast)
    print(json.dumps(results, indent=2, default=float))
    return 0 if results["all_pass"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="banditsep")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("bounds", help="closed-form bound table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("gen-data", help="generate a dataset file")
    p.add_argument("--kind", required=True,
                   choices=["wedge-strong", "wedge-weak", "sector"])
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("verify", help="verify a dataset file's witness")
    p.add_argument("file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("reduce-setsplit", help="set splitting -> weak labeling file")
    p.add_argument("infile")
    p.add_argument("outfile")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("adversary", help="run the adaptive adversary vs a learner")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--learner", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_adversary)

    p = sub.add_parser("verify-poly", help="polynomial property suite")
    p.add_argument("--fast", action="store_true")
    p.set_defaults(func=_cmd_verify_poly)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
