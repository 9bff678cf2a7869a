#!/usr/bin/env python3
"""Lower-bound demonstration: the adaptive adversary forces an ignorant
learner (nearest-neighbor at a tiny scale) to suffer order-T expected
mistakes even though the emitted sequence stays weakly separable.

Prints a JSON report including the post-hoc witness check.
"""

import argparse
import json

from banditsep.core import run_bandit_session, verify_weak_separability
from banditsep.instances import IgnorantAdversary, gen_packing_pairs
from banditsep.learners import NearestNeighborLearner


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=int, default=10_000)
    ap.add_argument("--d", type=int, default=64)
    ap.add_argument("--gamma", type=float, default=1e-5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    us, vs = gen_packing_pairs(args.gamma, args.T, args.d, args.seed)
    adversary = IgnorantAdversary(us, vs, args.T, args.gamma)
    learner = NearestNeighborLearner(2, args.d, gamma=args.gamma)
    trace = run_bandit_session(learner, adversary.stream(), seed=args.seed)

    witness = adversary.witness()
    ok, violation = verify_weak_separability(
        adversary.emitted, witness, adversary.gamma
    )
    print(json.dumps({
        "T": args.T,
        "rounds_emitted": len(adversary.emitted),
        "mistakes": trace.mistakes,
        "switched": adversary.state.tau is not None,
        "weakly_separable": ok,
        "violation": violation,
    }, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
