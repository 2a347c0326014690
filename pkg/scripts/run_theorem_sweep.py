#!/usr/bin/env python3
"""Large randomized sweep of the reduced inequality per(A)^2 >= per(A o conj(A))
over sampled 4x4 correlation matrices, followed by a proof-trace sweep that
records which proof case each sample lands in.

Example:
    python3 scripts/run_theorem_sweep.py --trials 1000000 --traces 100000 --seed 11
"""

import argparse
import json
import sys

from permcheck.runs import sweep_chollet_reduced, sweep_traces


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1_000_000, help="reduced-inequality trials")
    ap.add_argument("--traces", type=int, default=100_000, help="proof-trace trials")
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--out", help="write the combined JSON report here instead of stdout")
    args = ap.parse_args()

    reduced = sweep_chollet_reduced(4, args.trials, args.seed, args.tol)
    traces = sweep_traces(args.traces, args.seed, args.tol)
    doc = {"reduced": reduced.to_dict(), "traces": traces.to_dict()}
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(
        f"reduced: {args.trials} trials, min margin {reduced.min_margin:.3e}, "
        f"{len(reduced.violations)} confirmed violations, {reduced.wall_time:.1f}s",
        file=sys.stderr,
    )
    print(
        f"traces: {args.traces} trials, cases {traces.extra['case_counts']}, "
        f"min link margin {traces.min_margin:.3e}, {traces.wall_time:.1f}s",
        file=sys.stderr,
    )
    return 1 if reduced.violations or traces.violations else 0


if __name__ == "__main__":
    sys.exit(main())
