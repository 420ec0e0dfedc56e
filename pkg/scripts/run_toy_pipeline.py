"""Run every stage on the bundled toy project and print the score table.

    python scripts/run_toy_pipeline.py --workspace /tmp/toy --samples 10 --adapter mock
    python scripts/run_toy_pipeline.py --adapter toy   # real compile and test, needs Java
"""

import argparse
import sys

from specgen import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--workspace", default="runs/toy")
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--adapter", choices=["mock", "toy"], default="mock")
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    common = ["-w", args.workspace, "--adapter", args.adapter, "--seed", str(args.seed)]
    ks = ",".join(str(k) for k in (1, 5, 10) if k <= args.samples)
    steps = [
        ["index"],
        ["tasks", "--manifest", "toy"],
        ["prompt"],
        ["generate", "--samples", str(args.samples)],
        ["validate", "--jobs", str(args.jobs)],
        ["score", "--k", ks],
    ]
    for step in steps:
        print(f"$ specgen {' '.join(step)}", flush=True)
        code = cli.main(step + common)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
