"""Generate and validate the toy tasks under each prompt scheme, then tabulate them side by side.

    python scripts/compare_prompt_schemes.py --root runs/schemes --samples 10
"""

import argparse
import sys
from pathlib import Path

from specgen import cli, prompts


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--root", default="runs/schemes")
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--adapter", choices=["mock", "toy"], default="mock")
    ap.add_argument("--schemes", default=",".join(sorted(prompts.SCHEMES)))
    args = ap.parse_args()

    schemes = args.schemes.split(",")
    ks = ",".join(str(k) for k in (1, 5, 10) if k <= args.samples)
    workspaces = []
    for scheme in schemes:
        ws = str(Path(args.root) / scheme)
        common = ["-w", ws, "--adapter", args.adapter, "--scheme", scheme]
        for step in (["index"], ["tasks", "--manifest", "toy"], ["prompt"],
                     ["generate", "--samples", str(args.samples)], ["validate"]):
            code = cli.main(step + common)
            if code != 0:
                return code
        workspaces.append(ws)
    return cli.main(["analyze", "-w", args.root, "--k", ks, "--compare", *workspaces, "--labels", ",".join(schemes)])


if __name__ == "__main__":
    sys.exit(main())
