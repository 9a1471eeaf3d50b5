"""Desk-scale parameter sweeps, one CSV per sweep.

    python scripts/run_experiments.py --out results/ [--quick]

Each sweep goes through ``profp bench`` so the CSV columns match the CLI.
"""

import argparse
from pathlib import Path

from profp.cli import main

SWEEPS = {
    # scalability in the number of transactions, both engines
    "transactions": ["--sweep", "transactions", "--values", "1000,2000,4000,8000",
                     "--items", "20"],
    # tree construction only, larger databases
    "build": ["--sweep", "transactions", "--values", "10000,20000,40000,80000",
              "--items", "20", "--algos", "none", "--repeats", "3"],
    "items": ["--sweep", "items", "--values", "10,15,20,25,30", "--transactions", "1000"],
    # certain mass replaces absent mass; the uncertain share stays at 0.3
    "p1": ["--sweep", "p1", "--values", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7", "--uncertain", "0.3",
           "--transactions", "1000", "--items", "20", "--algos", "none"],
    "minsup": ["--sweep", "minsup", "--values", "0.05,0.1,0.2,0.3", "--transactions", "1000",
               "--items", "20"],
}

QUICK = {"transactions": "1000,2000", "build": "10000,20000", "items": "10,15",
         "minsup": "0.1,0.2"}


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results", type=Path)
    parser.add_argument("--seed", default="0")
    parser.add_argument("--quick", action="store_true", help="two points per sweep")
    parser.add_argument("--only", nargs="*", choices=sorted(SWEEPS))
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    for name, flags in SWEEPS.items():
        if args.only and name not in args.only:
            continue
        flags = list(flags)
        if args.quick and name in QUICK:
            flags[flags.index("--values") + 1] = QUICK[name]
        target = args.out / f"{name}.csv"
        code = main(["bench", *flags, "--seed", args.seed, "-o", str(target)])
        if code:
            return code
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
