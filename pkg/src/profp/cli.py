"""Command-line entry point: ``profp {mine,spdf,gen,stats,bench}``.

Exit codes: 0 ok, 1 unreadable/malformed database, 2 invalid configuration,
3 brute-force oracle refused the instance.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from contextlib import contextmanager

from .data import (DatabaseParseError, GenParams, UncertainDatabase, fraction_to_min_sup,
                   generate_synthetic, load_database, serialize_database)
from .miner import ALGORITHMS, MiningConfig, MiningStats, itemset_distribution, mine
from .oracle import OracleRefusal
from .spdf import support_pdf
from .tree import build_tree, tree_height, tree_stats

EXIT_PARSE, EXIT_CONFIG, EXIT_ORACLE = 1, 2, 3


class ConfigError(ValueError):
    pass


def parse_minsup(raw: str, n_transactions: int) -> int:
    """``0.1`` is a fraction of the database (ceil(f * N)); ``10`` is an absolute count."""
    try:
        if "." in raw or "e" in raw.lower():
            f = float(raw)
            if not 0.0 < f < 1.0:
                raise ConfigError(f"fractional minsup must be in (0, 1), got {raw}")
            return fraction_to_min_sup(f, n_transactions)
        n = int(raw)
    except ValueError:
        raise ConfigError(f"invalid minsup {raw!r}") from None
    if n < 1:
        raise ConfigError(f"absolute minsup must be >= 1, got {raw}")
    return n


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _load(path) -> UncertainDatabase:
    if path in (None, "-"):
        from .data import parse_database
        return parse_database(sys.stdin.read())
    return load_database(path)


def _format_prob(p: float) -> str:
    return repr(float(f"{p:.12g}"))


def cmd_mine(args) -> int:
    db = _load(args.input)
    try:
        cfg = MiningConfig(
            min_sup=parse_minsup(args.minsup, len(db)), tau=args.tau, algorithm=args.algo,
            prescan=not args.no_prescan, early_stop=not args.no_early_stop,
            threads=args.threads)
        cfg.check()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    stats = MiningStats()
    start = time.perf_counter()
    results = mine(db, cfg, stats)
    elapsed = time.perf_counter() - start
    with _output(args.output) as fh:
        for r in results:
            fh.write(r.to_tsv() + "\n")
    print(f"pfis={len(results)} min_sup={cfg.min_sup} tau={cfg.tau} algo={cfg.algorithm} "
          f"seconds={elapsed:.4f} early_stops={stats.early_stops}", file=sys.stderr)
    return 0


def cmd_spdf(args) -> int:
    db = _load(args.input)
    itemset = [x for x in args.itemset.split(",") if x]
    if not itemset:
        raise ConfigError("itemset must name at least one item")
    certain, probs = itemset_distribution(db, itemset)
    pdf = support_pdf(certain, probs)
    with _output(args.output) as fh:
        for s, c in zip(pdf.supports(), pdf.coeffs):
            fh.write(f"{s}\t{_format_prob(c)}\n")
    return 0


def cmd_gen(args) -> int:
    try:
        params = GenParams(args.transactions, args.items, args.p0, args.p1, args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    db = generate_synthetic(params)
    header = (f"synthetic: transactions={params.n_transactions} items={params.n_items} "
              f"p0={params.p0} p1={params.p1} seed={params.seed}")
    with _output(args.output) as fh:
        fh.write(serialize_database(db, header=header))
    return 0


def cmd_stats(args) -> int:
    db = _load(args.input)
    tree = build_tree(db)
    nodes, uft, ufp = tree_stats(tree)
    rows = [
        ("transactions", len(db)),
        ("items", len(db.items())),
        ("entries", db.n_entries()),
        ("uncertain_entries", db.n_uncertain_entries()),
        ("nodes", nodes),
        ("uft_entries", uft),
        ("ufp_entries", ufp),
        ("lookup_size", len(tree.lookup)),
        ("height", tree_height(tree)),
    ]
    with _output(args.output) as fh:
        for key, value in rows:
            fh.write(f"{key}\t{value}\n")
    return 0


BENCH_FIELDS = ["sweep", "value", "repeat", "transactions", "items", "p0", "p1", "min_sup",
                "tau", "algo", "build_seconds", "mine_seconds", "pfis", "nodes", "uft_entries",
                "ufp_entries", "lookup_size"]


def _floats(raw: str) -> list[float]:
    return [float(v) for v in raw.split(",") if v]


def bench_rows(db: UncertainDatabase, base: dict, sweep: str, value, minsup: str,
               tau: float, algos, repeat: int):
    """Benchmark rows for one database; nothing for an empty one."""
    if len(db) == 0:
        return
    start = time.perf_counter()
    tree = build_tree(db)
    build_seconds = time.perf_counter() - start
    nodes, uft, ufp = tree_stats(tree)
    min_sup = parse_minsup(minsup, len(db))
    for algo in algos:
        row = dict(base, sweep=sweep, value=value, repeat=repeat, min_sup=min_sup, tau=tau,
                   algo=algo, build_seconds=f"{build_seconds:.6f}", nodes=nodes,
                   uft_entries=uft, ufp_entries=ufp, lookup_size=len(tree.lookup))
        if algo == "none":
            row.update(mine_seconds="", pfis="")
        else:
            cfg = MiningConfig(min_sup=min_sup, tau=tau, algorithm=algo)
            start = time.perf_counter()
            results = mine(db, cfg)
            row.update(mine_seconds=f"{time.perf_counter() - start:.6f}", pfis=len(results))
        yield row


def cmd_bench(args) -> int:
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ("profp", "apriori", "none"):
            raise ConfigError(f"bench supports profp, apriori and none, not {a!r}")
    with _output(args.output) as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        if args.input:
            db = _load(args.input)
            base = dict(transactions=len(db), items=len(db.items()), p0="", p1="")
            for minsup in (args.values.split(",") if args.sweep == "minsup" else [args.minsup]):
                for rep in range(args.repeats):
                    for row in bench_rows(db, base, args.sweep, minsup, minsup, args.tau,
                                          algos, rep):
                        writer.writerow(row)
            return 0
        values = _floats(args.values) if args.values else [None]
        for value in values:
            n, m, p0, p1 = args.transactions, args.items, args.p0, args.p1
            minsup = args.minsup
            if args.sweep == "transactions":
                n = int(value)
            elif args.sweep == "items":
                m = int(value)
            elif args.sweep == "p1":
                # uncertain share stays fixed while certain mass replaces absent mass
                p1, p0 = value, round(1.0 - args.uncertain - value, 12)
            elif args.sweep == "p0":
                p0 = value
            elif args.sweep == "minsup":
                minsup = repr(value) if value < 1 else str(int(value))
            for rep in range(args.repeats):
                try:
                    params = GenParams(n, m, p0, p1, args.seed + rep)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
                db = generate_synthetic(params)
                base = dict(transactions=n, items=m, p0=p0, p1=p1)
                for row in bench_rows(db, base, args.sweep, value, minsup, args.tau, algos, rep):
                    writer.writerow(row)
                    fh.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profp", description="Probabilistic frequent itemset mining in uncertain databases.")
    sub = parser.add_subparsers(dest="command", required=True)

    minsup_help = ("minimum support: a value with a decimal point is a fraction of the "
                   "database size, converted with ceil(fraction * N); otherwise an absolute count")

    p = sub.add_parser("mine", help="mine all probabilistic frequent itemsets")
    p.add_argument("--input", "-i", required=True, help="database file ('-' for stdin)")
    p.add_argument("--minsup", required=True, help=minsup_help)
    p.add_argument("--tau", type=float, required=True, help="frequentness threshold in (0, 1]")
    p.add_argument("--algo", choices=ALGORITHMS, default="profp")
    p.add_argument("--no-prescan", action="store_true", help="skip the singleton prescan")
    p.add_argument("--no-early-stop", action="store_true",
                   help="always run the full frequentness computation")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", "-o", help="TSV output (default stdout)")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("spdf", help="print the support distribution of an itemset")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--itemset", required=True, help="comma-separated items, e.g. A,D")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_spdf)

    p = sub.add_parser("gen", help="generate a synthetic uncertain database")
    p.add_argument("--transactions", type=int, required=True)
    p.add_argument("--items", type=int, required=True)
    p.add_argument("--p0", type=float, default=0.5, help="probability an item is absent")
    p.add_argument("--p1", type=float, default=0.2, help="probability an item is certain")
    p.add_argument("--seed", type=int, default=0, help="seed for numpy's PCG64 generator")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="ProFP-tree size statistics")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="parameter sweep, CSV of timings and tree sizes")
    p.add_argument("--input", "-i", help="benchmark a fixed database instead of generating")
    p.add_argument("--sweep", choices=("transactions", "items", "p1", "p0", "minsup", "none"),
                   default="none")
    p.add_argument("--values", default="", help="comma-separated values of the swept parameter")
    p.add_argument("--transactions", type=int, default=1000)
    p.add_argument("--items", type=int, default=20)
    p.add_argument("--p0", type=float, default=0.5)
    p.add_argument("--p1", type=float, default=0.2)
    p.add_argument("--uncertain", type=float, default=0.3,
                   help="fixed uncertain share for --sweep p1")
    p.add_argument("--minsup", default="0.1", help=minsup_help)
    p.add_argument("--tau", type=float, default=0.9)
    p.add_argument("--algos", default="profp,apriori", help="profp, apriori and/or none")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatabaseParseError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OracleRefusal as exc:
        print(f"error: oracle refused: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
