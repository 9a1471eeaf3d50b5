"""Probabilistic frequent itemset mining: ProFP-Growth and the ProApriori baseline.

An itemset X is a probabilistic frequent itemset (PFI) when
P(support(X) >= min_sup) >= tau. Frequentness is antimonotone, so both
engines prune every superset of an infrequent itemset.
"""

from __future__ import annotations

import gc
import itertools
from contextlib import contextmanager
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .conditional import conditional_tree, extension_extractions, pair_extension_extractions
from .data import Item, UncertainDatabase
from .extraction import (ExtractionResult, calculate_probabilities, column_probabilities, extract,
                         lookup_columns)
from .spdf import (FrequentnessQuery, expected_support, frequentness_probability,
                   pbr_frequentness)
from .tree import ProFPTree, build_tree

ALGORITHMS = ("profp", "apriori", "bruteforce")


@dataclass(frozen=True)
class PFIResult:
    itemset: tuple[Item, ...]
    frequentness: float
    certain_support: int
    expected_support: float

    def to_tsv(self) -> str:
        return (f"{','.join(self.itemset)}\t{self.frequentness:.9f}\t"
                f"{self.certain_support}\t{self.expected_support:.9f}")


@dataclass
class MiningConfig:
    min_sup: int
    tau: float
    algorithm: str = "profp"
    prescan: bool = True
    early_stop: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.min_sup < 1:
            raise ValueError(f"min_sup must be >= 1, got {self.min_sup}")
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def check(self) -> None:
        """Mining needs tau > 0: at tau = 0 every itemset, even impossible ones, qualifies."""
        if self.tau <= 0.0:
            raise ValueError("tau must be in (0, 1] for mining")

    @property
    def query(self) -> FrequentnessQuery:
        return FrequentnessQuery(self.min_sup, self.tau)


@dataclass
class MiningStats:
    evaluated: int = 0
    early_stops: int = 0
    conditional_trees: int = 0
    candidates_per_level: list[int] = field(default_factory=list)
    # set to a list to collect (bound, full frequentness) for every early stop
    stop_log: list[tuple[float, float]] | None = None

    def merge(self, other: "MiningStats") -> None:
        self.evaluated += other.evaluated
        self.early_stops += other.early_stops
        self.conditional_trees += other.conditional_trees
        if self.stop_log is not None and other.stop_log is not None:
            self.stop_log.extend(other.stop_log)


def sort_results(results) -> list[PFIResult]:
    return sorted(results, key=lambda r: (len(r.itemset), r.itemset))


def _evaluate(certain: int, probs: Sequence[float], cfg: MiningConfig,
              stats: MiningStats) -> float | None:
    """Exact frequentness if the itemset is a PFI, else None."""
    stats.evaluated += 1
    q = cfg.query
    freq, stopped = frequentness_probability(certain, probs, q, early_stop=cfg.early_stop)
    if stopped:
        stats.early_stops += 1
        bound = freq
        # the decision is made; finish the truncated pass for the reported value
        freq, _ = frequentness_probability(certain, probs, q, early_stop=False)
        if stats.stop_log is not None:
            stats.stop_log.append((bound, freq))
    return freq if freq >= cfg.tau else None


# --- ProFP-Growth --------------------------------------------------------


def singleton_prescan(db: UncertainDatabase, cfg: MiningConfig) -> set[Item]:
    """Items whose singleton frequentness reaches tau (one database scan)."""
    certain: dict[Item, int] = {}
    probs: dict[Item, list[float]] = {}
    for t in db:
        for x, p in t.entries:
            if p == 1.0:
                certain[x] = certain.get(x, 0) + 1
            else:
                probs.setdefault(x, []).append(p)
    keep = set()
    for x in sorted(certain.keys() | probs.keys()):
        freq, _ = frequentness_probability(certain.get(x, 0), probs.get(x, []), cfg.query,
                                           early_stop=True)
        if freq >= cfg.tau:
            keep.add(x)
    return keep


def _evaluate_items(columns: dict[Item, dict[int, float]], suffix: tuple[Item, ...],
                    extractions: dict[Item, ExtractionResult], cfg: MiningConfig,
                    stats: MiningStats, suffix_probs: dict[int, float] | None = None
                    ) -> dict[Item, tuple[PFIResult, dict[int, float]]]:
    """Evaluate {item} u suffix for every extracted item.

    ``suffix_probs`` holds P(suffix in t) for the suffix's uncertain tids; any
    other tid contains the suffix for certain. Each PFI comes back with the
    same map for itself, to be reused one level down.
    """
    found = {}
    cache = {} if suffix_probs is None else suffix_probs
    for item, res in extractions.items():
        itemset = (item,) + suffix
        if res.certain_support + len(res.uncertain_tids) < cfg.min_sup:
            # cannot reach min_sup in any world
            stats.evaluated += 1
            continue
        probs = column_probabilities(columns, itemset, res.uncertain_tids, cache)
        freq = _evaluate(res.certain_support, probs, cfg, stats)
        if freq is not None:
            result = PFIResult(itemset, freq, res.certain_support,
                               expected_support(res.certain_support, probs))
            found[item] = (result, dict(zip(res.uncertain_tids, probs)))
    return found


def _grow(tree: ProFPTree, columns: dict[Item, dict[int, float]],
          frequent: dict[Item, tuple[PFIResult, dict[int, float]]], items: Sequence[Item],
          cfg: MiningConfig, stats: MiningStats, out: list[PFIResult],
          known: dict[Item, dict] | None = None) -> None:
    """``frequent`` maps each item i of ``tree`` for which {i} u suffix is a PFI
    to its result and per-tid containment probabilities. ``known`` holds the
    frequent extensions of some of them, already evaluated by the caller.

    For each of ``items`` (deepest first) the extensions are evaluated straight
    from the ancestor paths, then the extensions of those one level further.
    A conditional tree, restricted to the frequent extensions, is only
    materialized when that second level finds something to grow.
    """
    for item in items:
        found, probs = frequent[item]
        out.append(found)
        if known is not None and item in known:
            ext = known[item]
        else:
            ext = _evaluate_items(columns, found.itemset, extension_extractions(tree, item),
                                  cfg, stats, probs)
        if not ext:
            continue
        pairs = pair_extension_extractions(tree, item, ext)
        deeper = {j: _evaluate_items(columns, ext[j][0].itemset, pairs[j], cfg, stats, ext[j][1])
                  for j in ext}
        if not any(deeper.values()):
            out.extend(res for res, _ in ext.values())
            continue
        cond = conditional_tree(tree, item, keep=ext)
        stats.conditional_trees += 1
        _grow(cond, columns, ext, sorted(ext, reverse=True), cfg, stats, out, deeper)


def profp_growth(db: UncertainDatabase, cfg: MiningConfig,
                 stats: MiningStats | None = None) -> list[PFIResult]:
    cfg.check()
    stats = MiningStats() if stats is None else stats
    if cfg.prescan:
        db = db.restrict_items(singleton_prescan(db, cfg))
    tree = build_tree(db)
    columns = lookup_columns(tree.lookup)
    singles = {x: extract(tree, x) for x in tree.items()}
    frequent = _evaluate_items(columns, (), singles, cfg, stats)
    top = sorted(frequent, reverse=True)
    out: list[PFIResult] = []
    if cfg.threads == 1 or len(top) < 2:
        _grow(tree, columns, frequent, top, cfg, stats, out)
        return sort_results(out)

    # the tree is only read from here on; each top-level item is an independent job
    def job(item):
        local_out = []
        local_stats = MiningStats(stop_log=None if stats.stop_log is None else [])
        _grow(tree, columns, frequent, [item], cfg, local_stats, local_out)
        return local_out, local_stats

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        for local_out, local_stats in pool.map(job, top):
            out.extend(local_out)
            stats.merge(local_stats)
    return sort_results(out)


# --- ProApriori baseline -------------------------------------------------


def _scan(rows: list[dict[Item, float]], itemset: Sequence[Item]) -> tuple[int, list[float]]:
    certain = 0
    probs = []
    for row in rows:
        p = 1.0
        for x in itemset:
            px = row.get(x)
            if px is None:
                break
            p *= px
        else:
            if p == 1.0:
                certain += 1
            else:
                probs.append(p)
    return certain, probs


def _candidates(frequent: list[tuple[Item, ...]]) -> list[tuple[Item, ...]]:
    """Join itemsets sharing their first k-1 items, then drop any candidate
    with an infrequent k-subset."""
    known = set(frequent)
    out = []
    for a, b in itertools.combinations(frequent, 2):
        if a[:-1] != b[:-1]:
            continue
        cand = a + (b[-1],) if a[-1] < b[-1] else b + (a[-1],)
        if all(sub in known for sub in itertools.combinations(cand, len(cand) - 1)):
            out.append(cand)
    return sorted(out)


def pro_apriori(db: UncertainDatabase, cfg: MiningConfig,
                stats: MiningStats | None = None) -> list[PFIResult]:
    """Levelwise candidate generation, one database scan per candidate,
    frequentness from the Poisson binomial recurrence."""
    cfg.check()
    stats = MiningStats() if stats is None else stats
    rows = [t.as_dict() for t in db]
    q = cfg.query
    candidates = [(x,) for x in db.items()]
    out = []
    while candidates:
        stats.candidates_per_level.append(len(candidates))
        frequent = []
        for cand in candidates:
            stats.evaluated += 1
            certain, probs = _scan(rows, cand)
            freq = pbr_frequentness(certain, probs, q)
            if freq >= cfg.tau:
                frequent.append(cand)
                out.append(PFIResult(cand, freq, certain, expected_support(certain, probs)))
        candidates = _candidates(frequent)
    return sort_results(out)


@contextmanager
def gc_paused():
    """Suspend the cyclic collector. Tree nodes point at their parents, so the
    many short-lived conditional trees otherwise trigger repeated full scans."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def mine(db: UncertainDatabase, cfg: MiningConfig,
         stats: MiningStats | None = None) -> list[PFIResult]:
    with gc_paused():
        if cfg.algorithm == "profp":
            return profp_growth(db, cfg, stats)
        if cfg.algorithm == "apriori":
            return pro_apriori(db, cfg, stats)
        from .oracle import brute_force_pfi
        return brute_force_pfi(db, cfg)


def itemset_distribution(db_or_tree, itemset: Sequence[Item]):
    """(certain support, uncertain containment probabilities) of an itemset via the tree."""
    from .conditional import extract_itemset

    tree = db_or_tree if isinstance(db_or_tree, ProFPTree) else build_tree(db_or_tree)
    items = sorted(set(itemset))
    if any(x not in tree.header for x in items):
        return 0, []
    res = extract_itemset(tree, items)
    return res.certain_support, calculate_probabilities(tree.lookup, items, res.uncertain_tids)
