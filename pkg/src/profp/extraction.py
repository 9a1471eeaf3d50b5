"""Certain support and uncertain tids of an item in a (conditional) ProFP-tree."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .data import Item
from .tree import ProFPTree


class ConsistencyError(RuntimeError):
    """Internal data structures disagree with each other."""


@dataclass(frozen=True)
class ExtractionResult:
    certain_support: int
    uncertain_tids: tuple[int, ...]


def extract(tree: ProFPTree, item: Item) -> ExtractionResult:
    """Walk the node-links of ``item``.

    ufp transactions count as certain support: the item itself is certain
    there, only the prefix is not. The uncertain tids are the union of uft.
    """
    certain = 0
    tids: set[int] = set()
    for n in tree.nodes_for(item):
        certain += n.count + len(n.ufp)
        tids.update(n.uft)
    return ExtractionResult(certain, tuple(sorted(tids)))


def calculate_probabilities(lookup: Mapping[tuple[int, Item], float],
                            itemset: Sequence[Item],
                            utids: Sequence[int],
                            rest_cache: dict[int, float] | None = None) -> list[float]:
    """P(itemset in t) for each t in ``utids``; items missing from ``lookup`` are certain.

    ``rest_cache`` memoizes P(itemset[1:] in t) across calls that share the
    same tail, as sibling extensions in one conditional tree do. It may come
    prefilled, e.g. with the tail's own uncertain tids.
    """
    head, rest = itemset[0], itemset[1:]
    get = lookup.get
    if rest_cache is None:
        rest_cache = {}
    for t in utids:
        if t not in rest_cache:
            p = 1.0
            for x in rest:
                p *= get((t, x), 1.0)
            rest_cache[t] = p
    out = [get((t, head), 1.0) * rest_cache[t] for t in utids]
    if out and not (min(out) > 0.0 and max(out) < 1.0):
        bad = next(t for t, p in zip(utids, out) if not 0.0 < p < 1.0)
        raise ConsistencyError(f"t{bad} listed as uncertain for {list(itemset)} but P is not in (0, 1)")
    return out


def lookup_columns(lookup: Mapping[tuple[int, Item], float]) -> dict[Item, dict[int, float]]:
    """The lookup table regrouped as item -> {tid: probability}."""
    cols: dict[Item, dict[int, float]] = {}
    for (t, x), p in lookup.items():
        cols.setdefault(x, {})[t] = p
    return cols


def column_probabilities(columns: Mapping[Item, Mapping[int, float]],
                         itemset: Sequence[Item], utids: Sequence[int],
                         rest_cache: dict[int, float]) -> list[float]:
    """``calculate_probabilities`` over the regrouped table."""
    empty: dict[int, float] = {}
    missing = [t for t in utids if t not in rest_cache]
    if missing:
        rest = [columns.get(x, empty) for x in itemset[1:]]
        for t in missing:
            p = 1.0
            for col in rest:
                p *= col.get(t, 1.0)
            rest_cache[t] = p
    get = columns.get(itemset[0], empty).get
    out = [get(t, 1.0) * rest_cache[t] for t in utids]
    if out and not (min(out) > 0.0 and max(out) < 1.0):
        bad = next(t for t, p in zip(utids, out) if not 0.0 < p < 1.0)
        raise ConsistencyError(f"t{bad} listed as uncertain for {list(itemset)} but P is not in (0, 1)")
    return out
