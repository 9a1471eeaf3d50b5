"""Exhaustive possible-worlds reference.

Enumerates every combination of "itemset contained / not contained" over the
transactions where containment is uncertain. Exact, exponential, and refuses
rather than approximates when an instance is too large.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Item, UncertainDatabase
from .spdf import SupportPDF

MAX_ITEMS = 16


class OracleRefusal(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_uncertain_entries: int = 20


def containment_probabilities(db: UncertainDatabase, itemset: Sequence[Item]) -> list[float]:
    """P(itemset subset of t) for every transaction, 0.0 where impossible."""
    out = []
    for t in db:
        probs = t.as_dict()
        p = 1.0
        for x in itemset:
            p *= probs.get(x, 0.0)
        out.append(p)
    return out


def brute_force_support_pdf(db: UncertainDatabase, itemset: Sequence[Item],
                            budget: OracleBudget = OracleBudget()) -> SupportPDF:
    probs = containment_probabilities(db, itemset)
    base = sum(1 for p in probs if p == 1.0)
    uncertain = [p for p in probs if 0.0 < p < 1.0]
    if len(uncertain) > budget.max_uncertain_entries:
        raise OracleRefusal(
            f"{len(uncertain)} uncertain transactions exceed the budget of "
            f"{budget.max_uncertain_entries}")
    coeffs = np.zeros(len(uncertain) + 1)
    for outcome in itertools.product((False, True), repeat=len(uncertain)):
        w = 1.0
        for present, p in zip(outcome, uncertain):
            w *= p if present else 1.0 - p
        coeffs[sum(outcome)] += w
    return SupportPDF(coeffs, base)


def brute_force_pfi(db: UncertainDatabase, cfg, budget: OracleBudget = OracleBudget()):
    """Every itemset over the database's items whose frequentness reaches cfg.tau."""
    from .miner import PFIResult, sort_results

    cfg.check()
    items = db.items()
    if len(items) > MAX_ITEMS:
        raise OracleRefusal(f"{len(items)} items exceed the oracle limit of {MAX_ITEMS}")
    results = []
    for k in range(1, len(items) + 1):
        for itemset in itertools.combinations(items, k):
            pdf = brute_force_support_pdf(db, itemset, budget)
            if pdf.base >= cfg.min_sup:
                freq = 1.0
            else:
                # the upper tail, summed directly
                freq = min(1.0, float(sum(c for s, c in zip(pdf.supports(), pdf.coeffs)
                                          if s >= cfg.min_sup)))
            if freq >= cfg.tau:
                results.append(PFIResult(itemset, freq, pdf.base, pdf.mean()))
    return sort_results(results)
