"""Uncertain transaction databases: representation, text format, possible worlds,
and the synthetic generator used by the benchmarks.

File format: one transaction per line, whitespace-separated ``label`` or
``label:prob`` tokens. ``#`` lines are comments, blank lines are empty
transactions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

Item = str


class DatabaseParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class UncertainTransaction:
    tid: int
    entries: tuple[tuple[Item, float], ...]

    def __post_init__(self):
        if self.tid < 1:
            raise ValueError(f"tid must be positive, got {self.tid}")
        labels = [item for item, _ in self.entries]
        if labels != sorted(labels):
            raise ValueError(f"t{self.tid}: entries are not sorted by item")
        if len(set(labels)) != len(labels):
            raise ValueError(f"t{self.tid}: duplicate item")
        for item, p in self.entries:
            if not 0.0 < p <= 1.0:
                raise ValueError(f"t{self.tid}: probability of {item} outside (0, 1]: {p}")

    @property
    def items(self) -> tuple[Item, ...]:
        return tuple(item for item, _ in self.entries)

    def prob(self, item: Item) -> float:
        """P(item in t); 0.0 when the item is absent."""
        for x, p in self.entries:
            if x == item:
                return p
        return 0.0

    def as_dict(self) -> dict[Item, float]:
        return dict(self.entries)


@dataclass(frozen=True)
class UncertainDatabase:
    transactions: tuple[UncertainTransaction, ...]

    def __post_init__(self):
        for i, t in enumerate(self.transactions, start=1):
            if t.tid != i:
                raise ValueError(f"tids must be 1..N in order; position {i} has tid {t.tid}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[tuple[Item, float]]]) -> "UncertainDatabase":
        """Build from per-transaction (item, prob) rows; entries are sorted here."""
        return cls(tuple(
            UncertainTransaction(tid, tuple(sorted(row)))
            for tid, row in enumerate(rows, start=1)
        ))

    def __len__(self) -> int:
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    def __getitem__(self, tid: int) -> UncertainTransaction:
        return self.transactions[tid - 1]

    def items(self) -> list[Item]:
        return sorted({x for t in self.transactions for x, _ in t.entries})

    def n_entries(self) -> int:
        return sum(len(t.entries) for t in self.transactions)

    def n_uncertain_entries(self) -> int:
        return sum(1 for t in self.transactions for _, p in t.entries if p < 1.0)

    def restrict_items(self, keep: Iterable[Item]) -> "UncertainDatabase":
        """Same tids, with every transaction cut down to ``keep``."""
        keep = set(keep)
        return UncertainDatabase(tuple(
            UncertainTransaction(t.tid, tuple(e for e in t.entries if e[0] in keep))
            for t in self.transactions
        ))


# --- text format ---------------------------------------------------------


def _parse_token(token: str, lineno: int) -> tuple[Item, float]:
    label, sep, raw = token.partition(":")
    if not label:
        raise DatabaseParseError(lineno, f"empty item label in {token!r}")
    if not sep:
        return label, 1.0
    if ":" in raw:
        raise DatabaseParseError(lineno, f"malformed token {token!r}")
    try:
        p = float(raw)
    except ValueError:
        raise DatabaseParseError(lineno, f"malformed probability in {token!r}") from None
    if not (0.0 < p <= 1.0):
        # also rejects nan
        raise DatabaseParseError(lineno, f"probability of {label} must be in (0, 1], got {raw}")
    return label, p


def parse_database(text: str | Iterable[str]) -> UncertainDatabase:
    lines = text.splitlines() if isinstance(text, str) else [ln.rstrip("\n\r") for ln in text]
    rows = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        entries = {}
        for token in stripped.split():
            label, p = _parse_token(token, lineno)
            if label in entries:
                raise DatabaseParseError(lineno, f"duplicate item {label!r}")
            entries[label] = p
        rows.append(sorted(entries.items()))
    return UncertainDatabase.from_rows(rows)


def format_prob(p: float) -> str:
    s = f"{p:.12g}"
    if p < 1.0 and float(s) >= 1.0:
        # 12 digits would round an uncertain entry up to certain
        s = repr(p)
    return s


def serialize_database(db: UncertainDatabase, header: str | None = None) -> str:
    out = []
    if header:
        out.extend(f"# {line}" for line in header.splitlines())
    for t in db:
        out.append(" ".join(x if p == 1.0 else f"{x}:{format_prob(p)}" for x, p in t.entries))
    return "\n".join(out) + "\n" if out else ""


def load_database(path) -> UncertainDatabase:
    with open(path, encoding="utf-8") as fh:
        return parse_database(fh.read())


# --- possible worlds -----------------------------------------------------

World = Mapping[int, Iterable[Item]]


def world_probability(db: UncertainDatabase, world: World,
                      tids: Sequence[int] | None = None, exact: bool = False):
    """Probability of ``world`` (tid -> present items) under item/transaction independence.

    Only the transactions in ``tids`` are considered; by default those named
    in ``world``. A transaction in ``tids`` missing from ``world`` is empty.
    With ``exact`` the product is a Fraction over the shortest decimal form of
    each probability, free of binary rounding.
    """
    if tids is None:
        tids = sorted(world)
    one = Fraction(1) if exact else 1.0
    prob = one
    for tid in tids:
        if not 1 <= tid <= len(db):
            raise ValueError(f"world names unknown transaction t{tid}")
        t = db[tid]
        present = set(world.get(tid, ()))
        known = t.as_dict()
        extra = present - known.keys()
        if extra:
            raise ValueError(f"world puts {sorted(extra)} in t{tid}, which cannot contain them")
        for x, p in t.entries:
            if p == 1.0 and x not in present:
                raise ValueError(f"world drops certain item {x} from t{tid}")
            q = Fraction(repr(p)) if exact else p
            prob *= q if x in present else one - q
    return prob


# --- synthetic data ------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    """Each (transaction, item) cell is certain with prob ``p1``, absent with
    prob ``p0`` and otherwise present with a uniform (0, 1) probability."""

    n_transactions: int
    n_items: int
    p0: float = 0.5
    p1: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.n_transactions < 0 or self.n_items < 0:
            raise ValueError("counts must be non-negative")
        if not (0.0 <= self.p0 <= 1.0 and 0.0 <= self.p1 <= 1.0):
            raise ValueError("p0 and p1 must lie in [0, 1]")
        if self.p0 + self.p1 > 1.0 + 1e-12:
            raise ValueError(f"p0 + p1 must be <= 1, got {self.p0 + self.p1}")


def item_labels(n_items: int) -> list[Item]:
    """Zero-padded labels so that lexicographic order equals numeric order."""
    width = len(str(max(n_items - 1, 0)))
    return [f"i{k:0{width}d}" for k in range(n_items)]


def generate_synthetic(params: GenParams) -> UncertainDatabase:
    """Seeded synthetic database. Randomness comes from numpy's PCG64
    (``np.random.default_rng(seed)``), so output is reproducible across platforms."""
    rng = np.random.default_rng(params.seed)
    shape = (params.n_transactions, params.n_items)
    kind = rng.random(shape)
    probs = rng.random(shape)
    # open interval: redraw exact zeros (random() never returns 1.0)
    while True:
        zeros = probs == 0.0
        if not zeros.any():
            break
        probs[zeros] = rng.random(int(zeros.sum()))
    labels = item_labels(params.n_items)
    certain = kind < params.p1
    uncertain = kind >= params.p1 + params.p0
    rows = []
    for r in range(params.n_transactions):
        row = []
        for c in range(params.n_items):
            if certain[r, c]:
                row.append((labels[c], 1.0))
            elif uncertain[r, c]:
                row.append((labels[c], float(probs[r, c])))
        rows.append(row)
    return UncertainDatabase.from_rows(rows)


def fraction_to_min_sup(fraction: float, n_transactions: int) -> int:
    """Relative minimum support -> absolute count, ceil(fraction * N), at least 1."""
    return max(1, math.ceil(fraction * n_transactions - 1e-9))
