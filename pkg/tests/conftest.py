import itertools
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from profp.data import UncertainDatabase, load_database

DATA = Path(__file__).parent / "data"
RUNNING = DATA / "running.db"

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def running() -> UncertainDatabase:
    return load_database(RUNNING)


@pytest.fixture
def running_path() -> Path:
    return RUNNING


# --- strategies ------------------------------------------------------------

# a few exact values keep certain entries and ties in play
probabilities = st.one_of(
    st.just(1.0),
    st.sampled_from([0.1, 0.25, 0.5, 0.75, 0.9]),
    st.floats(min_value=0.01, max_value=0.99),
)


@st.composite
def databases(draw, max_transactions=8, max_items=6, max_uncertain=None):
    labels = [chr(ord("A") + k) for k in range(draw(st.integers(1, max_items)))]
    n = draw(st.integers(0, max_transactions))
    rows = []
    uncertain = 0
    for _ in range(n):
        present = draw(st.lists(st.sampled_from(labels), unique=True, max_size=len(labels)))
        row = []
        for x in sorted(present):
            p = draw(probabilities)
            if p < 1.0:
                if max_uncertain is not None and uncertain >= max_uncertain:
                    p = 1.0
                else:
                    uncertain += 1
            row.append((x, p))
        rows.append(row)
    return UncertainDatabase.from_rows(rows)


# --- direct database scans, bypassing every tree -----------------------------

def containment(db: UncertainDatabase, itemset) -> list[float]:
    out = []
    for t in db:
        row = t.as_dict()
        p = 1.0
        for x in itemset:
            p *= row.get(x, 0.0)
        out.append(p)
    return out


def scan(db: UncertainDatabase, itemset) -> tuple[int, list[int], list[float]]:
    """(certain support, uncertain tids, their probabilities) of an itemset."""
    probs = containment(db, itemset)
    certain = sum(1 for p in probs if p == 1.0)
    tids = [tid for tid, p in enumerate(probs, start=1) if 0.0 < p < 1.0]
    return certain, tids, [probs[t - 1] for t in tids]


def all_itemsets(items, max_size=None):
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(1, top + 1):
        yield from itertools.combinations(items, k)


# --- acceptance report -----------------------------------------------------

_criteria: dict[str, dict] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    cid, title = marker.args
    entry = _criteria.setdefault(cid, {"title": title, "ok": True, "ran": False})
    if call.when == "call":
        entry["ran"] = True
    if call.excinfo is not None:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")

    def key(cid):
        return int("".join(ch for ch in cid if ch.isdigit())), cid

    for cid in sorted(_criteria, key=key):
        entry = _criteria[cid]
        verdict = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {cid}: {entry['title']}")
