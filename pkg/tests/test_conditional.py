from hypothesis import given
from hypothesis import strategies as st

from conftest import databases, scan
from profp.conditional import (Accumulator, accumulate, base_extractions, build_conditional,
                               conditional_base, conditional_on, conditional_tree,
                               extension_extractions, extract_itemset, materialize,
                               pair_extension_extractions)
from profp.data import parse_database
from profp.extraction import ExtractionResult, extract
from profp.tree import ProFPNode, build_tree, dump_tree

RUNNING_GIVEN_D = """\
1 A 0 uft:{2,3,4} ufp:{}
2 B 0 uft:{3,4} ufp:{}
3 C 0 uft:{3} ufp:{}
1 C 0 uft:{6} ufp:{}
"""


def node(item, count=0, uft=(), ufp=()):
    n = ProFPNode(item)
    n.count, n.uft, n.ufp = count, list(uft), list(ufp)
    return n


def test_conditional_on_d(running):
    cond = build_conditional(build_tree(running), "D")
    assert dump_tree(cond) == RUNNING_GIVEN_D
    assert "D" not in cond.header
    assert cond.lookup is not None and cond.lookup[(3, "D")] == 0.4


def test_extract_a_given_d(running):
    cond = build_conditional(build_tree(running), "D")
    assert extract(cond, "A") == ExtractionResult(0, (2, 3, 4))


def test_lookup_is_shared(running):
    tree = build_tree(running)
    assert build_conditional(tree, "C").lookup is tree.lookup


def test_absent_item_gives_empty_tree(running):
    assert dump_tree(build_conditional(build_tree(running), "Z")) == ""


def test_accumulate_routes_ufp_to_uft():
    acc = Accumulator(node("A", 4, uft=[2, 8]))
    accumulate(acc, node("D", ufp=[2]))
    assert (acc.count, acc.uft, acc.ufp) == (0, {2}, set())


def test_accumulate_adds_counts():
    acc = Accumulator(node("A", 4))
    accumulate(acc, node("D", count=3))
    assert (acc.count, acc.uft, acc.ufp) == (3, set(), set())


def test_accumulate_certain_for_ancestor():
    acc = Accumulator(node("A", 1))
    accumulate(acc, node("D", ufp=[5]))
    assert (acc.count, acc.uft, acc.ufp) == (1, set(), set())


def test_accumulate_keeps_ufp():
    acc = Accumulator(node("B", ufp=[5, 6]))
    accumulate(acc, node("D", uft=[7], ufp=[5]))
    assert (acc.count, acc.uft, acc.ufp) == (0, {7}, {5})


def test_certain_only_matches_classic_fp_growth():
    db = parse_database("A B C\nA B\nA C\nB C\nA B C\n")
    cond = build_conditional(build_tree(db), "C")
    # classic conditional pattern base of C: {A B}:2, {A}:1, {B}:1
    assert dump_tree(cond) == "1 A 3 uft:{} ufp:{}\n2 B 2 uft:{} ufp:{}\n1 B 1 uft:{} ufp:{}\n"


def test_all_pairs_of_running(running):
    tree = build_tree(running)
    items = running.items()
    for i in items:
        cond = build_conditional(tree, i)
        for x in items:
            if x < i:
                certain, tids, _ = scan(running, [x, i])
                assert extract(cond, x) == ExtractionResult(certain, tuple(tids))


@given(databases(max_transactions=10, max_items=6))
def test_pairs_match_direct_scan(db):
    tree = build_tree(db)
    items = db.items()
    for i in items:
        cond = build_conditional(tree, i)
        assert i not in cond.header
        for _, n in cond.iter_nodes():
            assert not set(n.uft) & set(n.ufp)
            assert not n.is_empty()
        for x in items:
            if x < i:
                certain, tids, _ = scan(db, [x, i])
                assert extract(cond, x) == ExtractionResult(certain, tuple(tids))


@given(databases(max_transactions=8, max_items=5))
def test_chained_conditioning(db):
    tree = build_tree(db)
    items = db.items()
    for a in items:
        for b in items:
            for c in items:
                if a < b < c:
                    certain, tids, _ = scan(db, [a, b, c])
                    chained = extract(conditional_on(tree, [b, c]), a)
                    stepwise = extract(build_conditional(build_conditional(tree, c), b), a)
                    assert chained == stepwise == ExtractionResult(certain, tuple(tids))
                    assert extract_itemset(tree, [c, a, b]) == chained


@given(databases(max_transactions=10, max_items=6))
def test_fast_paths_match_the_accumulators(db):
    tree = build_tree(db)
    for i in tree.items():
        accs = conditional_base(tree, i)
        reference = materialize(tree, i, accs)
        assert extension_extractions(tree, i) == base_extractions(accs) == {
            x: extract(reference, x) for x in reference.items()}
        assert dump_tree(conditional_tree(tree, i)) == dump_tree(reference)


@given(databases(max_transactions=10, max_items=6), st.data())
def test_restricted_trees(db, data):
    tree = build_tree(db)
    items = tree.items()
    for i in items:
        keep = set(data.draw(st.lists(st.sampled_from(items), unique=True))) if items else set()
        cond = conditional_tree(tree, i, keep)
        reference = materialize(tree, i, conditional_base(tree, i, keep), keep)
        assert dump_tree(cond) == dump_tree(reference)
        assert set(cond.header) <= keep
        for x in cond.items():
            certain, tids, _ = scan(db, [x, i])
            assert extract(cond, x) == ExtractionResult(certain, tuple(tids))
        lookahead = pair_extension_extractions(tree, i, keep)
        for j in keep:
            expected = extension_extractions(cond, j) if j in cond.header else {}
            assert lookahead[j] == expected
            for k, res in lookahead[j].items():
                certain, tids, _ = scan(db, [k, j, i])
                assert res == ExtractionResult(certain, tuple(tids))
