import pytest
from hypothesis import given

from conftest import databases
from profp.data import UncertainDatabase, UncertainTransaction, parse_database
from profp.tree import ProFPTree, build_tree, dump_tree, insert_transaction, tree_height, tree_stats

RUNNING_LOOKUP = {
    (1, "B"): 0.2, (1, "C"): 0.5, (2, "A"): 0.1, (3, "D"): 0.4, (4, "D"): 0.5,
    (5, "B"): 0.1, (6, "C"): 0.1, (6, "D"): 0.5, (8, "A"): 0.5,
}

# simulated insertion of all eight transactions
RUNNING_DUMP = """\
1 A 4 uft:{2,8} ufp:{}
2 B 3 uft:{1} ufp:{8}
3 C 2 uft:{1} ufp:{}
4 D 0 uft:{3} ufp:{}
3 D 0 uft:{4} ufp:{}
2 D 0 uft:{} ufp:{2}
1 B 0 uft:{5} ufp:{}
2 C 0 uft:{} ufp:{5}
1 C 0 uft:{6} ufp:{}
2 D 0 uft:{6} ufp:{}
"""


def entry(node):
    return node.item, node.count, list(node.uft), list(node.ufp)


def prefix_tree(db, k):
    tree = ProFPTree()
    for t in list(db)[:k]:
        insert_transaction(tree, t)
    return tree


def child(tree, *path):
    node = tree.root
    for x in path:
        node = node.children[x]
    return node


def test_after_t1(running):
    tree = prefix_tree(running, 1)
    assert entry(child(tree, "A")) == ("A", 1, [], [])
    assert entry(child(tree, "A", "B")) == ("B", 0, [1], [])
    assert entry(child(tree, "A", "B", "C")) == ("C", 0, [1], [])
    assert dump_tree(tree).count("\n") == 3


def test_after_t2(running):
    tree = prefix_tree(running, 2)
    assert entry(child(tree, "A", "D")) == ("D", 0, [], [2])
    assert entry(child(tree, "A")) == ("A", 1, [2], [])


def test_after_t3(running):
    tree = prefix_tree(running, 3)
    assert entry(child(tree, "A", "B", "C", "D")) == ("D", 0, [3], [])
    assert entry(child(tree, "A", "B")) == ("B", 1, [1], [])
    assert entry(child(tree, "A", "B", "C")) == ("C", 1, [1], [])


def test_full_dump(running):
    assert dump_tree(build_tree(running)) == RUNNING_DUMP


def test_lookup_table(running):
    assert build_tree(running).lookup == RUNNING_LOOKUP


def test_insert_t8(running):
    tree = prefix_tree(running, 7)
    a, b = child(tree, "A"), child(tree, "A", "B")
    before = entry(a), entry(b)
    insert_transaction(tree, running[8])
    assert entry(a) == ("A", before[0][1], before[0][2] + [8], before[0][3])
    assert entry(b) == ("B", before[1][1], before[1][2], before[1][3] + [8])
    assert tree.lookup[(8, "A")] == 0.5


def test_certain_transaction_into_empty_tree():
    tree = ProFPTree()
    insert_transaction(tree, UncertainTransaction(1, (("A", 1.0), ("B", 1.0), ("C", 1.0))))
    assert dump_tree(tree) == "1 A 1 uft:{} ufp:{}\n2 B 1 uft:{} ufp:{}\n3 C 1 uft:{} ufp:{}\n"
    assert tree.lookup == {}


def test_insert_rejects_duplicates(running):
    tree = prefix_tree(running, 2)
    with pytest.raises(ValueError):
        insert_transaction(tree, running[1])


def test_out_of_order_insertion_keeps_lists_sorted(running):
    tree = ProFPTree()
    for tid in (8, 2, 1, 7, 3, 6, 5, 4):
        insert_transaction(tree, running[tid])
    assert dump_tree(tree) == RUNNING_DUMP


def test_stats(running):
    tree = build_tree(running)
    assert tree_stats(tree) == (10, 9, 3)
    assert tree_height(tree) == 4


def test_stats_trivial():
    assert tree_stats(build_tree(UncertainDatabase(()))) == (0, 0, 0)
    assert tree_stats(build_tree(parse_database("A B C D"))) == (4, 0, 0)


def test_header_chains_in_insertion_order(running):
    tree = build_tree(running)
    assert [n.path() for n in tree.nodes_for("D")] == [
        ["A", "D"], ["A", "B", "C", "D"], ["A", "B", "D"], ["C", "D"]]
    assert [n.path() for n in tree.nodes_for("C")] == [["A", "B", "C"], ["B", "C"], ["C"]]


def test_shared_prefix_adds_no_nodes(running):
    tree = build_tree(running)
    nodes = tree_stats(tree)[0]
    insert_transaction(tree, UncertainTransaction(9, (("A", 1.0), ("B", 0.3))))
    assert tree_stats(tree)[0] == nodes


def test_certain_only_is_a_classic_fp_tree():
    db = parse_database("A B C\nA B\nA C\nB C\nA B C\n")
    tree = build_tree(db)
    assert tree.lookup == {}
    assert all(not n.uft and not n.ufp for _, n in tree.iter_nodes())
    assert dump_tree(tree) == (
        "1 A 4 uft:{} ufp:{}\n2 B 3 uft:{} ufp:{}\n3 C 2 uft:{} ufp:{}\n"
        "2 C 1 uft:{} ufp:{}\n1 B 1 uft:{} ufp:{}\n2 C 1 uft:{} ufp:{}\n")


@given(databases(max_transactions=10, max_items=6))
def test_node_invariants(db):
    tree = build_tree(db)
    rows = {t.tid: t.as_dict() for t in db}
    assert tree.root.count == 0 and not tree.root.uft and not tree.root.ufp
    seen = 0
    for _, node in tree.iter_nodes():
        seen += 1
        path = node.path()
        assert path == sorted(path) and len(set(path)) == len(path)
        assert not set(node.uft) & set(node.ufp)
        assert node.uft == sorted(node.uft) and node.ufp == sorted(node.ufp)
        for t in node.uft:
            assert 0.0 < rows[t][node.item] < 1.0
            assert tree.lookup[(t, node.item)] == rows[t][node.item]
        for t in node.ufp:
            assert rows[t][node.item] == 1.0
            assert any(rows[t][x] < 1.0 for x in path[:-1])
        for t in node.uft + node.ufp:
            assert all(rows[t].get(x, 0.0) > 0.0 for x in path)
    # every node is reachable from the header exactly once
    assert seen == sum(len(list(tree.nodes_for(x))) for x in tree.items())
    assert tree.lookup == {(t.tid, x): p for t in db for x, p in t.entries if p < 1.0}


@given(databases(max_transactions=10, max_items=6))
def test_size_bounds(db):
    tree = build_tree(db)
    nodes, uft, ufp = tree_stats(tree)
    assert nodes <= db.n_entries()
    assert tree_height(tree) <= max((len(t.entries) for t in db), default=0)
    # each uncertain entry lands in exactly one uft list
    assert uft == db.n_uncertain_entries()
    # each entry lands in at most one tid list
    assert uft + ufp <= db.n_entries()


@given(databases(max_transactions=10, max_items=6))
def test_counts_partition_transactions(db):
    # a path's count + |uft| + |ufp| is the number of transactions through it
    tree = build_tree(db)
    for _, node in tree.iter_nodes():
        path = node.path()
        through = sum(1 for t in db if t.items[:len(path)] == tuple(path))
        assert node.count + len(node.uft) + len(node.ufp) == through
