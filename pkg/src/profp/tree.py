"""ProFP-tree: an FP-tree whose nodes also track which transactions reach them
with existential uncertainty.

Each node keeps a certain ``count`` plus two tid lists:

* ``uft`` (uncertain-from-this): the node's own item is uncertain in t.
* ``ufp`` (uncertain-from-prefix): the item is certain in t but some item
  higher on the path is not.

Certain probabilities are never stored; the lookup table only holds the
(tid, item) pairs with probability strictly inside (0, 1).
"""

from __future__ import annotations

from typing import Iterator

from .data import Item, UncertainDatabase, UncertainTransaction


class ProFPNode:
    __slots__ = ("item", "count", "uft", "ufp", "parent", "children", "node_link", "depth")

    def __init__(self, item: Item | None, parent: "ProFPNode | None" = None):
        self.item = item
        self.count = 0
        self.uft: list[int] = []
        self.ufp: list[int] = []
        self.parent = parent
        self.children: dict[Item, ProFPNode] = {}
        self.node_link: ProFPNode | None = None
        self.depth = 0 if parent is None else parent.depth + 1

    def is_empty(self) -> bool:
        return self.count == 0 and not self.uft and not self.ufp

    def sorted_children(self) -> list["ProFPNode"]:
        return [self.children[k] for k in sorted(self.children)]

    def path(self) -> list[Item]:
        """Items from the root down to this node (root excluded)."""
        out = []
        node = self
        while node.parent is not None:
            out.append(node.item)
            node = node.parent
        return out[::-1]

    def __repr__(self):
        return f"ProFPNode({self.item}, {self.count}, uft={self.uft}, ufp={self.ufp})"


class ProFPTree:
    """Prefix tree + item header table + uncertain-item lookup table.

    ``lookup`` maps (tid, item) -> probability and may be shared between a
    tree and all of its conditional trees.
    """

    def __init__(self, lookup: dict[tuple[int, Item], float] | None = None):
        self.root = ProFPNode(None)
        self.header: dict[Item, ProFPNode] = {}
        self._tails: dict[Item, ProFPNode] = {}
        self.lookup = {} if lookup is None else lookup
        self._inserted: set[int] = set()
        self._last_tid = 0
        # node -> path from the top down to and including it; inserts never invalidate it
        self._ancestors: dict[ProFPNode, tuple[ProFPNode, ...]] = {self.root: ()}

    def link(self, node: ProFPNode) -> None:
        """Append ``node`` to its item's node-link chain."""
        tail = self._tails.get(node.item)
        if tail is None:
            self.header[node.item] = node
        else:
            tail.node_link = node
        self._tails[node.item] = node

    def ancestors(self, node: ProFPNode) -> tuple[ProFPNode, ...]:
        """Proper ancestors of ``node`` from the top down, root excluded (cached)."""
        cache = self._ancestors
        top = node.parent
        chain = cache.get(top)
        if chain is None:
            path = []
            while top not in cache:
                path.append(top)
                top = top.parent
            chain = cache[top]
            for a in reversed(path):
                chain = cache[a] = chain + (a,)
        return chain

    def nodes_for(self, item: Item) -> Iterator[ProFPNode]:
        node = self.header.get(item)
        while node is not None:
            yield node
            node = node.node_link

    def items(self) -> list[Item]:
        return sorted(self.header)

    def iter_nodes(self) -> Iterator[tuple[int, ProFPNode]]:
        """Preorder (depth, node) pairs, root excluded, children in item order."""
        stack = [(1, child) for child in reversed(self.root.sorted_children())]
        while stack:
            depth, node = stack.pop()
            yield depth, node
            stack.extend((depth + 1, c) for c in reversed(node.sorted_children()))

    def dump(self) -> str:
        return dump_tree(self)


def insert_transaction(tree: ProFPTree, t: UncertainTransaction) -> None:
    items = t.items
    if list(items) != sorted(items):
        raise ValueError(f"t{t.tid}: items must be sorted before insertion")
    if t.tid in tree._inserted:
        raise ValueError(f"t{t.tid} was already inserted")
    tree._inserted.add(t.tid)
    out_of_order = t.tid < tree._last_tid
    tree._last_tid = max(tree._last_tid, t.tid)

    node = tree.root
    uncertain_prefix = False
    for item, p in t.entries:
        child = node.children.get(item)
        if child is None:
            child = ProFPNode(item, node)
            node.children[item] = child
            tree.link(child)
        if p == 1.0:
            if uncertain_prefix:
                child.ufp.append(t.tid)
            else:
                child.count += 1
        else:
            child.uft.append(t.tid)
            uncertain_prefix = True
            tree.lookup[(t.tid, item)] = p
        node = child
    # build_tree inserts in tid order; anything else needs re-sorting
    if out_of_order:
        node = tree.root
        for item in items:
            node = node.children[item]
            node.uft.sort()
            node.ufp.sort()


def build_tree(db: UncertainDatabase) -> ProFPTree:
    tree = ProFPTree()
    for t in db:
        insert_transaction(tree, t)
    return tree


def tree_stats(tree: ProFPTree) -> tuple[int, int, int]:
    """(node count, total uft entries, total ufp entries), root excluded."""
    nodes = uft = ufp = 0
    for _, n in tree.iter_nodes():
        nodes += 1
        uft += len(n.uft)
        ufp += len(n.ufp)
    return nodes, uft, ufp


def tree_height(tree: ProFPTree) -> int:
    return max((d for d, _ in tree.iter_nodes()), default=0)


def _tids(tids: list[int]) -> str:
    return "{" + ",".join(map(str, tids)) + "}"


def dump_tree(tree: ProFPTree) -> str:
    """One preorder line per node: ``depth item count uft:{..} ufp:{..}``."""
    return "".join(
        f"{depth} {n.item} {n.count} uft:{_tids(n.uft)} ufp:{_tids(n.ufp)}\n"
        for depth, n in tree.iter_nodes()
    )
