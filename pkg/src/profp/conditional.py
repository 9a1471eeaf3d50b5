"""Conditional ProFP-trees.

``build_conditional(tree_X, i)`` yields tree_{X u {i}}: the ancestor paths of
every i-node, with each ancestor's fields rebuilt from the i-nodes below it.
A tid that was uncertain-from-prefix at an i-node has to be re-examined at
every ancestor, because the uncertainty may or may not come from that
ancestor's own item.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Container, Sequence

from .data import Item
from .extraction import ExtractionResult, extract
from .tree import ProFPNode, ProFPTree


class Accumulator:
    """Fields of one conditional-tree node, collected from the i-nodes below it.

    ``orig`` is the corresponding node of the source tree; its uft/ufp decide
    where an uncertain-from-prefix tid of an i-node lands.
    """

    __slots__ = ("count", "uft", "ufp", "orig", "_orig_uft", "_orig_ufp")

    def __init__(self, orig: ProFPNode):
        self.count = 0
        self.uft: set[int] = set()
        self.ufp: set[int] = set()
        self.orig = orig
        self._orig_uft = self._orig_ufp = None

    @property
    def orig_uft(self) -> frozenset[int]:
        if self._orig_uft is None:
            self._orig_uft = frozenset(self.orig.uft)
        return self._orig_uft

    @property
    def orig_ufp(self) -> frozenset[int]:
        if self._orig_ufp is None:
            self._orig_ufp = frozenset(self.orig.ufp)
        return self._orig_ufp

    def is_empty(self) -> bool:
        return self.count == 0 and not self.uft and not self.ufp

    def add(self, source: ProFPNode) -> None:
        self.count += source.count
        if source.uft:
            self.uft.update(source.uft)
        if source.ufp:
            orig_ufp, orig_uft = self.orig_ufp, self.orig_uft
            for t in source.ufp:
                if t in orig_ufp:
                    self.ufp.add(t)
                elif t in orig_uft:
                    self.uft.add(t)
                else:
                    # certain for this item and everything above it
                    self.count += 1


def accumulate(acc: Accumulator, source: ProFPNode) -> None:
    acc.add(source)


def conditional_base(tree_x: ProFPTree, item: Item,
                     keep: Container[Item] | None = None) -> dict[ProFPNode, Accumulator]:
    """Accumulators for every proper ancestor of an ``item`` node, keyed by that
    ancestor. Ancestors whose item is not in ``keep`` get none."""
    root = tree_x.root
    accs: dict[ProFPNode, Accumulator] = {}
    for n_i in tree_x.nodes_for(item):
        node = n_i.parent
        while node is not root:
            if keep is not None and node.item not in keep:
                node = node.parent
                continue
            acc = accs.get(node)
            if acc is None:
                acc = accs[node] = Accumulator(node)
            acc.add(n_i)
            node = node.parent
    return accs


def base_extractions(accs: dict[ProFPNode, Accumulator]) -> dict[Item, ExtractionResult]:
    """What ``extract`` would return for each item of the conditional tree,
    read directly off the accumulators."""
    certain: dict[Item, int] = {}
    tids: dict[Item, set[int]] = {}
    for orig, acc in accs.items():
        if acc.is_empty():
            continue
        x = orig.item
        certain[x] = certain.get(x, 0) + acc.count + len(acc.ufp)
        tids.setdefault(x, set()).update(acc.uft)
    return {x: ExtractionResult(certain[x], tuple(sorted(tids[x]))) for x in sorted(certain)}


def extension_extractions(tree_x: ProFPTree, item: Item) -> dict[Item, ExtractionResult]:
    """Same result as ``base_extractions(conditional_base(tree_x, item))`` without
    building per-node accumulators.

    For extraction, ufp and count are both certain support, so a ufp tid of an
    i-node only matters at an ancestor whose own item is uncertain in it. A tid
    sits on one root path, so per-item tid lists never overlap.
    """
    certain: dict[Item, int] = defaultdict(int)
    tids: dict[Item, list[int]] = defaultdict(list)
    uft_sets: dict[ProFPNode, frozenset[int]] = {}
    ancestors = tree_x.ancestors
    for n_i in tree_x.nodes_for(item):
        chain = ancestors(n_i)
        uft, ufp = n_i.uft, n_i.ufp
        inc = n_i.count + len(ufp)
        if not ufp:
            for a in chain:
                certain[a.item] += inc
                if uft:
                    tids[a.item].extend(uft)
            continue
        for a in chain:
            x = a.item
            if a.uft:
                own = uft_sets.get(a)
                if own is None:
                    own = uft_sets[a] = frozenset(a.uft)
                moved = [t for t in ufp if t in own]
                certain[x] += inc - len(moved)
                if uft or moved:
                    tids[x].extend(uft)
                    tids[x].extend(moved)
            else:
                certain[x] += inc
                if uft:
                    tids[x].extend(uft)
    return {
        x: ExtractionResult(certain[x], tuple(sorted(tids[x])))
        for x in sorted(certain)
        if certain[x] or x in tids
    }


def materialize(tree_x: ProFPTree, item: Item, accs: dict[ProFPNode, Accumulator],
                keep: Container[Item] | None = None) -> ProFPTree:
    """Turn accumulators into a tree. Nodes whose item is not in ``keep`` are
    spliced out; their kept descendants hang from the nearest kept ancestor and
    merge with same-item siblings."""
    cond = ProFPTree(lookup=tree_x.lookup)
    clones: dict[ProFPNode, ProFPNode] = {tree_x.root: cond.root}
    for n_i in tree_x.nodes_for(item):
        path = []
        node = n_i.parent
        while node not in clones:
            path.append(node)
            node = node.parent
        parent = clones[node]
        for orig in reversed(path):
            if keep is not None and orig.item not in keep:
                clones[orig] = parent
                continue
            acc = accs[orig]
            if acc.is_empty():
                # descendants accumulate a subset of this, so they are empty too
                break
            clone = parent.children.get(orig.item)
            if clone is None:
                clone = ProFPNode(orig.item, parent)
                parent.children[orig.item] = clone
                cond.link(clone)
                clone.count = acc.count
                clone.uft = sorted(acc.uft)
                clone.ufp = sorted(acc.ufp)
            else:
                clone.count += acc.count
                clone.uft = sorted(acc.uft.union(clone.uft))
                clone.ufp = sorted(acc.ufp.union(clone.ufp))
            clones[orig] = clone
            parent = clone
    return cond


def conditional_tree(tree_x: ProFPTree, item: Item,
                     keep: Container[Item] | None = None) -> ProFPTree:
    """``materialize(tree_x, item, conditional_base(tree_x, item, keep), keep)``
    in a single walk: every i-node's contribution is added straight into the
    clone of each kept ancestor."""
    cond = ProFPTree(lookup=tree_x.lookup)
    # chains[n]: (original, clone) pairs for the kept nodes from the root down to n
    chains: dict[ProFPNode, tuple] = {tree_x.root: ()}
    parents: dict[ProFPNode, ProFPNode] = {tree_x.root: cond.root}
    own: dict[ProFPNode, tuple[frozenset[int], frozenset[int]]] = {}
    made: list[ProFPNode] = []
    for n_i in tree_x.nodes_for(item):
        node = n_i.parent
        chain = chains.get(node)
        if chain is None:
            path = []
            while node not in chains:
                path.append(node)
                node = node.parent
            chain, parent = chains[node], parents[node]
            for orig in reversed(path):
                if keep is None or orig.item in keep:
                    clone = parent.children.get(orig.item)
                    if clone is None:
                        clone = ProFPNode(orig.item, parent)
                        clone.uft, clone.ufp = set(), set()
                        parent.children[orig.item] = clone
                        cond.link(clone)
                        made.append(clone)
                    chain = chain + ((orig, clone),)
                    parent = clone
                chains[orig] = chain
                parents[orig] = parent
        count, uft, ufp = n_i.count, n_i.uft, n_i.ufp
        for orig, clone in chain:
            clone.count += count
            if uft:
                clone.uft.update(uft)
            if ufp:
                sets = own.get(orig)
                if sets is None:
                    sets = own[orig] = (frozenset(orig.uft), frozenset(orig.ufp))
                for t in ufp:
                    if t in sets[1]:
                        clone.ufp.add(t)
                    elif t in sets[0]:
                        clone.uft.add(t)
                    else:
                        clone.count += 1
    for clone in made:
        clone.uft = sorted(clone.uft)
        clone.ufp = sorted(clone.ufp)
    return cond


def build_conditional(tree_x: ProFPTree, item: Item) -> ProFPTree:
    """tree_{X u {item}} from tree_X. ``item`` must precede every item of X."""
    return materialize(tree_x, item, conditional_base(tree_x, item))


def conditional_on(tree: ProFPTree, items: Sequence[Item]) -> ProFPTree:
    """Condition on ``items`` from the last (greatest) to the first."""
    for x in sorted(items, reverse=True):
        tree = build_conditional(tree, x)
    return tree


def extract_itemset(tree: ProFPTree, itemset: Sequence[Item]) -> ExtractionResult:
    """Certain support and uncertain tids of a whole itemset, via conditional trees."""
    items = sorted(set(itemset))
    if not items:
        raise ValueError("empty itemset")
    return extract(conditional_on(tree, items[1:]), items[0])


def pair_extension_extractions(tree_x: ProFPTree, item: Item, keep: Container[Item]
                               ) -> dict[Item, dict[Item, ExtractionResult]]:
    """``{j: extension_extractions(conditional_tree(tree_x, item, keep), j)}``
    for every j in ``keep``, without building the conditional tree.

    A tid of an i-node is uncertain for {k, j, i} u X exactly when it is in the
    i-node's uft or, coming from its ufp, in the uft of the j- or k-ancestor.
    """
    certain: dict[Item, dict[Item, int]] = defaultdict(lambda: defaultdict(int))
    tids: dict[Item, dict[Item, list[int]]] = defaultdict(lambda: defaultdict(list))
    uft_sets: dict[ProFPNode, frozenset[int]] = {}
    ancestors = tree_x.ancestors
    for n_i in tree_x.nodes_for(item):
        chain = [a for a in ancestors(n_i) if a.item in keep]
        if len(chain) < 2:
            continue
        uft, ufp = n_i.uft, n_i.ufp
        inc = n_i.count + len(ufp)
        if not ufp:
            for q in range(1, len(chain)):
                j = chain[q].item
                cj, tj = certain[j], tids[j]
                for a in chain[:q]:
                    cj[a.item] += inc
                    if uft:
                        tj[a.item].extend(uft)
            continue
        moved_at = []
        for a in chain:
            if a.uft:
                own = uft_sets.get(a)
                if own is None:
                    own = uft_sets[a] = frozenset(a.uft)
                moved_at.append({t for t in ufp if t in own})
            else:
                moved_at.append(set())
        for q in range(1, len(chain)):
            j = chain[q].item
            cj, tj = certain[j], tids[j]
            mj = moved_at[q]
            for r in range(q):
                x = chain[r].item
                moved = mj | moved_at[r] if moved_at[r] else mj
                cj[x] += inc - len(moved)
                if uft or moved:
                    tj[x].extend(uft)
                    tj[x].extend(moved)
    out = {}
    for j in sorted(keep):
        cj, tj = certain.get(j, {}), tids.get(j, {})
        out[j] = {x: ExtractionResult(cj[x], tuple(sorted(tj.get(x, ()))))
                  for x in sorted(cj) if cj[x] or x in tj}
    return out
