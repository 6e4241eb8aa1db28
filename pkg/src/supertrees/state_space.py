"""
Dynamic-programming states for the supertree solvers.

Every per-tree state ("part") is either ``None`` (the empty tree) or a pair
``(node, mask)``:

* ``mask == 0`` -- the leaf ``node``;
* otherwise -- the rooted tree obtained by joining, under a new root, the
  branches of ``node`` whose positions in ``adj[node]`` are set in ``mask``.

``adj`` holds the children of a node in a rooted tree and all its neighbours
in an unrooted one.  A branch of an unrooted node is the component reached
through that neighbour, oriented away from the node.  The encoding covers
both state families with one representation:

* cut-subtrees (compatible supertree DP) are parts with ``popcount(mask) >= 2``
  or leaves; a single selected branch is always rewritten as the branch
  itself (see :meth:`TreeIndex.descend`), so equal trees get equal parts;
* complete subtrees (rooted agreement DP) are ``(v, full(v))``;
* maximal subtrees of an unrooted tree are ``(v, full(v))`` (rooted at ``v``)
  and ``(v, full(v) minus the bit of neighbour u)`` (nontrivial branch ``u``
  removed).

An unrooted tree can also be rooted on an edge ``{u, v}``; that part is
encoded as ``(u, -1 - v)`` with ``u < v`` and has the two sides of the edge as
its children.  Rooting only at internal nodes misses agreement supertrees
whose root falls on an edge of some input tree (for example star(a,b,c),
ab|cd and star(b,c,d) agree with ab|cd, but with no internal-node rooting
of all three), so the unrooted agreement solver uses both kinds of rooting.

A state is a ``k``-tuple of parts with at least one non-empty entry.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Iterator, Optional, Tuple

from .trees import ProblemInstance, RootedTree, _nested_newick, iter_bits

Part = Optional[Tuple[int, int]]
State = Tuple[Part, ...]


class TreeIndex:
    """Adjacency, branch leaf sets and part helpers for one input tree."""

    def __init__(self, tree):
        self.tree = tree
        self.rooted = tree.rooted
        n = tree.n_nodes
        self.label = tree.label
        if self.rooted:
            self.adj = [tuple(c) for c in tree.children]
        else:
            self.adj = [() if tree.label[v] >= 0 else tuple(tree.neighbors[v]) for v in range(n)]
        self.pos = [{w: j for j, w in enumerate(self.adj[v])} for v in range(n)]
        self.full = [(1 << len(self.adj[v])) - 1 for v in range(n)]
        self.internal = [v for v in range(n) if tree.label[v] < 0]
        self.leaves = [v for v in range(n) if tree.label[v] >= 0]
        self.leafset = tree.leafset

        directed: dict[tuple[int, int], int] = {}

        def component(w, came_from):
            key = (w, came_from)
            if key in directed:
                return directed[key]
            if tree.label[w] >= 0:
                m = 1 << tree.label[w]
            else:
                m = 0
                for x in self.adj[w]:
                    if x != came_from:
                        m |= component(x, w)
            directed[key] = m
            return m

        self.branch = [tuple(component(w, v) for w in self.adj[v]) for v in range(n)]
        self._leafsets: dict = {}

    def is_leaf(self, v: int) -> bool:
        return self.label[v] >= 0

    def descend(self, v: int, j: int):
        """The branch at position ``j`` of ``v``, as a part."""
        return self.side(self.adj[v][j], v)

    def side(self, w: int, v: int):
        """The component at ``w`` oriented away from ``v``, as a part."""
        if self.label[w] >= 0:
            return (w, 0)
        back = self.pos[w].get(v)
        if back is None:
            return (w, self.full[w])
        return (w, self.full[w] & ~(1 << back))

    @staticmethod
    def edge_root(u: int, v: int):
        if u > v:
            u, v = v, u
        return (u, -1 - v)

    def canon(self, v: int, mask: int) -> Part:
        """Part for the selection ``mask`` at ``v``; empty and singleton selections collapse."""
        if mask == 0:
            return None
        if mask & (mask - 1) == 0:
            return self.descend(v, mask.bit_length() - 1)
        return (v, mask)

    def part_leafset(self, part: Part) -> int:
        if part is None:
            return 0
        m = self._leafsets.get(part)
        if m is None:
            v, mask = part
            if mask == 0:
                m = 1 << self.label[v]
            elif mask < 0:
                m = self.leafset
            else:
                m = 0
                branches = self.branch[v]
                for j in iter_bits(mask):
                    m |= branches[j]
            self._leafsets[part] = m
        return m

    def children(self, part: Part) -> list:
        """Subtrees attached to the root of ``part``."""
        if part is None or part[1] == 0:
            raise ValueError("empty trees and leaves have no attached subtrees")
        v, mask = part
        if mask < 0:
            u = -1 - mask
            return [self.side(v, u), self.side(u, v)]
        return [self.descend(v, j) for j in iter_bits(mask)]

    def top_parts(self) -> list:
        """Whole-tree parts: the root (rooted) or every internal rooting (unrooted)."""
        if self.rooted:
            r = self.tree.root
            return [(r, 0) if self.label[r] >= 0 else (r, self.full[r])]
        return [(v, self.full[v]) for v in self.internal]

    def rootings(self) -> list:
        """Unrooted tree rooted at every internal node, then on every edge."""
        out = [(v, self.full[v]) for v in self.internal]
        for v in self.internal:
            for w in self.tree.neighbors[v]:
                if self.label[w] >= 0 or w > v:
                    out.append(self.edge_root(v, w))
        return out

    def materialize(self, part: Part):
        """Nested form of a part."""
        if part is None:
            return None
        if part[1] == 0:
            return self.label[part[0]]
        kids = [self.materialize(c) for c in self.children(part)]
        return kids[0] if len(kids) == 1 else tuple(kids)


class StateSpace:
    """All state-level operations for one problem instance."""

    def __init__(self, instance: ProblemInstance):
        self.instance = instance
        self.trees = [TreeIndex(t) for t in instance.trees]
        self.k = len(self.trees)
        self.tree_leafsets = [t.leafset for t in self.trees]
        self._splits: dict = {}

    # -- basic queries --------------------------------------------------- #

    def part_leafsets(self, state: State) -> list[int]:
        return [t.part_leafset(p) for t, p in zip(self.trees, state)]

    def state_leafset(self, state: State) -> int:
        m = 0
        for t, p in zip(self.trees, state):
            m |= t.part_leafset(p)
        return m

    def total_leaves(self, state: State) -> int:
        return sum(t.part_leafset(p).bit_count() for t, p in zip(self.trees, state))

    @staticmethod
    def is_terminal(state: State) -> bool:
        return all(p is None or p[1] == 0 for p in state)

    def lambda_labels(self, state: State) -> int:
        """Labels of a terminal state not excluded by any tree."""
        if not self.is_terminal(state):
            raise ValueError("lambda is only defined on terminal states")
        union = 0
        excluded = 0
        for t, p, full in zip(self.trees, state, self.tree_leafsets):
            own = t.part_leafset(p)
            union |= own
            excluded |= full & ~own
        return union & ~excluded

    # -- compatible supertree transitions --------------------------------- #

    def _split_options(self, i: int, part: Part, first: bool) -> list:
        key = (i, part, first)
        opts = self._splits.get(key)
        if opts is not None:
            return opts
        if part is None:
            opts = [(None, None)]
        elif part[1] == 0:
            opts = [(part, None)] if first else [(part, None), (None, part)]
        else:
            t = self.trees[i]
            v, mask = part
            low = mask & -mask
            opts = []
            sub = mask
            while True:
                if not first or sub & low:
                    opts.append((t.canon(v, sub), t.canon(v, mask ^ sub)))
                if sub == 0:
                    break
                sub = (sub - 1) & mask
        self._splits[key] = opts
        return opts

    def bipartites(self, state: State) -> Iterator[tuple]:
        """
        Unordered pairs ``(left, right)`` of states bipartitioning ``state``.

        Each tree's root-level subtrees are split between the two sides; a
        leaf goes wholly to one side.  Pairs are produced once: the first
        non-empty tree's lowest branch (or its leaf) always goes left.
        """
        if self.is_terminal(state):
            raise ValueError("terminal states have no bipartites")
        first = next(i for i, p in enumerate(state) if p is not None)
        options = [self._split_options(i, p, i == first) for i, p in enumerate(state)]
        for combo in product(*options):
            right = tuple(c[1] for c in combo)
            if all(p is None for p in right):
                continue
            yield tuple(c[0] for c in combo), right

    # -- agreement supertree transitions ---------------------------------- #

    def children_of(self, i: int, part: Part) -> list:
        return self.trees[i].children(part)

    def decompositions(self, state: State, d: int) -> Iterator[tuple]:
        """
        Every ``d``-slot decomposition of ``state``, up to slot order.

        Per tree, either the whole part sits in exactly one slot, or at least
        two pairwise distinct root subtrees are placed injectively into slots.
        Every slot must be a non-empty state.  Exponential; the solver uses a
        resource-subset recurrence instead and this is the reference listing.
        """
        if self.is_terminal(state):
            raise ValueError("terminal states have no decompositions")
        if d < 2:
            return
        per_tree = [self.tree_sequences(i, p, d) for i, p in enumerate(state)]
        seen = set()
        for combo in product(*per_tree):
            slots = tuple(tuple(seq[j] for seq in combo) for j in range(d))
            if any(all(p is None for p in slot) for slot in slots):
                continue
            key = tuple(sorted(slots, key=_slot_key))
            if key in seen:
                continue
            seen.add(key)
            yield key

    def tree_sequences(self, i: int, part: Part, d: int) -> list:
        """Per-tree slot sequences of length ``d`` for a decomposition."""
        if part is None:
            return [(None,) * d]
        seqs = []
        for j in range(d):
            seq = [None] * d
            seq[j] = part
            seqs.append(tuple(seq))
        if part[1] != 0:
            kids = self.children_of(i, part)
            for r in range(2, min(len(kids), d) + 1):
                for chosen in combinations(kids, r):
                    for where in permutations(range(d), r):
                        seq = [None] * d
                        for kid, j in zip(chosen, where):
                            seq[j] = kid
                        seqs.append(tuple(seq))
        return seqs

    # -- enumerators ------------------------------------------------------ #

    def cut_subtrees(self, i: int) -> list:
        t = self.trees[i]
        out = [(v, 0) for v in t.leaves]
        for v in t.internal:
            for mask in range(1, t.full[v] + 1):
                if mask & (mask - 1):
                    out.append((v, mask))
        return out

    def maximal_subtrees(self, i: int) -> list:
        t = self.trees[i]
        if t.rooted:
            raise ValueError("maximal subtrees are defined for unrooted trees")
        if not t.internal:
            raise ValueError("tree has no internal node")
        out = []
        for v in t.internal:
            out.append((v, t.full[v]))
        for v in t.internal:
            for j, u in enumerate(t.adj[v]):
                if not t.is_leaf(u):
                    out.append((v, t.full[v] & ~(1 << j)))
        return out

    # -- debugging -------------------------------------------------------- #

    def materialize(self, i: int, part: Part) -> RootedTree:
        t = self.trees[i]
        return RootedTree.from_nested(t.materialize(part), self.instance.universe)

    def describe_part(self, i: int, part: Part) -> str:
        if part is None:
            return "-"
        names = self.instance.universe.names
        v, mask = part
        if mask == 0:
            return names[self.trees[i].label[v]]
        if mask < 0:
            return f"@{v}-{-1 - mask}:" + _nested_newick(self.trees[i].materialize(part), names)
        return f"@{v}:" + _nested_newick(self.trees[i].materialize(part), names)

    def describe(self, state: State) -> str:
        return "[" + " | ".join(self.describe_part(i, p) for i, p in enumerate(state)) + "]"


def _slot_key(slot):
    return tuple((-1, -1) if p is None else p for p in slot)


# Functional wrappers -------------------------------------------------------- #


def enumerate_cut_subtrees(instance: ProblemInstance, i: int) -> list:
    return StateSpace(instance).cut_subtrees(i)


def enumerate_maximal_subtrees(instance: ProblemInstance, i: int) -> list:
    return StateSpace(instance).maximal_subtrees(i)


def lambda_labels(state: State, instance: ProblemInstance) -> int:
    return StateSpace(instance).lambda_labels(state)


def is_terminal(state: State) -> bool:
    return StateSpace.is_terminal(state)
