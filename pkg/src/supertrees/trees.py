"""
Leaf-labeled phylogenetic trees.

Rooted and unrooted trees are stored as small node arenas over a shared
:class:`LabelUniverse`.  Leaf sets are plain ``int`` bitmasks indexed by
label id, which keeps restriction and the cluster/split tests cheap.

Many helpers work on a *nested* form as well: a leaf is its label id, an
internal node is a tuple of nested children, and the empty tree is ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union


class NewickError(ValueError):
    """Malformed Newick text.  ``pos`` is a 0-based offset into the text."""

    def __init__(self, message: str, pos: int | None = None):
        self.message = message
        self.pos = pos
        if pos is not None:
            message = f"{message} (column {pos + 1})"
        super().__init__(message)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --------------------------------------------------------------------------- #
# Labels                                                                      #
# --------------------------------------------------------------------------- #


class LabelUniverse:
    """Lexicographically ordered label set with dense 0-based ids."""

    def __init__(self, names: Iterable[str]):
        self.names: tuple[str, ...] = tuple(sorted(set(names)))
        self.index: dict[str, int] = {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelUniverse) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"LabelUniverse({list(self.names)!r})"

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.index[name]
        return m

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in iter_bits(mask)]


# --------------------------------------------------------------------------- #
# Nested-form helpers                                                         #
# --------------------------------------------------------------------------- #


def _normalize(nested):
    """Drop empty children and suppress single-child internal nodes."""
    if nested is None or isinstance(nested, int):
        return nested
    kids = [c for c in (_normalize(c) for c in nested) if c is not None]
    if not kids:
        return None
    if len(kids) == 1:
        return kids[0]
    return tuple(kids)


def _canonical(nested):
    """Return ``(canonical_form, smallest_label)``; children sorted by smallest label."""
    if isinstance(nested, int):
        return nested, nested
    parts = sorted((_canonical(c) for c in nested), key=lambda p: p[1])
    return tuple(p[0] for p in parts), parts[0][1]


def _restrict_nested(nested, keep: int):
    if nested is None:
        return None
    if isinstance(nested, int):
        return nested if keep >> nested & 1 else None
    kids = [c for c in (_restrict_nested(c, keep) for c in nested) if c is not None]
    if not kids:
        return None
    if len(kids) == 1:
        return kids[0]
    return tuple(kids)


def _nested_leafset(nested) -> int:
    if nested is None:
        return 0
    if isinstance(nested, int):
        return 1 << nested
    m = 0
    for c in nested:
        m |= _nested_leafset(c)
    return m


def _nested_newick(nested, names: Sequence[str]) -> str:
    if isinstance(nested, int):
        return names[nested]
    return "(" + ",".join(_nested_newick(c, names) for c in nested) + ")"


def caterpillar(labels: Iterable[int]):
    """Nested caterpillar over ``labels`` in the given order."""
    nested = None
    for lab in labels:
        nested = lab if nested is None else (nested, lab)
    return nested


# --------------------------------------------------------------------------- #
# Trees                                                                       #
# --------------------------------------------------------------------------- #


class RootedTree:
    """
    Rooted phylogenetic tree.

    Attributes
    ----------
    parent : list[int]       parent node, -1 at the root
    children : list[tuple]   child nodes in stored order
    label : list[int]        label id for leaves, -1 for internal nodes
    root : int               -1 for the empty tree
    """

    rooted = True

    def __init__(self, universe: LabelUniverse, parent, children, label, root: int):
        self.universe = universe
        self.parent = list(parent)
        self.children = [tuple(c) for c in children]
        self.label = list(label)
        self.root = root

    @classmethod
    def from_nested(cls, nested, universe: LabelUniverse) -> "RootedTree":
        nested = _normalize(nested)
        parent: list[int] = []
        children: list[list[int]] = []
        label: list[int] = []

        def build(nd, par):
            v = len(parent)
            parent.append(par)
            children.append([])
            if isinstance(nd, int):
                label.append(nd)
            else:
                label.append(-1)
                for c in nd:
                    children[v].append(build(c, v))
            return v

        root = -1 if nested is None else build(nested, -1)
        return cls(universe, parent, children, label, root)

    @classmethod
    def empty(cls, universe: LabelUniverse) -> "RootedTree":
        return cls(universe, [], [], [], -1)

    # -- structure -------------------------------------------------------- #

    @property
    def n_nodes(self) -> int:
        return len(self.label)

    def is_leaf(self, v: int) -> bool:
        return self.label[v] >= 0

    @cached_property
    def leafset(self) -> int:
        m = 0
        for lab in self.label:
            if lab >= 0:
                m |= 1 << lab
        return m

    @property
    def n_leaves(self) -> int:
        return self.leafset.bit_count()

    @property
    def max_degree(self) -> int:
        """Largest number of children of any node."""
        return max((len(c) for c in self.children), default=0)

    def nested(self, v: int | None = None):
        if v is None:
            v = self.root
        if v < 0:
            return None
        if self.label[v] >= 0:
            return self.label[v]
        return tuple(self.nested(c) for c in self.children[v])

    @cached_property
    def canonical(self):
        if self.root < 0:
            return None
        return _canonical(self.nested())[0]

    @cached_property
    def clusters(self) -> frozenset[int]:
        out = set()

        def walk(v):
            if self.label[v] >= 0:
                m = 1 << self.label[v]
            else:
                m = 0
                for c in self.children[v]:
                    m |= walk(c)
            out.add(m)
            return m

        if self.root >= 0:
            walk(self.root)
        return frozenset(out)

    def __repr__(self) -> str:
        return f"RootedTree({write_newick(self)!r})"


class UnrootedTree:
    """
    Unrooted phylogenetic tree stored as an adjacency arena.

    Trees with fewer than three leaves are representable (a single node, or a
    leaf-leaf edge) but flagged by :attr:`is_degenerate`; the solvers reject them.
    """

    rooted = False

    def __init__(self, universe: LabelUniverse, neighbors, label):
        self.universe = universe
        self.neighbors = [tuple(n) for n in neighbors]
        self.label = list(label)

    @classmethod
    def from_nested(cls, nested, universe: LabelUniverse) -> "UnrootedTree":
        """Build from a rooted drawing; a two-child root is fused away."""
        nested = _normalize(nested)
        neighbors: list[list[int]] = []
        label: list[int] = []

        def node(lab):
            neighbors.append([])
            label.append(lab)
            return len(label) - 1

        def link(a, b):
            neighbors[a].append(b)
            neighbors[b].append(a)

        def build(nd):
            if isinstance(nd, int):
                return node(nd)
            v = node(-1)
            for c in nd:
                link(v, build(c))
            return v

        if isinstance(nested, tuple) and len(nested) == 2:
            link(build(nested[0]), build(nested[1]))
        elif nested is not None:
            build(nested)
        return cls(universe, neighbors, label)

    @property
    def n_nodes(self) -> int:
        return len(self.label)

    def is_leaf(self, v: int) -> bool:
        return self.label[v] >= 0

    @cached_property
    def leafset(self) -> int:
        m = 0
        for lab in self.label:
            if lab >= 0:
                m |= 1 << lab
        return m

    @property
    def n_leaves(self) -> int:
        return self.leafset.bit_count()

    @property
    def is_degenerate(self) -> bool:
        return self.n_leaves < 3

    @property
    def max_degree(self) -> int:
        return max((len(n) for n in self.neighbors), default=0)

    @property
    def internal_nodes(self) -> list[int]:
        return [v for v, lab in enumerate(self.label) if lab < 0]

    def oriented(self, v: int, came_from: int):
        """Nested form of the component at ``v`` hanging away from ``came_from``."""
        if self.label[v] >= 0:
            return self.label[v]
        return tuple(self.oriented(w, v) for w in self.neighbors[v] if w != came_from)

    def _smallest_leaf(self) -> int:
        low = (self.leafset & -self.leafset).bit_length() - 1
        return self.label.index(low)

    def nested(self):
        """Rooted drawing at the neighbor of the smallest-labelled leaf."""
        if not self.label:
            return None
        leaf = self._smallest_leaf()
        if not self.neighbors[leaf]:
            return self.label[leaf]
        w = self.neighbors[leaf][0]
        if self.label[w] >= 0:
            return (self.label[leaf], self.label[w])
        return tuple(self.oriented(x, w) for x in self.neighbors[w])

    @cached_property
    def canonical(self):
        nested = self.nested()
        if nested is None:
            return None
        return _canonical(nested)[0]

    @cached_property
    def splits(self) -> frozenset[int]:
        """Edge bipartitions, each given as the side without the smallest label."""
        full = self.leafset
        low = full & -full
        out = set()

        def walk(v, came_from):
            m = (1 << self.label[v]) if self.label[v] >= 0 else 0
            for w in self.neighbors[v]:
                if w != came_from:
                    sub = walk(w, v)
                    out.add(sub if not sub & low else full ^ sub)
                    m |= sub
            return m

        if self.label:
            walk(0, -1)
        return frozenset(out)

    def __repr__(self) -> str:
        return f"UnrootedTree({write_newick(self)!r})"


Tree = Union[RootedTree, UnrootedTree]


# --------------------------------------------------------------------------- #
# Newick                                                                      #
# --------------------------------------------------------------------------- #


def _is_label_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def _parse_raw(text: str):
    """Parse to nested lists of label strings.  Inner labels and lengths are dropped."""
    n = len(text)
    pos = 0

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def read_label():
        nonlocal pos
        start = pos
        while pos < n and _is_label_char(text[pos]):
            pos += 1
        return text[start:pos]

    def read_length():
        nonlocal pos
        skip()
        if pos < n and text[pos] == ":":
            pos += 1
            skip()
            start = pos
            while pos < n and (text[pos].isdigit() or text[pos] in "+-.eE"):
                pos += 1
            try:
                float(text[start:pos])
            except ValueError:
                raise NewickError("bad branch length", start) from None

    def subtree():
        nonlocal pos
        skip()
        if pos >= n:
            raise NewickError("unexpected end of input", pos)
        if text[pos] == "(":
            pos += 1
            kids = [subtree()]
            while True:
                skip()
                if pos >= n:
                    raise NewickError("unexpected end of input, expected ',' or ')'", pos)
                if text[pos] == ",":
                    pos += 1
                    kids.append(subtree())
                elif text[pos] == ")":
                    pos += 1
                    break
                else:
                    raise NewickError(f"unexpected character {text[pos]!r}", pos)
            skip()
            read_label()
            read_length()
            return kids
        start = pos
        name = read_label()
        if not name:
            raise NewickError(f"expected a leaf label, got {text[start]!r}", start)
        read_length()
        return name

    skip()
    if pos < n and text[pos] == ";":
        tree = None
    else:
        tree = subtree()
        skip()
    if pos >= n or text[pos] != ";":
        raise NewickError("expected ';'", pos)
    pos += 1
    skip()
    if pos != n:
        raise NewickError("trailing characters after ';'", pos)
    return tree


def _raw_labels(raw, out: list[str]) -> None:
    if raw is None:
        return
    if isinstance(raw, str):
        out.append(raw)
    else:
        for c in raw:
            _raw_labels(c, out)


def _intern(raw, universe: LabelUniverse):
    if raw is None:
        return None
    if isinstance(raw, str):
        try:
            return universe.index[raw]
        except KeyError:
            raise NewickError(f"label {raw!r} is not in the label universe") from None
    return tuple(_intern(c, universe) for c in raw)


def _check_duplicates(names: list[str]) -> None:
    seen = set()
    for name in names:
        if name in seen:
            raise NewickError(f"duplicate leaf label {name!r}")
        seen.add(name)


def parse_newick(text: str, mode: str = "rooted", universe: LabelUniverse | None = None) -> Tree:
    """
    Parse one Newick expression.

    Degree-two internal nodes are suppressed.  Without ``universe`` a universe
    is built from the tree's own labels.
    """
    raw = _parse_raw(text)
    names: list[str] = []
    _raw_labels(raw, names)
    _check_duplicates(names)
    if universe is None:
        universe = LabelUniverse(names)
    nested = _intern(raw, universe)
    return _from_nested(nested, universe, mode)


def _from_nested(nested, universe: LabelUniverse, mode: str) -> Tree:
    if mode == "rooted":
        return RootedTree.from_nested(nested, universe)
    if mode == "unrooted":
        return UnrootedTree.from_nested(nested, universe)
    raise ValueError(f"mode must be 'rooted' or 'unrooted', got {mode!r}")


def write_newick(tree: Tree) -> str:
    """Canonical Newick: children ordered by the smallest label id below them."""
    canon = tree.canonical
    if canon is None:
        return ";"
    return _nested_newick(canon, tree.universe.names) + ";"


# --------------------------------------------------------------------------- #
# Primitives                                                                  #
# --------------------------------------------------------------------------- #


def restrict(tree: Tree, keep: int) -> Tree:
    """``tree | keep``: drop leaves outside the label mask and suppress degree two."""
    nested = _restrict_nested(tree.nested(), keep)
    return _from_nested(nested, tree.universe, "rooted" if tree.rooted else "unrooted")


def equals_canonical(a: Tree, b: Tree) -> bool:
    if a.rooted != b.rooted:
        raise ValueError("cannot compare a rooted tree with an unrooted one")
    return a.canonical == b.canonical


def refines(t: Tree, t_prime: Tree) -> bool:
    """True iff ``t_prime`` is obtained from ``t`` by contracting edges."""
    if t.rooted != t_prime.rooted:
        raise ValueError("cannot compare a rooted tree with an unrooted one")
    if t.leafset != t_prime.leafset:
        raise ValueError("refinement is only defined on equal leaf sets")
    if t.rooted:
        return t_prime.clusters <= t.clusters
    return t_prime.splits <= t.splits


def root_at(tree: UnrootedTree, v: int, removed: int | None = None) -> RootedTree:
    """Root ``tree`` at internal node ``v``, optionally cutting off the nontrivial
    subtree behind neighbor ``removed``."""
    if tree.label[v] >= 0:
        raise ValueError("can only root at an internal node")
    if removed is not None:
        if removed not in tree.neighbors[v]:
            raise ValueError(f"node {removed} is not adjacent to {v}")
        if tree.label[removed] >= 0:
            raise ValueError("removed subtree must be nontrivial, got a leaf")
    nested = tuple(tree.oriented(w, v) for w in tree.neighbors[v] if w != removed)
    return RootedTree.from_nested(nested, tree.universe)


def unroot(tree: RootedTree) -> UnrootedTree:
    if tree.n_leaves < 2:
        raise ValueError("cannot unroot a tree with fewer than two leaves")
    return UnrootedTree.from_nested(tree.nested(), tree.universe)


# --------------------------------------------------------------------------- #
# Instances and checkers                                                      #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class ProblemInstance:
    """``k`` trees of one rootedness over a common label universe."""

    trees: tuple
    universe: LabelUniverse

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        if not self.trees:
            raise ValueError("an instance needs at least one tree")
        kinds = {t.rooted for t in self.trees}
        if len(kinds) != 1:
            raise ValueError("instance mixes rooted and unrooted trees")
        for t in self.trees:
            if t.universe != self.universe:
                raise ValueError("all trees must share the instance label universe")
            if t.n_leaves == 0:
                raise ValueError("empty input tree")

    @property
    def rooted(self) -> bool:
        return self.trees[0].rooted

    @property
    def mode(self) -> str:
        return "rooted" if self.rooted else "unrooted"

    @property
    def k(self) -> int:
        return len(self.trees)

    @cached_property
    def leafset(self) -> int:
        m = 0
        for t in self.trees:
            m |= t.leafset
        return m

    @property
    def n(self) -> int:
        return self.leafset.bit_count()

    @property
    def D(self) -> int:
        return max(t.max_degree for t in self.trees)

    @classmethod
    def from_newick(cls, texts: Iterable[str], mode: str = "rooted") -> "ProblemInstance":
        return parse_instance("\n".join(texts), mode)


def parse_instance(text: str, mode: str = "rooted") -> ProblemInstance:
    """
    Parse one Newick tree per line; blank lines and ``#`` comments are skipped.

    Errors are raised as :class:`NewickError` with ``line`` and ``col`` attributes
    (1-based) set.
    """
    raws = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(line) - len(line.lstrip())
        try:
            raw = _parse_raw(stripped)
            names: list[str] = []
            _raw_labels(raw, names)
            _check_duplicates(names)
        except NewickError as err:
            err.line = lineno
            err.col = indent + (err.pos or 0) + 1
            raise
        raws.append(raw)
        if raw is None:
            err = NewickError("empty tree")
            err.line, err.col = lineno, indent + 1
            raise err
    if not raws:
        err = NewickError("no trees in input")
        err.line, err.col = 1, 1
        raise err
    names = []
    for raw in raws:
        _raw_labels(raw, names)
    universe = LabelUniverse(names)
    trees = [_from_nested(_intern(raw, universe), universe, mode) for raw in raws]
    return ProblemInstance(tuple(trees), universe)


def read_instance(path, mode: str = "rooted") -> ProblemInstance:
    with open(path) as fh:
        return parse_instance(fh.read(), mode)


def _trees_of(instance) -> Sequence[Tree]:
    return instance.trees if isinstance(instance, ProblemInstance) else instance


def is_agreement_supertree(x: Tree, instance) -> bool:
    """``X | L(T) == T | L(X)`` for every input tree ``T``."""
    for t in _trees_of(instance):
        if not equals_canonical(restrict(x, t.leafset), restrict(t, x.leafset)):
            return False
    return True


def is_compatible_supertree(y: Tree, instance) -> bool:
    """``Y | L(T)`` refines ``T | L(Y)`` for every input tree ``T``."""
    for t in _trees_of(instance):
        if not refines(restrict(y, t.leafset), restrict(t, y.leafset)):
            return False
    return True
