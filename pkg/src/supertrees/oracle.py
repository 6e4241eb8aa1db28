"""
Exhaustive reference solver for small instances.

Candidate supertrees are generated directly, leaf by leaf, and checked with
the plain restriction-based checkers; nothing here shares code with the
dynamic programs.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

from .trees import (
    ProblemInstance,
    RootedTree,
    UnrootedTree,
    is_agreement_supertree,
    is_compatible_supertree,
    iter_bits,
)

MODES = ("rooted-all", "rooted-binary", "unrooted-all", "unrooted-binary")
DEFAULT_CAP = {True: 7, False: 6}


class OracleCapError(ValueError):
    """Instance too large for exhaustive search."""


def _grow(labels: list[int], binary: bool):
    """Rooted nested trees on ``labels``; each shape is produced once."""
    if len(labels) == 1:
        yield labels[0]
        return
    new = labels[-1]
    for tree in _grow(labels[:-1], binary):
        yield from _insert(tree, new, binary)


def _insert(tree, new: int, binary: bool):
    # Subdivide the edge above this node.
    yield (tree, new)
    if isinstance(tree, int):
        return
    if not binary:
        yield tree + (new,)
    for j, child in enumerate(tree):
        for replaced in _insert(child, new, binary):
            yield tree[:j] + (replaced,) + tree[j + 1 :]


def _nested_trees(labels: list[int], mode: str) -> Iterator:
    if mode not in MODES:
        raise ValueError(f"unknown enumeration mode {mode!r}")
    binary = mode.endswith("binary")
    if mode.startswith("rooted") or len(labels) <= 2:
        if len(labels) == 2:
            yield (labels[0], labels[1])
            return
        yield from _grow(labels, binary)
        return
    # Unrooted trees on n labels correspond to rooted trees on the other
    # n - 1 labels, hung from the first label.
    first, rest = labels[0], labels[1:]
    for tree in _grow(rest, binary):
        yield (first,) + tree


def enumerate_trees(labels: int, universe, mode: str = "rooted-all", cap: int = 7):
    """
    Every distinct topology on the label mask ``labels``.

    ``mode`` is one of ``rooted-all``, ``rooted-binary``, ``unrooted-all`` or
    ``unrooted-binary``.  Trees come out sorted by canonical form.
    """
    ids = list(iter_bits(labels))
    if not ids:
        raise ValueError("need at least one label")
    if len(ids) > cap:
        raise OracleCapError(f"{len(ids)} labels exceeds the oracle cap of {cap}")
    cls = RootedTree if mode.startswith("rooted") else UnrootedTree
    trees = [cls.from_nested(nested, universe) for nested in _nested_trees(ids, mode)]
    trees.sort(key=lambda t: repr(t.canonical))
    return trees


def _subsets(mask: int):
    ids = list(iter_bits(mask))
    for size in range(len(ids), 0, -1):
        for combo in combinations(ids, size):
            m = 0
            for i in combo:
                m |= 1 << i
            yield m


def _search(instance: ProblemInstance, check, binary: bool, cap: int | None):
    rooted = instance.rooted
    if cap is None:
        cap = DEFAULT_CAP[rooted]
    if instance.n > cap:
        raise OracleCapError(f"instance has {instance.n} labels; oracle cap is {cap}")
    mode = ("rooted" if rooted else "unrooted") + ("-binary" if binary else "-all")
    for subset in _subsets(instance.leafset):
        for candidate in enumerate_trees(subset, instance.universe, mode, cap):
            if check(candidate, instance):
                return subset.bit_count(), candidate
    raise AssertionError("a single leaf is always a supertree")


def brute_masp(instance: ProblemInstance, cap: int | None = None):
    """``(size, witness)`` of a maximum agreement supertree, by exhaustion."""
    return _search(instance, is_agreement_supertree, binary=False, cap=cap)


def brute_mcsp(instance: ProblemInstance, cap: int | None = None):
    """``(size, witness)`` of a maximum compatible supertree over binary candidates."""
    return _search(instance, is_compatible_supertree, binary=True, cap=cap)


def count_trees(n: int, mode: str) -> int:
    """Number of topologies on ``n`` labels, for cross-checking the enumerator."""
    return sum(1 for _ in _nested_trees(list(range(n)), mode))

