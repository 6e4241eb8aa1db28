"""Seeded random instances."""

from __future__ import annotations

import random
import string

from .trees import LabelUniverse, RootedTree, UnrootedTree, write_newick


def label_names(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    width = len(str(n))
    return [f"t{i:0{width}d}" for i in range(1, n + 1)]


def random_nested(labels: list[int], max_children: int, rng: random.Random, root_children: int | None = None):
    """Random rooted shape by repeated merging; no node gets more than
    ``max_children`` children (``root_children`` for the root)."""
    if root_children is None:
        root_children = max_children
    pool = list(labels)
    rng.shuffle(pool)
    while len(pool) > 1:
        if len(pool) <= root_children and rng.random() < 0.5:
            return tuple(pool)
        c = rng.randint(2, min(max_children, len(pool)))
        merged = tuple(pool[:c])
        pool = pool[c:]
        pool.insert(rng.randrange(len(pool) + 1), merged)
    return pool[0]


def random_instance_lines(
    seed: int, k: int, n: int, D: int, mode: str = "rooted", min_leaves: int | None = None, binary: bool = False
) -> list[str]:
    """
    ``k`` Newick lines over random subsets of an ``n``-label universe with
    every node degree at most ``D`` (children for rooted trees, neighbours
    for unrooted ones).  ``binary`` forces fully resolved trees.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode not in ("rooted", "unrooted"):
        raise ValueError(f"mode must be 'rooted' or 'unrooted', got {mode!r}")
    if D < 2:
        raise ValueError("D must be at least 2")
    if mode == "unrooted" and D < 3:
        raise ValueError("unrooted trees need D >= 3: internal nodes have degree at least 3")
    floor = 3 if mode == "unrooted" else 1
    if min_leaves is None:
        min_leaves = floor
    if n < max(floor, min_leaves):
        raise ValueError(f"n must be at least {max(floor, min_leaves)} for {mode} trees")

    rng = random.Random(seed)
    names = label_names(n)
    universe = LabelUniverse(names)
    lines = []
    for _ in range(k):
        size = rng.randint(min_leaves, n)
        chosen = sorted(rng.sample(range(n), size))
        if mode == "rooted":
            width = 2 if binary else D
            nested = random_nested(chosen, width, rng)
            tree = RootedTree.from_nested(nested, universe)
        else:
            # Below the root a node also has its parent edge.
            width = 2 if binary else D - 1
            root_width = 3 if binary else D
            nested = random_nested(chosen, width, rng, root_children=root_width)
            tree = UnrootedTree.from_nested(nested, universe)
        lines.append(write_newick(tree))
    return lines


def format_instance(seed: int, k: int, n: int, D: int, mode: str = "rooted") -> str:
    lines = random_instance_lines(seed, k, n, D, mode)
    header = f"# seed={seed} k={k} n={n} D={D} mode={mode}"
    return "\n".join([header, *lines]) + "\n"
