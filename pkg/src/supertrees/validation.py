"""Input coercion shared by the estimator wrappers."""

from __future__ import annotations

from .trees import ProblemInstance, RootedTree, UnrootedTree, parse_instance, write_newick

MODES = ("rooted", "unrooted")


def check_mode(mode) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be 'rooted' or 'unrooted', got {mode!r}")
    return mode


def check_trees(X, mode: str = "rooted") -> ProblemInstance:
    """
    Coerce ``X`` into a :class:`ProblemInstance` of the given ``mode``.

    ``X`` may be an instance, a multi-line Newick string, or a sequence of
    Newick strings and tree objects (mixed freely; trees from different label
    universes are merged by name).
    """
    check_mode(mode)
    if isinstance(X, ProblemInstance):
        if X.mode != mode:
            raise ValueError(f"expected {mode} trees, got a {X.mode} instance")
        return X
    if isinstance(X, str):
        return parse_instance(X, mode)
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected Newick strings or trees, got {type(X).__name__}") from None
    if not items:
        raise ValueError("need at least one tree")
    lines = []
    for i, item in enumerate(items):
        if isinstance(item, str):
            text = item.strip()
            if "\n" in text:
                raise ValueError(f"item {i} holds several lines; pass one tree per item")
            lines.append(text)
        elif isinstance(item, (RootedTree, UnrootedTree)):
            if item.rooted != (mode == "rooted"):
                raise ValueError(f"item {i} is {'rooted' if item.rooted else 'unrooted'}, expected {mode}")
            lines.append(write_newick(item))
        else:
            raise TypeError(f"item {i}: expected a Newick string or tree, got {type(item).__name__}")
    return parse_instance("\n".join(lines), mode)
