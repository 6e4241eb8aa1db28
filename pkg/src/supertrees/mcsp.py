"""Maximum compatible supertree by memoized recursion over cut-subforests."""

from __future__ import annotations

import sys
import time
from itertools import product

from .result import SupertreeResult, check_solvable
from .state_space import StateSpace
from .trees import ProblemInstance, RootedTree, caterpillar, iter_bits, unroot


class McspSolver:
    """
    One memo table per instance.

    ``value[state]`` is the largest embedded compatible supertree of ``state``;
    ``choice[state]`` is either ``("T", labels_mask)`` for terminal states or
    ``("S", left, right)`` for the best bipartite (first maximum in
    enumeration order).
    """

    def __init__(self, instance: ProblemInstance):
        self.instance = instance
        self.space = StateSpace(instance)
        self.value: dict = {}
        self.choice: dict = {}
        self.transitions = 0

    def solve_state(self, state) -> int:
        value = self.value.get(state)
        if value is not None:
            return value
        space = self.space
        if space.is_terminal(state):
            lam = space.lambda_labels(state)
            self.value[state] = lam.bit_count()
            self.choice[state] = ("T", lam)
            return self.value[state]
        best = -1
        best_pair = None
        solve = self.solve_state
        for left, right in space.bipartites(state):
            self.transitions += 1
            total = solve(left) + solve(right)
            if total > best:
                best, best_pair = total, (left, right)
        self.value[state] = best
        self.choice[state] = ("S",) + best_pair
        return best

    def witness(self, state):
        """Binary embedded supertree of ``state`` in nested form (``None`` if empty)."""
        if state not in self.choice:
            raise KeyError(f"state {state!r} has not been solved")
        record = self.choice[state]
        if record[0] == "T":
            return caterpillar(iter_bits(record[1]))
        left = self.witness(record[1])
        right = self.witness(record[2])
        if left is None:
            return right
        if right is None:
            return left
        return (left, right)

    def stats(self, started: float) -> dict:
        return {
            "states_visited": len(self.value),
            "transitions": self.transitions,
            "memo_size": len(self.value),
            "wall_time": time.perf_counter() - started,
        }


def reconstruct_mcsp(solver: McspSolver, state) -> RootedTree:
    return RootedTree.from_nested(solver.witness(state), solver.instance.universe)


def _recursion_guard(instance: ProblemInstance) -> None:
    need = 4 * instance.n * instance.k + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def mcsp_rooted(instance: ProblemInstance, solver: McspSolver | None = None) -> SupertreeResult:
    check_solvable(instance, rooted=True)
    _recursion_guard(instance)
    started = time.perf_counter()
    solver = solver or McspSolver(instance)
    top = tuple(t.top_parts()[0] for t in solver.space.trees)
    size = solver.solve_state(top)
    tree = reconstruct_mcsp(solver, top)
    stats = solver.stats(started)
    stats["top_state"] = solver.space.describe(top)
    return SupertreeResult(size, tree, stats)


def mcsp_unrooted(instance: ProblemInstance, solver: McspSolver | None = None) -> SupertreeResult:
    """
    Every k-tuple of whole-tree rootings is solved on one shared memo; the
    answer is the best memoized cut-subforest, unrooted.
    """
    check_solvable(instance, rooted=False)
    _recursion_guard(instance)
    started = time.perf_counter()
    solver = solver or McspSolver(instance)
    for top in product(*(t.top_parts() for t in solver.space.trees)):
        solver.solve_state(top)
    best_state = max(solver.value, key=solver.value.__getitem__)
    size = solver.value[best_state]
    rooted = reconstruct_mcsp(solver, best_state)
    stats = solver.stats(started)
    stats["top_state"] = solver.space.describe(best_state)
    return SupertreeResult(size, unroot(rooted), stats)


def solve_mcsp(instance: ProblemInstance) -> SupertreeResult:
    return mcsp_rooted(instance) if instance.rooted else mcsp_unrooted(instance)
