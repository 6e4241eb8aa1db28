"""
Maximum agreement supertree by memoized recursion over sub-forests.

The best decomposition of a state is found without listing decompositions
one by one.  Each non-empty part offers *resources*: the whole part, plus
one resource per root subtree when the part is internal.  A slot is a state
built from at most one resource per tree, and a decomposition is a set of
at least two resource-disjoint slots such that every non-empty part is
covered either by its whole-part resource or by at least two of its subtree
resources.  ``best[S]`` is the best total over partitions of the resource
set ``S`` into slots, computed in increasing order of ``S`` by always
placing the lowest resource first.
"""

from __future__ import annotations

import time
from functools import lru_cache
from itertools import product

from .mcsp import _recursion_guard
from .result import SupertreeResult, check_solvable
from .state_space import StateSpace
from .trees import ProblemInstance, RootedTree, caterpillar, iter_bits, unroot


class MaspSolver:
    """
    ``value[state]`` is the largest enclosed agreement supertree of ``state``;
    ``choice[state]`` is ``("T", labels_mask)`` or ``("J", slot_states)``.
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
        best, slots = self._best_decomposition(state)
        self.value[state] = best
        self.choice[state] = ("J", slots)
        return best

    def _best_decomposition(self, state):
        opts = []
        shape = []
        for i, part in enumerate(state):
            if part is None:
                opts.append((None,))
                shape.append(-1)
            elif part[1] == 0:
                opts.append((None, part))
                shape.append(0)
            else:
                kids = self.space.children_of(i, part)
                opts.append((None, part, *kids))
                shape.append(len(kids))
        plan = _plan(tuple(shape))
        solve = self.solve_state
        vals = []
        slots = []
        for combo in plan.slots:
            slot = tuple(o[j] for o, j in zip(opts, combo))
            slots.append(slot)
            vals.append(solve(slot))

        n_sets = len(plan.steps) + 1
        best = [0] * n_sets
        best_slot = [-1] * n_sets
        best_rest = [0] * n_sets
        best2 = [-1] * n_sets
        best2_slot = [-1] * n_sets
        best2_rest = [0] * n_sets
        for s_idx, singles, pairs in plan.steps:
            top = -1
            top_slot = -1
            top_rest = 0
            for j in singles:
                if vals[j] > top:
                    top, top_slot = vals[j], j
            top2 = -1
            for j, r in pairs:
                total = vals[j] + best[r]
                if total > top2:
                    top2, best2_slot[s_idx], best2_rest[s_idx] = total, j, r
            if top2 > top:
                top, top_slot, top_rest = top2, best2_slot[s_idx], best2_rest[s_idx]
            best[s_idx], best_slot[s_idx], best_rest[s_idx] = top, top_slot, top_rest
            best2[s_idx] = top2
        self.transitions += plan.n_transitions

        answer = -1
        s_idx = -1
        for f in plan.finals:
            if best2[f] > answer:
                answer, s_idx = best2[f], f
        chosen = [slots[best2_slot[s_idx]]]
        rest = best2_rest[s_idx]
        while rest:
            chosen.append(slots[best_slot[rest]])
            rest = best_rest[rest]
        return answer, tuple(chosen)

    def witness(self, state):
        if state not in self.choice:
            raise KeyError(f"state {state!r} has not been solved")
        record = self.choice[state]
        if record[0] == "T":
            return caterpillar(iter_bits(record[1]))
        kids = [w for w in (self.witness(s) for s in record[1]) if w is not None]
        if not kids:
            return None
        if len(kids) == 1:
            return kids[0]
        return tuple(kids)

    def stats(self, started: float) -> dict:
        return {
            "states_visited": len(self.value),
            "transitions": self.transitions,
            "memo_size": len(self.value),
            "wall_time": time.perf_counter() - started,
        }


class _Plan:
    """Resource-set recurrence for one state shape, shared by all states of that shape."""

    __slots__ = ("slots", "steps", "finals", "n_transitions")


@lru_cache(maxsize=None)
def _plan(shape: tuple) -> _Plan:
    # shape[i]: -1 empty part, 0 leaf, d > 0 internal with d root subtrees.
    # Option j of tree i: 0 nothing, 1 the whole part, 2 + c its c-th subtree.
    bit = 1
    option_bits = []
    wholes = []
    kid_bits = []
    for d in shape:
        if d < 0:
            option_bits.append((0,))
            wholes.append(0)
            kid_bits.append(0)
            continue
        bits = [0, bit]
        wholes.append(bit)
        bit <<= 1
        kids = 0
        for _ in range(d):
            bits.append(bit)
            kids |= bit
            bit <<= 1
        option_bits.append(tuple(bits))
        kid_bits.append(kids)
    all_wholes = sum(wholes)

    slots = []
    by_low: dict[int, list] = {}
    for combo in product(*(range(len(b)) for b in option_bits)):
        res = 0
        for bits, j in zip(option_bits, combo):
            res |= bits[j]
        if res == 0 or res == all_wholes:  # empty slot, or the state itself
            continue
        by_low.setdefault(res & -res, []).append((res, len(slots)))
        slots.append(combo)

    # Reachable resource sets never mix a whole part with its subtrees.
    per_tree = []
    for w, kids in zip(wholes, kid_bits):
        sets = [0]
        if w:
            sets.append(w)
        sub = kids
        while sub:
            sets.append(sub)
            sub = (sub - 1) & kids
        per_tree.append(sets)
    ordered = sorted({sum(c) for c in product(*per_tree)})
    index = {s: i for i, s in enumerate(ordered)}

    steps = []
    n_transitions = 0
    for s in ordered[1:]:
        singles = []
        pairs = []
        for res, j in by_low.get(s & -s, ()):
            if res & ~s:
                continue
            if res == s:
                singles.append(j)
            else:
                pairs.append((j, index[s ^ res]))
        n_transitions += len(singles) + len(pairs)
        steps.append((index[s], tuple(singles), tuple(pairs)))

    finals = []
    for combo in product(*per_tree):
        ok = True
        for part_set, w, kids in zip(combo, wholes, kid_bits):
            if w and not (part_set == w or (part_set & kids and part_set & (part_set - 1))):
                ok = False
                break
        if ok:
            finals.append(index[sum(combo)])

    plan = _Plan()
    plan.slots = slots
    plan.steps = steps
    plan.finals = finals  # product order: whole parts before splits, earlier trees first
    plan.n_transitions = n_transitions
    return plan


def reconstruct_masp(solver: MaspSolver, state) -> RootedTree:
    return RootedTree.from_nested(solver.witness(state), solver.instance.universe)


def masp_rooted(instance: ProblemInstance, solver: MaspSolver | None = None) -> SupertreeResult:
    check_solvable(instance, rooted=True)
    _recursion_guard(instance)
    started = time.perf_counter()
    solver = solver or MaspSolver(instance)
    top = tuple(t.top_parts()[0] for t in solver.space.trees)
    size = solver.solve_state(top)
    tree = reconstruct_masp(solver, top)
    stats = solver.stats(started)
    stats["top_state"] = solver.space.describe(top)
    return SupertreeResult(size, tree, stats)


def variant_tops(space: StateSpace):
    """
    Rooted-variant tuples to solve for an unrooted instance.

    An optimal unrooted supertree can be rooted on the pendant edge of any of
    its leaves ``l``.  Trees containing ``l`` then need only their own rooting
    on that pendant edge; the other trees are tried at every internal node
    and on every edge.  Maximizing over ``l`` is exact.
    """
    per_tree_all = [t.rootings() for t in space.trees]
    seen = set()
    for lab in iter_bits(space.instance.leafset):
        choices = []
        for t, every in zip(space.trees, per_tree_all):
            if t.leafset >> lab & 1:
                leaf = t.label.index(lab)
                choices.append([t.edge_root(leaf, t.tree.neighbors[leaf][0])])
            else:
                choices.append(every)
        for top in product(*choices):
            if top not in seen:
                seen.add(top)
                yield top


def masp_unrooted(instance: ProblemInstance, solver: MaspSolver | None = None) -> SupertreeResult:
    """Best over rooted variants of the input trees, sharing one memo across them."""
    check_solvable(instance, rooted=False)
    _recursion_guard(instance)
    started = time.perf_counter()
    solver = solver or MaspSolver(instance)
    best_state, size = None, -1
    n_tops = 0
    for top in variant_tops(solver.space):
        n_tops += 1
        value = solver.solve_state(top)
        if value > size:
            best_state, size = top, value
    rooted = reconstruct_masp(solver, best_state)
    stats = solver.stats(started)
    stats["top_state"] = solver.space.describe(best_state)
    stats["rooted_variants"] = n_tops
    return SupertreeResult(size, unroot(rooted), stats)


def solve_masp(instance: ProblemInstance) -> SupertreeResult:
    return masp_rooted(instance) if instance.rooted else masp_unrooted(instance)
