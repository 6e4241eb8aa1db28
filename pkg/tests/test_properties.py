"""Randomized properties: solver against oracle, and structural invariants."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from supertrees import (
    ProblemInstance,
    equals_canonical,
    is_agreement_supertree,
    is_compatible_supertree,
    parse_newick,
    solve_masp,
    solve_mcsp,
    write_newick,
)
from supertrees.generate import random_instance_lines
from supertrees.oracle import brute_masp, brute_mcsp

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def instances(draw, max_n=6, max_k=3, modes=("rooted", "unrooted")):
    mode = draw(st.sampled_from(modes))
    seed = draw(st.integers(0, 10**6))
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(3, max_n))
    D = draw(st.integers(2 if mode == "rooted" else 3, 4))
    return ProblemInstance.from_newick(random_instance_lines(seed, k, n, D, mode), mode)


@SETTINGS
@given(instances())
def test_masp_matches_oracle(inst):
    res = solve_masp(inst)
    assert res.size == brute_masp(inst)[0]
    assert is_agreement_supertree(res.tree, inst)


@SETTINGS
@given(instances())
def test_mcsp_matches_oracle(inst):
    res = solve_mcsp(inst)
    assert res.size == brute_mcsp(inst)[0]
    assert is_compatible_supertree(res.tree, inst)


@SETTINGS
@given(instances(max_n=8))
def test_compatible_at_least_agreement(inst):
    assert solve_mcsp(inst).size >= solve_masp(inst).size


@SETTINGS
@given(instances(max_n=7), st.randoms(use_true_random=False))
def test_tree_order_irrelevant(inst, rnd):
    lines = [write_newick(t) for t in inst.trees]
    rnd.shuffle(lines)
    shuffled = ProblemInstance.from_newick(lines, inst.mode)
    assert solve_masp(shuffled).size == solve_masp(inst).size
    assert solve_mcsp(shuffled).size == solve_mcsp(inst).size


@SETTINGS
@given(instances(max_n=7, max_k=2))
def test_relabelling_irrelevant(inst):
    # Labels are single letters here; reversing the alphabet changes every id.
    flip = str.maketrans("abcdefgh", "hgfedcba")
    lines = [write_newick(t).translate(flip) for t in inst.trees]
    other = ProblemInstance.from_newick(lines, inst.mode)
    assert solve_masp(other).size == solve_masp(inst).size
    assert solve_mcsp(other).size == solve_mcsp(inst).size


@SETTINGS
@given(instances(max_n=8))
def test_newick_round_trip(inst):
    for t in inst.trees:
        again = parse_newick(write_newick(t), inst.mode, universe=inst.universe)
        assert equals_canonical(again, t)
        assert write_newick(again) == write_newick(t)


@SETTINGS
@given(instances(max_n=7, max_k=2))
def test_single_tree_is_its_own_supertree(inst):
    t = inst.trees[0]
    alone = ProblemInstance((t,), inst.universe)
    assert solve_masp(alone).size == t.n_leaves
    assert solve_mcsp(alone).size == t.n_leaves
