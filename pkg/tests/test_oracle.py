import pytest

from supertrees import LabelUniverse, ProblemInstance
from supertrees.oracle import OracleCapError, brute_masp, brute_mcsp, count_trees, enumerate_trees

COUNTS = {
    "rooted-all": [1, 1, 4, 26, 236, 2752],
    "rooted-binary": [1, 1, 3, 15, 105, 945],
    "unrooted-all": [1, 1, 1, 4, 26, 236],
    "unrooted-binary": [1, 1, 1, 3, 15, 105],
}


@pytest.mark.parametrize("mode", sorted(COUNTS))
def test_topology_counts(mode):
    assert [count_trees(n, mode) for n in range(1, 7)] == COUNTS[mode]


@pytest.mark.parametrize("mode", sorted(COUNTS))
@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_has_no_duplicates(mode, n):
    u = LabelUniverse("abcde"[:n])
    trees = enumerate_trees((1 << n) - 1, u, mode)
    forms = [t.canonical for t in trees]
    assert len(set(forms)) == len(forms) == COUNTS[mode][n - 1]
    assert forms == sorted(forms, key=repr)


def test_enumeration_modes_and_cap():
    u = LabelUniverse("abcdefgh")
    with pytest.raises(ValueError):
        enumerate_trees(0b111, u, "sideways")
    with pytest.raises(OracleCapError):
        enumerate_trees(0xFF, u, "rooted-all", cap=7)
    with pytest.raises(ValueError):
        enumerate_trees(0, u)


@pytest.mark.parametrize(
    "lines, masp, mcsp",
    [
        (["((a,b),c);"], 3, 3),
        (["(a,b,c);", "((a,b),c);"], 2, 3),
        (["((a,b),c);", "((a,c),b);"], 2, 2),
        (["(a,b,c);"], 3, 3),
    ],
)
def test_small_values(lines, masp, mcsp):
    inst = ProblemInstance.from_newick(lines)
    assert brute_masp(inst)[0] == masp
    assert brute_mcsp(inst)[0] == mcsp


def test_single_tree_witness_is_itself():
    inst = ProblemInstance.from_newick(["((a,b),c);"])
    size, witness = brute_masp(inst)
    assert witness.canonical == inst.trees[0].canonical


def test_relabelling_invariance():
    a = ProblemInstance.from_newick(["((a,b),c);", "((a,c),d);"])
    b = ProblemInstance.from_newick(["((x,y),z);", "((x,z),w);"])
    assert brute_masp(a)[0] == brute_masp(b)[0]
    assert brute_mcsp(a)[0] == brute_mcsp(b)[0]


def test_instance_cap():
    inst = ProblemInstance.from_newick(["(a,b,c,d,e,f,g,h);"])
    with pytest.raises(OracleCapError):
        brute_masp(inst)
    small = ProblemInstance.from_newick(["((a,b),(c,d));"])
    with pytest.raises(OracleCapError):
        brute_mcsp(small, cap=3)


def test_unrooted_quartets():
    inst = ProblemInstance.from_newick(["((a,b),(c,d));", "((a,c),(b,d));"], "unrooted")
    assert brute_masp(inst)[0] == 3
    assert brute_mcsp(inst)[0] == 3
