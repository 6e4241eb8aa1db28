import pytest

from supertrees import (
    LabelUniverse,
    NewickError,
    ProblemInstance,
    RootedTree,
    UnrootedTree,
    equals_canonical,
    is_agreement_supertree,
    is_compatible_supertree,
    parse_instance,
    parse_newick,
    read_instance,
    refines,
    restrict,
    root_at,
    unroot,
    write_newick,
)


def test_universe_is_sorted_and_dense():
    u = LabelUniverse(["c", "a", "b", "a"])
    assert u.names == ("a", "b", "c") or list(u.names) == ["a", "b", "c"]
    assert u.index["c"] == 2
    assert u.mask(["a", "c"]) == 0b101
    assert u.names_of(0b110) == ["b", "c"]


class TestParse:
    def test_cherry(self, rooted):
        t = rooted("(a,b);")
        assert t.n_leaves == 2
        assert len(t.children[t.root]) == 2

    def test_degree_two_suppressed(self, rooted):
        assert equals_canonical(rooted("((a,b));"), rooted("(a,b);"))
        assert equals_canonical(rooted("(((a),b),c);"), rooted("((a,b),c);"))

    def test_quartet_unrooted(self, unrooted):
        t = unrooted("((a,b),(c,d));")
        assert len(t.internal_nodes) == 2
        assert t.n_leaves == 4
        assert t.max_degree == 3

    def test_unrooted_root_of_degree_two_fused(self, unrooted):
        assert equals_canonical(unrooted("((a,b),(c,d));"), unrooted("(a,b,(c,d));"))

    def test_lengths_and_inner_labels_dropped(self, rooted):
        t = rooted("((a:0.1,b:2e-3)x:1,c:4)root;")
        assert write_newick(t) == "((a,b),c);"

    def test_whitespace(self, rooted):
        assert write_newick(rooted(" ( (b , a) ,\tc ) ; ")) == "((a,b),c);"

    @pytest.mark.parametrize(
        "text",
        ["((a,b),c", "((a,b),c));", "(a,,b);", "(a,b)c d;", "(a,b);x", "(a,b", "(a-b,c);"],
    )
    def test_syntax_errors(self, text):
        with pytest.raises(NewickError):
            parse_newick(text)

    def test_error_position(self):
        with pytest.raises(NewickError) as info:
            parse_newick("((a,b),,c);")
        assert info.value.pos == 7

    def test_duplicate_label(self):
        with pytest.raises(NewickError, match="duplicate"):
            parse_newick("((a,b),a);")

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            parse_newick("(a,b);", mode="sideways")

    def test_two_leaf_unrooted_is_flagged(self, unrooted):
        t = unrooted("(a,b);")
        assert t.is_degenerate

    def test_empty(self, rooted):
        assert rooted(";").n_leaves == 0
        assert write_newick(rooted(";")) == ";"


class TestWrite:
    @pytest.mark.parametrize(
        "text, expected",
        [("(b,a);", "(a,b);"), ("((c,b),a);", "(a,(b,c));"), ("a;", "a;"), ("(c,(b,(d,a)));", "(((a,d),b),c);")],
    )
    def test_canonical(self, rooted, text, expected):
        assert write_newick(rooted(text)) == expected

    def test_unrooted_canonical_is_rooting_free(self, unrooted):
        a = unrooted("((a,b),(c,d));")
        b = unrooted("(c,(d,(a,b)));")
        c = unrooted("(d,c,(b,a));")
        assert write_newick(a) == write_newick(b) == write_newick(c)

    @pytest.mark.parametrize("text", ["((a,b),c);", "(a,b,c,d);", "(((a,b),(c,d)),(e,f));"])
    def test_round_trip(self, rooted, text):
        t = rooted(text)
        assert equals_canonical(rooted(write_newick(t)), t)


class TestRestrict:
    def test_suppresses_cherry_remnant(self, rooted):
        t = rooted("((a,b),c);")
        assert write_newick(restrict(t, t.universe.mask("ac"))) == "(a,c);"

    def test_quartet_to_triple(self, rooted):
        t = rooted("((a,b),(c,d));")
        assert write_newick(restrict(t, t.universe.mask("abc"))) == "((a,b),c);"

    def test_disjoint_gives_empty(self, instance):
        inst = instance("((a,b),c);", "d;")
        assert restrict(inst.trees[0], inst.universe.mask("d")).n_leaves == 0

    def test_unrooted(self, unrooted):
        t = unrooted("((a,b),(c,(d,e)));")
        r = restrict(t, t.universe.mask("abde"))
        assert equals_canonical(r, parse_newick("((a,b),(d,e));", "unrooted", universe=t.universe))


class TestCompare:
    def test_unordered_children(self, rooted):
        assert equals_canonical(rooted("((a,b),c);"), rooted("((b,a),c);"))
        assert not equals_canonical(rooted("((a,b),c);"), rooted("((a,c),b);"))

    def test_empty_equals_empty(self, rooted):
        assert equals_canonical(rooted(";"), rooted(";"))

    def test_refines(self, instance):
        resolved, star = instance("((a,b),c);", "(a,b,c);").trees
        assert refines(resolved, star)
        assert not refines(star, resolved)
        assert refines(star, star)

    def test_refines_needs_equal_leafsets(self, instance):
        a, b = instance("((a,b),c);", "(a,b);").trees
        with pytest.raises(ValueError):
            refines(a, b)

    def test_refines_unrooted(self, instance):
        quartet, star = instance("((a,b),(c,d));", "(a,b,c,d);", mode="unrooted").trees
        assert refines(quartet, star)
        assert not refines(star, quartet)

    def test_rootedness_mismatch(self, rooted, unrooted):
        with pytest.raises(ValueError):
            equals_canonical(rooted("(a,b,c);"), unrooted("(a,b,c);"))


class TestRooting:
    def _quartet(self):
        t = parse_newick("((a,b),(c,d));", "unrooted")
        a = t.label.index(0)
        v = t.neighbors[a][0]
        other = next(w for w in t.neighbors[v] if t.label[w] < 0)
        return t, v, other

    def test_root_at_internal(self):
        t, v, _ = self._quartet()
        assert write_newick(root_at(t, v)) == "(a,b,(c,d));"

    def test_root_with_removed_branch(self):
        t, v, other = self._quartet()
        assert write_newick(root_at(t, v, removed=other)) == "(a,b);"

    def test_root_star(self, unrooted):
        t = unrooted("(a,b,c);")
        assert write_newick(root_at(t, t.internal_nodes[0])) == "(a,b,c);"

    def test_root_at_leaf_rejected(self):
        t, _, _ = self._quartet()
        with pytest.raises(ValueError):
            root_at(t, t.label.index(0))

    @pytest.mark.parametrize(
        "text, expected", [("((a,b),(c,d));", "((a,b),(c,d));"), ("(a,b,c);", "(a,b,c);")]
    )
    def test_unroot(self, rooted, unrooted, text, expected):
        assert equals_canonical(unroot(rooted(text)), unrooted(expected))

    def test_unroot_two_leaves_is_degenerate(self, rooted):
        assert unroot(rooted("(a,b);")).is_degenerate

    def test_unroot_then_root_back(self, rooted):
        t = rooted("((a,b),(c,(d,e)));")
        u = unroot(t)
        assert any(write_newick(root_at(u, v)) == "((a,b),c,(d,e));" for v in u.internal_nodes)


class TestInstance:
    def test_shared_universe(self, instance):
        inst = instance("((a,b),c);", "((a,b),d);")
        assert inst.k == 2 and inst.n == 4 and inst.D == 2
        assert inst.rooted and inst.mode == "rooted"

    def test_unrooted_degree(self, instance):
        assert instance("(a,b,c,d);", mode="unrooted").D == 4

    def test_comments_and_blank_lines(self):
        inst = parse_instance("# two trees\n\n((a,b),c);\n  \n(a,d);\n")
        assert inst.k == 2

    def test_error_line_and_column(self):
        with pytest.raises(NewickError) as info:
            parse_instance("((a,b),c);\n  ((a,b),;\n")
        assert (info.value.line, info.value.col) == (2, 10)

    def test_no_trees(self):
        with pytest.raises(NewickError):
            parse_instance("# nothing\n")

    def test_read_instance(self, tmp_path):
        path = tmp_path / "in.nwk"
        path.write_text("((a,b),c);\n((a,b),d);\n")
        assert read_instance(path).n == 4

    def test_rejects_mixed_universes(self, rooted):
        with pytest.raises(ValueError):
            ProblemInstance((rooted("(a,b);"), rooted("(c,d);")), rooted("(a,b);").universe)


class TestCheckers:
    def test_agreement(self, instance):
        inst = instance("((a,b),c);", "((a,b),d);")
        x = parse_newick("(((a,b),c),d);", universe=inst.universe)
        assert is_agreement_supertree(x, inst)
        assert is_agreement_supertree(inst.trees[0], [inst.trees[0]])

    def test_star_does_not_agree_with_resolved(self, instance):
        inst = instance("((a,b),c);", "(a,b,c);")
        assert not is_agreement_supertree(inst.trees[1], [inst.trees[0]])

    def test_compatible(self, instance):
        inst = instance("((a,b),c);", "(a,b,c);")
        resolved, star = inst.trees
        assert is_compatible_supertree(resolved, [star])
        assert not is_compatible_supertree(star, [resolved])
        assert is_compatible_supertree(resolved, inst)


def test_from_nested_round_trip():
    u = LabelUniverse("abcd")
    t = RootedTree.from_nested(((0, 1), (2, 3)), u)
    assert t.nested() is not None
    assert UnrootedTree.from_nested(((0, 1), (2, 3)), u).n_leaves == 4
