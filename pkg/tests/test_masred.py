import pytest

from knotdefect.diagram import compute_faces, knot_walk, parse_diagram, validate
from knotdefect.masred import (
    MasError,
    MasInstance,
    MasSyntaxError,
    build_reduction,
    closure,
    cycle2,
    double_instance,
    format_mas,
    greedy_bigons,
    is_axiom_set,
    min_axiom_set_brute,
    parse_mas,
    preprocess,
    stuck_after,
    witness_untangling,
)
from knotdefect.masred.planar import LayoutError, polyline_diagram
from knotdefect.moves import IMinus, sequence_defect
from knotdefect.untangle import infer_special_set
from oracles import horn_closure, min_axioms_oracle


def pair_gate():
    return MasInstance(list("abc"), [({"a"}, "b"), ({"b"}, "a"), ({"a", "b"}, "c"), ({"c"}, "a")], 1)


def two_cycles():
    return MasInstance(list("abcd"), [({"a"}, "b"), ({"b"}, "a"), ({"c"}, "d"), ({"d"}, "c"),
                                      ({"a", "c"}, "d")], 2)


def oracle_k(inst):
    return min_axioms_oracle(inst.sentences, [(r.premises, r.conclusion) for r in inst.relations])


@pytest.fixture(scope="module")
def layout():
    return build_reduction(cycle2())


# text format

def test_parse_and_format(data_dir):
    inst = parse_mas((data_dir / "pair_gate.mas").read_text())
    assert inst.sentences == ["a", "b", "c"] and inst.k == 1
    assert parse_mas(format_mas(inst)).relations == inst.relations


def test_empty_premises_parse(data_dir):
    inst = parse_mas((data_dir / "needs_prep.mas").read_text())
    assert not inst.is_preprocessed()


@pytest.mark.parametrize("text", [
    "", "mas v2\n", "mas v1\nsentences a\n", "mas v1\nsentences a\nk x\n",
    "mas v1\nsentences a\nk 1\nrel a b\n", "mas v1\nsentences a\nk 1\nrel a <- b\n",
    "mas v1\nsentences a a\nk 1\n", "mas v1\nsentences a\nk 1\nfoo\n",
])
def test_bad_mas_text(text):
    with pytest.raises(MasSyntaxError):
        parse_mas(text)


# closure and axiom sets

def test_closure_examples():
    c = cycle2()
    assert closure(c, {"a"}) == {"a", "b"}
    assert closure(c, set()) == frozenset()
    assert closure(c, c.sentences) == set(c.sentences)


def test_closure_matches_horn_oracle():
    inst = two_cycles()
    rels = [(r.premises, r.conclusion) for r in inst.relations]
    for a in (set(), {"a"}, {"c"}, {"a", "c"}, {"b", "d"}):
        assert closure(inst, a) == horn_closure(inst.sentences, rels, a)


def test_unknown_sentence_in_closure():
    with pytest.raises(MasError):
        closure(cycle2(), {"z"})


def test_min_axiom_set_examples():
    assert min_axiom_set_brute(cycle2()) == 1 == oracle_k(cycle2())
    assert min_axiom_set_brute(MasInstance([], [], 0)) == 0
    inst = MasInstance(list("abc"), [({"a"}, "b"), ({"b"}, "a"), ({"a", "b"}, "c")], 1)
    assert min_axiom_set_brute(inst) == 1 == oracle_k(inst)


def test_hand_instances_have_expected_optimum():
    assert min_axiom_set_brute(pair_gate()) == 1 == oracle_k(pair_gate())
    assert min_axiom_set_brute(two_cycles()) == 2 == oracle_k(two_cycles())


# preprocessing

def test_preprocess_free_chain():
    # a is free, which leaves b with an empty premise set, so b is free too
    inst = MasInstance(["a", "b"], [(set(), "a"), ({"a"}, "b")], 1)
    out = preprocess(inst)
    assert out.sentences == [] and out.k == 1
    assert oracle_k(inst) == 0


def test_preprocess_forced_sentence():
    inst = MasInstance(["a", "b"], [({"a"}, "b")], 1)
    out = preprocess(inst)
    assert out.sentences == [] and out.k == 0


def test_preprocess_fixed_point():
    out = preprocess(cycle2())
    assert out.sentences == ["a", "b"] and out.relations == cycle2().relations and out.k == 1


def test_preprocess_self_loop():
    out = preprocess(MasInstance(["a"], [({"a"}, "a")], 1))
    assert out.sentences == [] and out.relations == [] and out.k == 0


def test_preprocess_can_go_negative():
    out = preprocess(MasInstance(["a", "b"], [], 1))
    assert out.trivially_no


def test_preprocessed_instances_pass_check():
    for inst in (cycle2(), pair_gate(), two_cycles()):
        assert inst.is_preprocessed()


# doubling

def test_double_cycle2():
    dbl = double_instance(cycle2())
    assert len(dbl.sentences) == 4 and len(dbl.relations) == 4
    assert min_axiom_set_brute(dbl) == 2 == oracle_k(dbl)
    assert dbl.k == 2


def test_double_empty():
    dbl = double_instance(MasInstance([], [], 0))
    assert dbl.sentences == [] and dbl.relations == []


def test_doubled_has_no_small_axiom_set():
    from itertools import combinations
    dbl = double_instance(pair_gate())
    for size in range(2):
        assert not any(is_axiom_set(dbl, a) for a in combinations(dbl.sentences, size))


def test_double_name_clash():
    with pytest.raises(MasError):
        double_instance(MasInstance(["a", "a'"], [({"a"}, "a'"), ({"a'"}, "a")], 1))


# planar helper

def test_polyline_rejects_equal_heights():
    pts = [(0, 0), (4, 0), (4, 4), (2, 4), (2, -2), (0, -2)]
    with pytest.raises(LayoutError):
        polyline_diagram(pts, [0] * len(pts))


def test_polyline_simple_kink():
    # a figure with one self crossing
    pts = [(0, 0), (4, 0), (4, 4), (2, 4), (2, -2), (0, -2)]
    d, info, _ = polyline_diagram(pts, [1, 0, 0, 0, 0, 0])
    assert d.n == 1 and validate(d)
    assert info[0].over_seg == 0


# the reduction

def test_non_preprocessed_input_is_rejected():
    with pytest.raises(MasError):
        build_reduction(MasInstance(["a"], [({"a"}, "a")], 1))
    with pytest.raises(MasError):
        build_reduction(MasInstance(["a"], [], -1))


def test_cycle2_layout_is_valid(layout):
    d = layout.diagram
    assert validate(d)
    assert len(compute_faces(d)) == d.n + 2
    assert len(knot_walk(d)) == 2 * d.n
    assert d.n == 900


def test_cycle2_atlas_counts(layout):
    for s in ("a", "b", "a'", "b'"):
        xs = [n for n in layout.atlas if n.startswith("x^") and n.endswith(f"({s})")]
        assert len(xs) == 64
        for key in ("y", "c"):
            assert f"{key}({s})" in layout.atlas


def test_cycle2_z_crossings(layout):
    zs = sorted(n for n in layout.atlas if n.startswith("z^"))
    assert zs == sorted([
        "z^1_1(a,b)", "z^2_1(a,b)", "z^1_1(b,a)", "z^2_1(b,a)",
        "z^1_1(a',b')", "z^2_1(a',b')", "z^1_1(b',a')", "z^2_1(b',a')",
    ])


def test_atlas_ids_are_distinct(layout):
    ids = list(layout.atlas.values())
    assert len(ids) == len(set(ids))
    assert set(ids) <= layout.diagram.crossings


def test_q_sets_are_disjoint():
    lay = build_reduction(two_cycles())
    qs = [lay.q_set(s) for s in lay.instance.sentences]
    for i in range(len(qs)):
        for j in range(i + 1, len(qs)):
            assert not qs[i] & qs[j]


def test_z_crossings_follow_premises():
    inst = pair_gate()
    lay = build_reduction(inst)
    want = set()
    for r in double_instance(inst).relations:
        j = [x.premises for x in double_instance(inst).incoming(r.conclusion)].index(r.premises) + 1
        for t in r.premises:
            want |= {f"z^1_{j}({r.conclusion},{t})", f"z^2_{j}({r.conclusion},{t})"}
    assert {n for n in lay.atlas if n.startswith("z^")} == want


def test_x_crossings_per_adjacent_pair():
    lay = build_reduction(pair_gate())
    for s, gd in lay.gadgets.items():
        # with one relation the single pair (0, 1) carries 64, split 32/32
        for i in range(gd.l + 1 if gd.l > 1 else 2):
            names = [f"x^{n}_{i}({s})" for n in range(1, 33)]
            assert all(n in lay.atlas for n in names)


def test_reduction_is_deterministic():
    a, b = build_reduction(pair_gate()), build_reduction(pair_gate())
    assert a.knot_text() == b.knot_text()
    assert a.atlas_text() == b.atlas_text()


def test_knot_text_reparses(layout):
    d = parse_diagram(layout.knot_text())
    assert d.adj == layout.diagram.adj


# witnesses

def test_cycle2_witness(layout):
    ms = witness_untangling(layout, ["a"])
    assert sequence_defect(layout.diagram, ms) == 2
    assert sum(isinstance(m, IMinus) for m in ms) == 2
    assert len(ms) == (layout.diagram.n + 2) // 2


def test_witness_for_all_sentences(layout):
    ms = witness_untangling(layout, ["a", "b"])
    assert sequence_defect(layout.diagram, ms) == 4


def test_witness_rejects_non_axiom_set(layout):
    with pytest.raises(MasError):
        witness_untangling(layout, [])
    with pytest.raises(MasError):
        witness_untangling(layout, ["a'"])


def test_witness_special_set_bound(layout):
    ms = witness_untangling(layout, ["b"])
    assert len(infer_special_set(layout.diagram, ms)) <= 6


@pytest.mark.parametrize("inst", [pair_gate(), two_cycles()], ids=["pair_gate", "two_cycles"])
def test_exactly_axiom_sets_unlock(inst):
    from itertools import combinations
    lay = build_reduction(inst)
    for size in range(len(inst.sentences) + 1):
        for a in combinations(inst.sentences, size):
            left = stuck_after(lay, a)
            assert (left == 0) == is_axiom_set(inst, a), a


def test_greedy_alone_does_not_untangle(layout):
    end, _ = greedy_bigons(layout.diagram)
    assert end.n > 0
