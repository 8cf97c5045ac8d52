"""Property tests for the structural laws of each layer."""

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from knotdefect.diagram import (canonical_form, compute_faces, knot_walk, parse_diagram,
                                serialize_diagram, validate)
from knotdefect.masred import (MasInstance, build_reduction, double_instance, is_axiom_set,
                               min_axiom_set_brute, preprocess, witness_untangling)
from knotdefect.moves import (IIMinus, IMinus, apply_move, created_crossings, enumerate_moves,
                              inverse_move, sequence_defect)
from knotdefect.untangle import (infer_special_set, replay_special, swap_to_front, untangle_brute,
                                 untangle_special_greedy)
from oracles import faces_by_permutation, min_axioms_oracle, strand_components
from strategies import diagrams, nonempty_diagrams

DELTA = {"I-": -1, "II-": -2, "III": 0, "I+": 1, "II+": 2}


# diagrams

@given(nonempty_diagrams(20))
def test_counts(d):
    assert validate(d)
    assert len(d.edges()) == 2 * d.n
    assert len(compute_faces(d)) == d.n + 2 == faces_by_permutation(d.edges())
    assert len(knot_walk(d)) == 2 * d.n
    assert strand_components(d.edges()) == 1


@given(nonempty_diagrams(20))
def test_faces_partition(d):
    darts = [e for f in compute_faces(d) for e in f]
    assert sorted(darts) == sorted(d.directed_edges())


@given(diagrams(15), st.randoms(use_true_random=False))
def test_canonical_form_relabel_invariant(d, rnd):
    labels = sorted(d.crossings)
    target = rnd.sample(range(10 * len(labels) + 1), len(labels))
    e = d.relabeled(dict(zip(labels, target))) if labels else d
    assert canonical_form(e) == canonical_form(d)


@given(diagrams(15))
def test_text_roundtrip(d):
    text = serialize_diagram(d)
    e = parse_diagram(text)
    assert canonical_form(e) == canonical_form(d)
    assert serialize_diagram(e) == text


# moves

@given(diagrams(10), st.integers(0, 10**6))
def test_insertion_then_removal_restores(d, pick):
    ms = enumerate_moves(d, ["I+", "II+"])
    m = ms[pick % len(ms)]
    e = apply_move(d, m)
    new = created_crossings(d, m)
    undo = IMinus(new[0]) if m.kind == "I+" else IIMinus(*new)
    assert canonical_form(apply_move(e, undo)) == canonical_form(d)


@given(nonempty_diagrams(12))
def test_triangle_self_inverse(d):
    for m in enumerate_moves(d, ["III"]):
        back = inverse_move(d, m)
        assert back.crossings() == m.crossings()
        assert canonical_form(apply_move(apply_move(d, m), back)) == canonical_form(d)


@given(diagrams(10))
def test_crossing_delta_per_move(d):
    for m in enumerate_moves(d):
        e = apply_move(d, m)
        assert e.n - d.n == DELTA[m.kind]
        assert validate(e)


@given(nonempty_diagrams(25))
def test_count_is_quadratic(d):
    # face pairs times winding and order, plus kinks: at most 2 (4n)^2 + 8n + 2n + n + 4
    assert len(enumerate_moves(d)) <= 48 * d.n ** 2 + 4


# solvers

@settings(max_examples=40)
@given(diagrams(4), st.integers(0, 3))
def test_special_greedy_matches_brute(d, k):
    a = untangle_brute(d, k, max_nodes=10**6)
    b = untangle_special_greedy(d, k, max_nodes=10**6)
    assert a.answer == b.answer
    for r in (a, b):
        if r.yes:
            assert sequence_defect(d, r.witness) <= k
            assert len(infer_special_set(d, r.witness)) <= 3 * sequence_defect(d, r.witness)


@settings(max_examples=30)
@given(diagrams(4), st.integers(0, 2))
def test_monotone_in_budget(d, k):
    if untangle_special_greedy(d, k).yes:
        assert untangle_special_greedy(d, k + 1).yes


@settings(max_examples=30)
@given(nonempty_diagrams(5), st.integers(0, 10**6))
def test_swap_keeps_defect(d, pick):
    r = untangle_special_greedy(d, 6, max_nodes=10**6)
    assume(r.yes)
    s = infer_special_set(d, r.witness)
    greedy = [g for g in enumerate_moves(d, ["II-"]) if g.x not in s and g.y not in s]
    assume(greedy)
    g = greedy[pick % len(greedy)]
    out = swap_to_front(d, s, r.witness, g)
    assert out[0] == g
    assert sequence_defect(d, out) == sequence_defect(d, r.witness)
    replay_special(d, s, out)


# axiom sets

@st.composite
def mas_instances(draw, max_sentences=4):
    n = draw(st.integers(0, max_sentences))
    names = [f"s{i}" for i in range(n)]
    rels = []
    if n:
        for _ in range(draw(st.integers(0, 2 * n))):
            prem = draw(st.sets(st.sampled_from(names), max_size=2))
            rels.append((prem, draw(st.sampled_from(names))))
    return MasInstance(names, rels, draw(st.integers(0, n)))


def k_star(inst):
    return min_axioms_oracle(inst.sentences, [(r.premises, r.conclusion) for r in inst.relations])


@given(mas_instances(5))
def test_preprocessing_keeps_answer(inst):
    out = preprocess(inst)
    assert out.is_preprocessed()
    before = k_star(inst) <= inst.k
    after = not out.trivially_no and k_star(out) <= out.k
    assert before == after


@given(mas_instances(4))
def test_doubling_doubles_optimum(inst):
    assert min_axiom_set_brute(double_instance(inst)) == 2 * min_axiom_set_brute(inst)
    assert min_axiom_set_brute(inst) == k_star(inst)


@st.composite
def preprocessed_instances(draw, max_sentences=3):
    n = draw(st.integers(2, max_sentences))
    names = [f"s{i}" for i in range(n)]
    rels = []
    for t in names:
        others = [x for x in names if x != t]
        for _ in range(draw(st.integers(1, 2))):
            rels.append((draw(st.sets(st.sampled_from(others), min_size=1, max_size=2)), t))
    inst = MasInstance(names, rels, n)
    return MasInstance(names, rels, min_axiom_set_brute(inst))


@settings(max_examples=5)
@given(preprocessed_instances(), st.randoms(use_true_random=False))
def test_forward_direction(inst, rnd):
    inst = preprocess(inst)
    assert inst.is_preprocessed()
    lay = build_reduction(inst)
    axioms = [a for a in inst.sentences if rnd.random() < 0.4]
    for s in inst.sentences:
        if s not in axioms and not is_axiom_set(inst, axioms):
            axioms.append(s)
    ms = witness_untangling(lay, axioms)
    assert sequence_defect(lay.diagram, ms) == 2 * len(axioms) >= 2 * inst.k
