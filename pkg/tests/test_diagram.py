import pytest

from knotdefect.diagram import (
    Diagram,
    DiagramError,
    DiagramSyntaxError,
    NotAKnotError,
    canonical_form,
    compute_faces,
    figure_example,
    generate_random_unknot,
    knot_walk,
    parse_diagram,
    serialize_diagram,
    single_kink,
    unknot,
    validate,
)
from oracles import faces_by_permutation, strand_components


def face_set(d):
    return {frozenset(tuple(e) for e in f) for f in compute_faces(d)}


# validation

def test_unknot_is_valid():
    assert validate(unknot()).ok


def test_figure_example_is_valid():
    assert validate(figure_example())


def test_deleted_edge_reports_coverage_and_count():
    edges = [(0, 0, 3, 4), (1, 1, 2, 3), (0, 1, 2, 4)]
    rep = validate(Diagram.from_edges(edges, outer=(0, 4)))
    assert not rep
    text = " ".join(rep.problems)
    assert "slot-coverage" in text
    assert "edge-count" in text


def test_two_component_system_is_rejected():
    # two separate kinks: every slot is covered but the strand closes early
    edges = [(0, 0, 1, 2), (0, 0, 3, 4), (1, 1, 1, 2), (1, 1, 3, 4)]
    rep = validate(Diagram.from_edges(edges, outer=(0, 2)))
    assert not rep
    with pytest.raises(NotAKnotError):
        knot_walk(Diagram.from_edges(edges, outer=(0, 2)))


def test_outer_marker_must_exist():
    d = figure_example().with_outer(None)
    assert not validate(d)


# faces

def test_figure_example_faces_match_published_list():
    x, y = 0, 1
    want = {
        frozenset({(x, x, 3, 4)}),
        frozenset({(x, y, 1, 1), (y, x, 4, 2)}),
        frozenset({(y, y, 2, 3)}),
        frozenset({(x, x, 4, 3), (y, x, 1, 1), (y, y, 3, 2), (x, y, 2, 4)}),
    }
    assert face_set(figure_example()) == want


def test_single_kink_faces():
    faces = face_set(single_kink())
    assert len(faces) == 3 == faces_by_permutation(single_kink().edges())
    assert frozenset({(0, 0, 1, 2)}) in faces


def test_unknot_has_one_implicit_face():
    assert compute_faces(unknot()) == [()]


def test_faces_partition_directed_edges():
    d = generate_random_unknot(5, 15)
    darts = [e for f in compute_faces(d) for e in f]
    assert len(darts) == len(set(darts)) == 4 * d.n


def test_outer_marker_lies_on_exactly_one_face():
    d = figure_example()
    assert sum(d.outer in f for f in d.face_tails()) == 1
    assert len(d.outer_face()) == 4


# knot walk

def test_figure_example_walk_has_length_four():
    walk = knot_walk(figure_example())
    assert len(walk) == 4
    assert strand_components(figure_example().edges()) == 1


def test_unknot_walk_is_empty():
    assert knot_walk(unknot()) == []


def test_walk_exits_opposite_slot():
    walk = knot_walk(generate_random_unknot(3, 10))
    for a, b in zip(walk, walk[1:] + walk[:1]):
        assert b.tail == a.head
        assert b.out_slot == (a.in_slot + 1) % 4 + 1


# canonical form

def test_canonical_form_ignores_labels():
    d = generate_random_unknot(11, 12)
    perm = {v: 100 + (7 * i) % (d.n + 3) for i, v in enumerate(sorted(d.crossings))}
    assert len(set(perm.values())) == d.n
    assert canonical_form(d) == canonical_form(d.relabeled(perm))


def test_canonical_form_separates_fixtures():
    assert canonical_form(figure_example()) != canonical_form(single_kink())


def test_canonical_form_sees_outer_face():
    d = figure_example()
    keys = {canonical_form(d.with_outer(f[0])) for f in d.face_tails()}
    # the two monogon faces are swapped by a symmetry, the others differ
    assert canonical_form(d) in keys
    assert len(keys) >= 3


# text format

def test_roundtrip_figure_example():
    d = figure_example()
    assert canonical_form(parse_diagram(serialize_diagram(d))) == canonical_form(d)


def test_serialize_parse_is_identity_on_canonical_text():
    text = serialize_diagram(generate_random_unknot(8, 9))
    assert serialize_diagram(parse_diagram(text)) == text


def test_comments_and_blank_lines(data_dir):
    d = parse_diagram((data_dir / "fig.knot").read_text())
    assert d == figure_example()


def test_zero_crossings_is_unknot():
    assert parse_diagram("diagram v1\ncrossings 0\n") == unknot()


def test_slot_out_of_range_is_syntax_error():
    with pytest.raises(DiagramSyntaxError) as exc:
        parse_diagram("diagram v1\ncrossings 1\nedge 0 1 0 5\nedge 0 3 0 4\nouter 0 1\n")
    assert exc.value.line == 3


def test_bad_header():
    with pytest.raises(DiagramSyntaxError):
        parse_diagram("hello\n")


def test_semantic_error_goes_through_validation():
    with pytest.raises(DiagramError):
        parse_diagram("diagram v1\ncrossings 1\nedge 0 1 0 2\nouter 0 2\n")


# random generation

def test_zero_steps_gives_unknot():
    assert generate_random_unknot(123, 0) == unknot()


def test_one_insertion_gives_single_kink():
    d = generate_random_unknot(1, 1, kinds=("I+",))
    assert d.n == 1 and validate(d)


def test_generation_is_deterministic():
    a = generate_random_unknot(42, 20)
    b = generate_random_unknot(42, 20)
    assert serialize_diagram(a) == serialize_diagram(b)


def test_local_mode_grows_valid_diagrams():
    d = generate_random_unknot(9, 60, mode="local")
    assert validate(d)
    assert len(compute_faces(d)) == d.n + 2
