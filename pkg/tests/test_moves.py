import random
from fractions import Fraction as F

import pytest

from _gen import random_diagram, sqrt_field
from realnorm import arcs
from realnorm.errors import (
    AmbiguousCollision,
    DomainError,
    InvalidMove,
    InvalidRetarget,
    PreconditionError,
)
from realnorm.moves import (
    MetricArcDiagram,
    MoveTrace,
    apply_matrix,
    caravan_form,
    caravan_normalize,
    determinant,
    identity,
    intersection_form,
    is_caravan,
    is_symplectic,
    leaf_obstruction,
    matmul,
    retarget_lengths,
    second_vassiliev_move,
    translate_pair,
    transpose,
    undo,
)
from realnorm.scalars import same_lattice

J = [[0, 1], [-1, 0]]


def rat(*pairs):
    return MetricArcDiagram.from_rationals(pairs)


def as_lists(M):
    return [list(r) for r in M]


def test_metric_diagram_invariants():
    with pytest.raises(InvalidMove):
        rat((0, 0), (1, 2))
    with pytest.raises(InvalidMove):
        rat((0, 2), (2, 3))
    m = rat((1, 3), (0, 2))
    assert m.left_order() == [1, 0]
    assert m.matching().pairs == ((1, 3), (2, 4))


def test_intersection_form_examples():
    assert intersection_form(rat((0, 2), (1, 3))) == J
    assert intersection_form(rat((0, 1), (2, 3))) == [[0, 0], [0, 0]]
    caravan = rat((0, 2), (1, 3), (4, 6), (5, 7), (8, 10), (9, 11))
    want = [[0] * 6 for _ in range(6)]
    for k in range(3):
        want[2 * k][2 * k + 1], want[2 * k + 1][2 * k] = 1, -1
    assert intersection_form(caravan) == want == caravan_form(3)


def test_intersection_form_lifts_interlacement():
    rng = random.Random(3)
    for _ in range(50):
        m = random_diagram(2, rng)
        omega = intersection_form(m)
        assert omega == [[-x for x in r] for r in transpose(omega)]
        order = m.left_order()
        adj = arcs.interlacement_graph(m.matching()).adjacency
        for a in range(m.n):
            for b in range(m.n):
                assert abs(omega[order[a]][order[b]]) == adj[a][b]


def test_is_symplectic_examples():
    assert is_symplectic(identity(2), J, J)
    assert not is_symplectic([[1, 0], [0, -1]], J, J)
    assert is_symplectic([[0, 1], [-1, 0]], J, J)
    with pytest.raises(DomainError):
        is_symplectic(identity(2), J, caravan_form(2))


def test_is_caravan_examples():
    assert is_caravan(arcs.Matching(((1, 3), (2, 4))))
    assert is_caravan(arcs.Matching(((1, 3), (2, 4), (5, 7), (6, 8))))
    assert not is_caravan(arcs.Matching(((1, 4), (2, 7), (3, 6), (5, 8))))
    assert not is_caravan(arcs.Matching(((1, 3), (2, 4), (5, 8), (6, 7))))


def test_vassiliev_nested_example():
    m = rat((0, 10), (4, 9))
    out, E = second_vassiliev_move(m, 0, "right", 1)
    assert out.lengths()[0].coords == (5,)
    assert out.lengths()[1] == m.lengths()[1]
    assert as_lists(E) == [[1, -1], [0, 1]]
    assert same_lattice(out.lattice(), m.lattice())
    back, E2 = second_vassiliev_move(out, 0, "right", 1)
    assert back == m
    assert matmul(E2, E) == identity(2)


def test_vassiliev_nonpositive_length():
    with pytest.raises(InvalidMove):
        second_vassiliev_move(rat((0, 3), (-5, 2)), 0, "right", 1)


def test_vassiliev_preconditions():
    m = rat((0, 10), (4, 9), (5, 6))
    with pytest.raises(PreconditionError):
        second_vassiliev_move(m, 0, "left", 2)
    with pytest.raises(PreconditionError):
        second_vassiliev_move(m, 1, "right", 1)


def test_translate_without_collision():
    m = rat((0, 2), (1, 3))
    out, trace = translate_pair(m, 0, m.field.const(F(-1, 2)))
    assert out.matching() == m.matching()
    assert out.arcs[0][0].coords == (F(-1, 2),)
    assert trace.switches() == []
    assert trace.product(2) == identity(2)


def test_translate_nested_until_right_ends_meet():
    m = rat((0, 10), (4, 9))
    out, trace = translate_pair(m, 0, m.field.const(-2))
    assert [e.kind for e in trace.switches()] == ["slide"]
    assert sorted(v.coords[0] for v in out.lengths()) == [5, 5]
    assert trace.switches()[0].over == 1


def test_translate_simultaneous_collisions():
    m = rat((0, 2), (1, 3))
    with pytest.raises(AmbiguousCollision):
        translate_pair(m, 0, m.field.const(2))


def test_translate_stopping_on_a_cut():
    m = rat((0, 2), (F(5, 2), 4))
    with pytest.raises(InvalidMove):
        translate_pair(m, 0, m.field.const(F(1, 2)))


def test_translate_pair_properties():
    rng = random.Random(11)
    for _ in range(60):
        m = random_diagram(2, rng)
        arc = rng.randrange(m.n)
        delta = m.field.value([F(rng.randint(-30, 30), rng.randint(1, 4)) for _ in range(m.field.dim)])
        try:
            out, trace = translate_pair(m, arc, delta)
        except InvalidMove:
            continue
        M = trace.product(m.n)
        assert apply_matrix(M, m.lengths()) == out.lengths()
        assert determinant(M) in (1, -1)
        assert same_lattice(out.lattice(), m.lattice())
        assert arcs.genus(out.matching()) == arcs.genus(m.matching())
        for e in trace.events:
            if e.kind == "slide":
                diff = [(i, j) for i in range(m.n) for j in range(m.n) if e.matrix[i][j] != int(i == j)]
                assert diff == [(e.arc, e.over)] and abs(e.matrix[e.arc][e.over]) == 1
        back, Minv = undo(out, trace)
        assert back == m and matmul(Minv, M) == identity(m.n)


def test_vassiliev_form_transport():
    """The form on the new basis is E·Ω·Eᵀ."""
    rng = random.Random(5)
    checked = 0
    for _ in range(300):
        m = random_diagram(2, rng)
        ends = m.ends()
        for k in range(len(ends) - 1):
            (_, i, s), (_, j, t) = ends[k], ends[k + 1]
            if i == j:
                continue
            for arc, side, over, toward in ((i, s, j, "right"), (j, t, i, "left")):
                try:
                    out, E = second_vassiliev_move(m, arc, ("left", "right")[side], over, toward)
                except InvalidMove:
                    continue
                before, after = intersection_form(m), intersection_form(out)
                assert matmul(matmul(E, before), transpose(E)) == after
                assert arcs.genus(out.matching()) == arcs.genus(m.matching())
                checked += 1
    assert checked > 100


def test_caravan_is_fixed_point():
    for g in (1, 2, 3):
        pairs = []
        for k in range(g):
            pairs += [(4 * k, 4 * k + 2), (4 * k + 1, 4 * k + F(7, 2))]
        m = rat(*pairs)
        out, M, trace = caravan_normalize(m)
        assert out == m
        assert M == tuple(map(tuple, identity(2 * g)))
        assert trace.events == []


def test_caravan_labels_are_renumbered():
    m = rat((1, 3), (0, 2))
    out, M, trace = caravan_normalize(m)
    assert out == rat((0, 2), (1, 3))
    assert as_lists(M) == [[0, 1], [1, 0]]
    assert [e.kind for e in trace.events] == ["relabel"]


def test_normalize_rejects_degenerate():
    with pytest.raises(PreconditionError):
        caravan_normalize(rat((0, 1), (2, 3)))


def test_normalize_ambiguous_keeps_trace():
    m = rat((10, 32), (6, 27), (3, 38), (23, 39))
    with pytest.raises(AmbiguousCollision) as info:
        caravan_normalize(m)
    assert isinstance(info.value.trace, MoveTrace)
    assert info.value.trace.events


@pytest.mark.parametrize("g", [1, 2, 3])
def test_normalize_random(g):
    rng = random.Random(100 + g)
    for _ in range(40):
        m = random_diagram(g, rng)
        out, M, trace = caravan_normalize(m, record=True)
        assert is_caravan(out) and arcs.is_nondegenerate(out.matching())
        assert apply_matrix(M, m.lengths()) == out.lengths()
        assert determinant(M) in (1, -1)
        assert same_lattice(out.lattice(), m.lattice())
        assert matmul(matmul(M, intersection_form(m)), transpose(M)) == intersection_form(out)
        # every resting state keeps the genus and satisfies the matrix identity
        for snap, S in trace.snapshots:
            assert arcs.genus(snap.matching()) == g
            assert apply_matrix(S, m.lengths()) == snap.lengths()
        for before, after in trace.measures:
            assert after < before
        back, Minv = undo(out, trace)
        assert back == m and matmul(Minv, M) == identity(2 * g)
        assert caravan_normalize(out)[0] == out


def test_trace_jsonl_round_trip():
    m = random_diagram(2, random.Random(1))
    _, M, trace = caravan_normalize(m)
    again = MoveTrace.from_jsonl(m.field, trace.to_jsonl())
    assert again.events == trace.events
    assert as_lists(M) == again.product(m.n)


def test_retarget_examples():
    m = rat((0, 2), (1, 3))
    two = m.field.const(2)
    assert retarget_lengths(m, [v * 2 for v in m.lengths()]).matching() == m.matching()
    with pytest.raises(InvalidRetarget):
        retarget_lengths(m, [m.field.const(F(1, 2)), two])
    with pytest.raises(InvalidRetarget):
        retarget_lengths(m, [m.field.zero(), two])
    f = sqrt_field(2)
    e1, e2 = f.basis(0), f.basis(1)
    # the second arc sits left of the first so both length vectors fit
    m = MetricArcDiagram(f, ((f.zero(), e1), (f.const(-1), f.const(-1) + e2)))
    out = retarget_lengths(m, [e1 + e2, e2])
    assert out.matching() == m.matching()
    assert out.lengths() == [e1 + e2, e2]
    assert same_lattice(out.lattice(), m.lattice())


def _vassiliev_walk(m, rng, steps):
    for _ in range(steps):
        ends = m.ends()
        options = []
        for k in range(len(ends) - 1):
            (_, i, s), (_, j, t) = ends[k], ends[k + 1]
            if i != j:
                options += [(i, s, j, "right"), (j, t, i, "left")]
        rng.shuffle(options)
        for arc, side, over, toward in options:
            try:
                m, _ = second_vassiliev_move(m, arc, ("left", "right")[side], over, toward)
                break
            except InvalidMove:
                continue
    return m


def test_leaf_examples():
    f = sqrt_field(2)
    e1, e2 = f.basis(0), f.basis(1)
    half = f.const(F(1, 2))
    m1 = MetricArcDiagram(f, ((f.zero(), e1), (half, half + e2)))
    r = leaf_obstruction(m1, m1)
    assert as_lists(r.matrix) == identity(2) and r.symplectic
    m2 = MetricArcDiagram(f, ((f.zero(), e2), (half, half + e1)))
    r = leaf_obstruction(m1, m2)
    assert as_lists(r.matrix) == [[0, 1], [1, 0]] and r.det == -1 and not r.symplectic
    m3 = MetricArcDiagram(f, ((f.zero(), e1), (half, half + e2 * 2)))
    with pytest.raises(PreconditionError):
        leaf_obstruction(m1, m3)
    with pytest.raises(PreconditionError):
        leaf_obstruction(m1, MetricArcDiagram(f, ((f.zero(), e1), (e1 * 2, e1 * 2 + e2))))


def test_leaf_after_vassiliev_walks():
    rng = random.Random(8)
    for _ in range(30):
        m1 = random_diagram(1, rng)
        m2 = _vassiliev_walk(m1, rng, rng.randint(1, 6))
        assert leaf_obstruction(m1, m2).symplectic
