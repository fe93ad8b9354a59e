from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realnorm import arcs
from realnorm.cuts import (
    CutDiagram,
    CutPoint,
    arc_diagram,
    build_surface,
    flatten,
    lattice_summary,
    normalize_translation,
    period_lattice,
    periods,
    validate,
)
from realnorm.errors import DegenerateProjection, InvalidInput, InvariantViolation
from realnorm.scalars import ScalarField, same_lattice, vsum


def diagram(pairs, ims):
    return CutDiagram.from_rationals([((p, h), (q, h)) for (p, q), h in zip(pairs, ims)])


def codes(report):
    return [r.split(":")[0] for r in report]


def test_validate_examples():
    assert validate(diagram([(0, 1), (F(1, 2), F(3, 2))], [0, 1])) == []
    f = ScalarField.rational()
    bad = CutDiagram(f, ((CutPoint(f.const(0), f.const(0)), CutPoint(f.const(1), f.const(1))),
                         (CutPoint(f.const(2), f.const(3)), CutPoint(f.const(4), f.const(3)))))
    assert "pair-imaginary-mismatch" in codes(validate(bad))
    assert "pairs-share-imaginary" in codes(validate(diagram([(0, 2), (1, 3)], [0, 0])))
    assert validate(diagram([(0, 2), (1, 3)], [0, 0]), require_generic=False) == []


def test_validate_other_codes():
    assert "pair-order" in codes(validate(diagram([(2, 0), (1, 3)], [0, 1])))
    assert "real-parts-coincide" in codes(validate(diagram([(0, 2), (2, 3)], [0, 1])))
    assert "pair-count" in codes(validate(diagram([(0, 2)], [0])))
    f = ScalarField(("a", "b"), (F(1), F(2)))
    d = CutDiagram(f, ((CutPoint(f.value([2, 0]), f.zero()), CutPoint(f.value([0, 1]), f.zero())),
                       (CutPoint(f.value([5, 0]), f.const(1)), CutPoint(f.value([7, 0]), f.const(1)))))
    assert "embedding-collision" in codes(validate(d))


def test_arc_diagram_examples():
    assert arc_diagram(diagram([(0, 2), (1, 3)], [0, 1])).pairs == ((1, 3), (2, 4))
    assert arc_diagram(diagram([(0, 1), (2, 3)], [0, 1])).pairs == ((1, 2), (3, 4))
    with pytest.raises(DegenerateProjection):
        arc_diagram(diagram([(0, 2), (2, 3)], [0, 1]))


def test_periods_examples():
    assert [v.coords for v in periods(diagram([(0, 2), (1, 3)], [0, 1]))] == [(2,), (2,)]
    f = ScalarField(("1", "e1"), (F(1), F(3, 2)))
    d = CutDiagram(f, ((CutPoint(f.zero(), f.zero()), CutPoint(f.basis(1), f.zero())),
                       (CutPoint(f.const(1), f.const(1)), CutPoint(f.const(3), f.const(1)))))
    assert periods(d)[0] == f.basis(1)
    with pytest.raises(InvariantViolation):
        periods(diagram([(1, 1), (2, 3)], [0, 1]))


def test_build_surface_examples():
    r = build_surface(diagram([(0, 2), (1, 3)], [0, 1]))
    assert (r.genus, r.n_poles, r.pole_orders, r.nondegenerate) == (1, 1, (2,), True)
    r = build_surface(diagram([(0, 1), (2, 3)], [0, 1]))
    assert (r.genus, r.pole_orders) == (0, (2, 1, 1))
    r = build_surface(diagram([(1, 4), (2, 7), (3, 6), (5, 8)], [0, 1, 2, 3]))
    assert r.pole_orders == (2, 1, 1)
    assert not r.nondegenerate


def test_normalize_translation_examples():
    d = normalize_translation(diagram([(0, 2), (1, 3)], [0, 0]))
    assert [(p.re.coords[0], q.re.coords[0]) for p, q in d.pairs] == [(F(-3, 2), F(1, 2)), (F(-1, 2), F(3, 2))]
    assert normalize_translation(d) == d
    f = ScalarField(("1", "a", "b"), (F(1), F(7, 5), F(13, 7)))
    s = CutDiagram(f, ((CutPoint(f.basis(1), f.basis(2)), CutPoint(f.basis(1) * 3, f.basis(2))),
                       (CutPoint(f.basis(2), f.zero()), CutPoint(f.basis(1) * 2 + f.basis(2), f.zero()))))
    n = normalize_translation(s)
    pts = [x for pq in n.pairs for x in pq]
    assert vsum([x.re for x in pts], f).is_zero()
    assert vsum([x.im for x in pts], f).is_zero()


def test_flatten_examples():
    d = diagram([(0, 2), (1, 3)], [0, 1])
    fl = flatten(d)
    assert all(x.im.is_zero() for pq in fl.pairs for x in pq)
    assert [p.re for p, _ in fl.pairs] == [p.re for p, _ in d.pairs]
    assert flatten(fl) == fl
    assert periods(fl) == periods(d)


def test_lattice_summary():
    assert lattice_summary(diagram([(0, 2), (1, 3)], [0, 1])) == {
        "rank": 1, "discrete": True, "totally_incommensurable": False
    }


def test_json_round_trip(fixtures_dir):
    import json

    for path in sorted(fixtures_dir.glob("g*.json")) + [fixtures_dir / "fcd_degenerate.json"]:
        obj = json.loads(path.read_text())
        d = CutDiagram.from_json(obj)
        assert d.to_json() == obj
        assert CutDiagram.from_json(json.loads(d.dumps())) == d


def test_from_json_rejects_garbage():
    with pytest.raises(InvalidInput):
        CutDiagram.from_json({"pairs": []})
    with pytest.raises(InvalidInput):
        CutDiagram.from_json({"field": {"symbols": ["1"], "embeddings": ["1"]}, "pairs": [{"p": {}}]})


@st.composite
def generic_diagrams(draw):
    g = draw(st.integers(1, 3))
    n = 2 * g
    xs = draw(st.lists(st.fractions(-20, 20, max_denominator=6), min_size=2 * n, max_size=2 * n, unique=True))
    ims = draw(st.lists(st.integers(-10, 10), min_size=n, max_size=n, unique=True))
    pairs = [tuple(sorted(xs[2 * i: 2 * i + 2])) for i in range(n)]
    return diagram(pairs, ims)


@given(generic_diagrams(), st.fractions(-5, 5, max_denominator=3), st.fractions(-5, 5, max_denominator=3))
@settings(max_examples=150)
def test_translation_invariance(d, dx, dy):
    f = d.field
    moved = CutDiagram(f, tuple(tuple(CutPoint(x.re + f.const(dx), x.im + f.const(dy)) for x in pq) for pq in d.pairs))
    assert build_surface(moved) == build_surface(d)
    assert build_surface(normalize_translation(d)) == build_surface(d)
    assert same_lattice(period_lattice(d), period_lattice(flatten(d)))
    assert same_lattice(period_lattice(d), period_lattice(normalize_translation(d)))
    assert all(v.sign() > 0 for v in periods(d))


@given(generic_diagrams())
@settings(max_examples=150)
def test_nondegenerate_has_genus_g(d):
    r = build_surface(d)
    if r.nondegenerate:
        assert r.genus == d.g and r.n_poles == 1
    assert r.pole_orders.count(2) == 1 and len(r.pole_orders) == r.n_poles
    assert r.n_poles == arcs.reglue_oracle(r.matching)
