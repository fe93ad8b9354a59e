"""Cut diagrams in the plane and the surfaces glued from them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import arcs
from .errors import (
    DegenerateProjection,
    EmbeddingCollision,
    InvalidInput,
    InvariantViolation,
)
from .scalars import (
    EQUAL,
    LESS,
    PeriodLattice,
    RealValue,
    ScalarField,
    compare,
    is_discrete,
    is_totally_incommensurable,
    q_rank,
    vsum,
)


@dataclass(frozen=True)
class CutPoint:
    re: RealValue
    im: RealValue

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, field: ScalarField, obj) -> "CutPoint":
        if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
            raise InvalidInput("a cut point needs re and im")
        return cls(RealValue.from_json(field, obj["re"]), RealValue.from_json(field, obj["im"]))


@dataclass(frozen=True)
class CutDiagram:
    field: ScalarField
    pairs: tuple[tuple[CutPoint, CutPoint], ...]

    @property
    def g(self) -> int:
        return len(self.pairs) // 2

    @classmethod
    def from_rationals(cls, pairs, field: ScalarField | None = None) -> "CutDiagram":
        """Build from ``[((re_p, im_p), (re_q, im_q)), ...]`` with rational entries."""
        field = field or ScalarField.rational()
        out = []
        for (pr, pi), (qr, qi) in pairs:
            out.append(
                (
                    CutPoint(field.const(pr), field.const(pi)),
                    CutPoint(field.const(qr), field.const(qi)),
                )
            )
        return cls(field, tuple(out))

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "pairs": [{"p": p.to_json(), "q": q.to_json()} for p, q in self.pairs],
        }

    @classmethod
    def from_json(cls, obj) -> "CutDiagram":
        if not isinstance(obj, dict) or "field" not in obj or "pairs" not in obj:
            raise InvalidInput("a cut diagram needs field and pairs")
        field = ScalarField.from_json(obj["field"])
        if not isinstance(obj["pairs"], list):
            raise InvalidInput("pairs must be a list")
        pairs = []
        for item in obj["pairs"]:
            if not isinstance(item, dict) or "p" not in item or "q" not in item:
                raise InvalidInput("each pair needs p and q")
            pairs.append((CutPoint.from_json(field, item["p"]), CutPoint.from_json(field, item["q"])))
        return cls(field, tuple(pairs))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class SurfaceReport:
    genus: int
    n_poles: int
    pole_orders: tuple[int, ...]
    periods: tuple[RealValue, ...]
    nondegenerate: bool
    matching: arcs.Matching


def _safe_compare(a: RealValue, b: RealValue):
    try:
        return compare(a, b)
    except EmbeddingCollision:
        return None


def validate(d: CutDiagram, require_generic: bool = True) -> list[str]:
    """Every violated constraint, as ``"code: detail"`` strings; empty if valid."""
    out = []
    if len(d.pairs) == 0 or len(d.pairs) % 2:
        out.append(f"pair-count: expected a positive even number of pairs, got {len(d.pairs)}")
    for i, (p, q) in enumerate(d.pairs, 1):
        for v in (p.re, p.im, q.re, q.im):
            if v.field != d.field:
                out.append(f"field-mismatch: pair {i}")
                break
        if p.im.coords != q.im.coords:
            out.append(f"pair-imaginary-mismatch: pair {i}")
        c = _safe_compare(p.re, q.re)
        if c is None:
            out.append(f"embedding-collision: pair {i} real parts")
        elif c != LESS:
            out.append(f"pair-order: pair {i} needs Re p < Re q")
    if require_generic:
        ims = [p.im for p, _ in d.pairs]
        for i in range(len(ims)):
            for j in range(i + 1, len(ims)):
                if ims[i].coords == ims[j].coords:
                    out.append(f"pairs-share-imaginary: pairs {i + 1} and {j + 1}")
        res = [x.re for pq in d.pairs for x in pq]
        for i in range(len(res)):
            for j in range(i + 1, len(res)):
                c = _safe_compare(res[i], res[j])
                if c is None:
                    out.append(f"embedding-collision: cut points {i + 1} and {j + 1}")
                elif c == EQUAL:
                    out.append(f"real-parts-coincide: cut points {i + 1} and {j + 1}")
    return out


def _order_positions(values: Sequence[RealValue]) -> list[int]:
    """Indices of ``values`` sorted increasingly; ties are an error."""
    import functools

    def cmp(i, j):
        try:
            c = compare(values[i], values[j])
        except EmbeddingCollision as exc:
            raise DegenerateProjection(str(exc)) from exc
        if c == EQUAL:
            raise DegenerateProjection(f"two cuts share the real part {values[i]}")
        return c

    return sorted(range(len(values)), key=functools.cmp_to_key(cmp))


def arc_diagram(d: CutDiagram) -> arcs.Matching:
    res = [x.re for pq in d.pairs for x in pq]
    order = _order_positions(res)
    rank = {idx: pos + 1 for pos, idx in enumerate(order)}
    return arcs.Matching(tuple((rank[2 * i], rank[2 * i + 1]) for i in range(len(d.pairs))))


def periods(d: CutDiagram) -> list[RealValue]:
    out = []
    for i, (p, q) in enumerate(d.pairs, 1):
        length = q.re - p.re
        try:
            s = length.sign()
        except EmbeddingCollision as exc:
            raise InvariantViolation(f"period of pair {i} has undecidable sign") from exc
        if s <= 0:
            raise InvariantViolation(f"period of pair {i} is not positive: {length}")
        out.append(length)
    return out


def period_lattice(d: CutDiagram) -> PeriodLattice:
    return PeriodLattice(d.field, tuple(periods(d)))


def build_surface(d: CutDiagram) -> SurfaceReport:
    m = arc_diagram(d)
    n_poles = arcs.component_count(m)
    return SurfaceReport(
        genus=arcs.genus(m),
        n_poles=n_poles,
        pole_orders=(2,) + (1,) * (n_poles - 1),
        periods=tuple(periods(d)),
        nondegenerate=n_poles == 1,
        matching=m,
    )


def normalize_translation(d: CutDiagram) -> CutDiagram:
    """Shift so that the sum of all cut points is zero."""
    pts = [x for pq in d.pairs for x in pq]
    k = Fraction(len(pts))
    mean_re = vsum([x.re for x in pts], d.field) / k
    mean_im = vsum([x.im for x in pts], d.field) / k
    return CutDiagram(
        d.field,
        tuple(
            (CutPoint(p.re - mean_re, p.im - mean_im), CutPoint(q.re - mean_re, q.im - mean_im))
            for p, q in d.pairs
        ),
    )


def flatten(d: CutDiagram) -> CutDiagram:
    zero = d.field.zero()
    return CutDiagram(
        d.field, tuple((CutPoint(p.re, zero), CutPoint(q.re, zero)) for p, q in d.pairs)
    )


def lattice_summary(d: CutDiagram) -> dict:
    lat = period_lattice(d)
    return {
        "rank": q_rank(lat),
        "discrete": is_discrete(lat),
        "totally_incommensurable": is_totally_incommensurable(lat, d.g),
    }
