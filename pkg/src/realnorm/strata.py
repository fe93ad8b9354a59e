"""Strata of real-normalized differentials on elliptic curves.

A configuration is either a smooth cut diagram with two cut pairs, in which
degenerate incidences are encoded as coordinate coincidences, or a singular
curve whose normalization has the two points ``z`` and ``-z`` glued.

Incidence encodings:

* a zero lies on a cut of the other pair when one of its cut ends has the
  same real part as an end of the other pair and a strictly smaller
  imaginary part (the cut hangs down from its top);
* a double zero on a smooth curve is two pairs at the same height sharing
  exactly one cut end;
* a zero on both cuts of the other pair is a lower pair whose two ends have
  the real parts of the upper pair's two ends.
"""

from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cuts import CutPoint
from .errors import (
    DomainError,
    EmbeddingCollision,
    InvalidInput,
    PreconditionError,
    Unclassifiable,
)
from .scalars import EQUAL, GREATER, LESS, RealValue, ScalarField, as_fraction, compare

DIMENSIONS = {
    "R1_4": 4,
    "R1_4_0": 3,
    "R1_3_cell": 3,
    "R1_3_0": 2,
    "R1_2_smooth": 2,
    "R1_2_sing": 2,
    "R1_2_0": 1,
    "R1_1": 1,
}


@dataclass(frozen=True)
class StratumLabel:
    name: str
    k: int | None = None

    def __post_init__(self):
        if self.name not in DIMENSIONS:
            raise InvalidInput(f"unknown stratum {self.name!r}")
        if (self.name == "R1_3_cell") != (self.k is not None):
            raise InvalidInput("only R1_3_cell carries a cell index")
        if self.k is not None and self.k not in (1, 2, 3):
            raise InvalidInput("cell index must be 1, 2 or 3")

    @property
    def dimension(self) -> int:
        return DIMENSIONS[self.name]

    def __str__(self):
        return self.name if self.k is None else f"{self.name}({self.k})"

    @classmethod
    def parse(cls, text: str) -> "StratumLabel":
        m = re.fullmatch(r"(\w+?)(?:\((\d)\))?", text.strip())
        if not m:
            raise InvalidInput(f"cannot parse stratum label {text!r}")
        return cls(m.group(1), int(m.group(2)) if m.group(2) else None)

    def to_json(self) -> dict:
        return {"label": str(self), "dimension": self.dimension}


R1_4 = StratumLabel("R1_4")
R1_4_0 = StratumLabel("R1_4_0")
R1_3_0 = StratumLabel("R1_3_0")
R1_2_SMOOTH = StratumLabel("R1_2_smooth")
R1_2_SING = StratumLabel("R1_2_sing")
R1_2_0 = StratumLabel("R1_2_0")
R1_1 = StratumLabel("R1_1")


def r1_3_cell(k: int) -> StratumLabel:
    return StratumLabel("R1_3_cell", k)


ALL_LABELS = (R1_4, R1_4_0, r1_3_cell(1), r1_3_cell(2), r1_3_cell(3), R1_3_0, R1_2_SMOOTH, R1_2_SING, R1_2_0, R1_1)


@dataclass(frozen=True)
class Smooth:
    field: ScalarField
    pairs: tuple[tuple[CutPoint, CutPoint], tuple[CutPoint, CutPoint]]

    def __post_init__(self):
        if len(self.pairs) != 2:
            raise InvalidInput("a smooth genus-one configuration has two cut pairs")
        for i, (p, q) in enumerate(self.pairs, 1):
            if p.im.coords != q.im.coords:
                raise InvalidInput(f"pair {i} has ends at different heights")
            try:
                if compare(p.re, q.re) != LESS:
                    raise InvalidInput(f"pair {i} needs Re p < Re q")
            except EmbeddingCollision as exc:
                raise InvalidInput(str(exc)) from exc

    def to_json(self) -> dict:
        return {
            "kind": "smooth",
            "field": self.field.to_json(),
            "pairs": [{"p": p.to_json(), "q": q.to_json()} for p, q in self.pairs],
        }


@dataclass(frozen=True)
class Singular:
    """Normalization with the points ``node`` and ``-node`` glued."""

    field: ScalarField
    node: CutPoint

    def __post_init__(self):
        if self.node.re.is_zero() and self.node.im.is_zero():
            raise InvalidInput("the glued points must be distinct")

    def to_json(self) -> dict:
        return {"kind": "singular", "field": self.field.to_json(), "node": self.node.to_json()}


Configuration = Smooth | Singular


def from_json(obj) -> Configuration:
    if not isinstance(obj, dict) or obj.get("kind") not in ("smooth", "singular"):
        raise InvalidInput('configuration needs "kind": "smooth" or "singular"')
    field = ScalarField.from_json(obj["field"]) if "field" in obj else ScalarField.rational()
    if obj["kind"] == "singular":
        if "node" not in obj:
            raise InvalidInput("singular configuration needs a node")
        return Singular(field, CutPoint.from_json(field, obj["node"]))
    pairs = obj.get("pairs")
    if not isinstance(pairs, list) or len(pairs) != 2:
        raise InvalidInput("smooth configuration needs two pairs")
    out = []
    for item in pairs:
        if not isinstance(item, dict) or "p" not in item or "q" not in item:
            raise InvalidInput("each pair needs p and q")
        out.append((CutPoint.from_json(field, item["p"]), CutPoint.from_json(field, item["q"])))
    return Smooth(field, tuple(out))


def dumps(c: Configuration) -> str:
    return json.dumps(c.to_json(), indent=2, sort_keys=True) + "\n"


def _cmp(a: RealValue, b: RealValue) -> int:
    try:
        return compare(a, b)
    except EmbeddingCollision as exc:
        raise Unclassifiable(f"cannot order: {exc}") from exc


@dataclass(frozen=True)
class _Cell:
    """Roles in a three-cut configuration with distinct heights."""

    upper: int
    d: int  # side of the upper pair carrying the lower end
    w: int  # side of the lower pair that is free
    k: int
    canonical: bool


def _coincidences(c: Smooth) -> list[tuple[int, int]]:
    (a, b) = c.pairs
    out = []
    for s, x in enumerate(a):
        for t, y in enumerate(b):
            if _cmp(x.re, y.re) == EQUAL:
                out.append((s, t))
    return out


def _crossing(c: Smooth) -> bool:
    (p0, q0), (p1, q1) = c.pairs
    first = _cmp(p0.re, p1.re) == LESS
    (l1, r1), (l2, r2) = ((p0, q0), (p1, q1)) if first else ((p1, q1), (p0, q0))
    return _cmp(l2.re, r1.re) == LESS and _cmp(r1.re, r2.re) == LESS


def _cell(c: Smooth, hits: list[tuple[int, int]]) -> _Cell:
    upper = 0 if _cmp(c.pairs[0][0].im, c.pairs[1][0].im) == GREATER else 1
    lower = 1 - upper
    s, t = hits[0]
    d_side, lower_side = (s, t) if upper == 0 else (t, s)
    dpos = c.pairs[upper][d_side].re
    upos = c.pairs[upper][1 - d_side].re
    wpos = c.pairs[lower][1 - lower_side].re
    w_left_of_d = _cmp(wpos, dpos) == LESS
    w_left_of_u = _cmp(wpos, upos) == LESS
    d_left_of_u = _cmp(dpos, upos) == LESS
    if w_left_of_d != w_left_of_u:
        k, canonical = 1, d_left_of_u
    elif w_left_of_d:
        k, canonical = 2, d_left_of_u
    else:
        k, canonical = 3, not d_left_of_u
    return _Cell(upper, d_side, 1 - lower_side, k, canonical)


def classify(c: Configuration) -> StratumLabel:
    if isinstance(c, Singular):
        if c.node.re.is_zero():
            return R1_1
        if c.node.im.is_zero():
            return R1_2_0
        return R1_2_SING
    if not isinstance(c, Smooth):
        raise InvalidInput(f"not a configuration: {c!r}")
    hits = _coincidences(c)
    flat = c.pairs[0][0].im.coords == c.pairs[1][0].im.coords
    if flat:
        if not hits:
            if _crossing(c):
                return R1_4_0
            raise Unclassifiable("flat pairs do not interleave, so the curve has more than one pole")
        if len(hits) == 1:
            return R1_3_0
        raise Unclassifiable("the two pairs coincide")
    if not hits:
        if _crossing(c):
            return R1_4
        raise Unclassifiable("pairs do not interleave, so the curve has more than one pole")
    if len(hits) == 1:
        return r1_3_cell(_cell(c, hits).k)
    return R1_2_SMOOTH


def coords_R1_4_0(c: Configuration) -> tuple[RealValue, RealValue, RealValue]:
    """Consecutive gaps between the four cut positions of a flat generic diagram."""
    if classify(c) != R1_4_0:
        raise PreconditionError("configuration is not in R1_4_0")
    xs = sorted((x.re for pq in c.pairs for x in pq), key=_sort_key)
    return xs[1] - xs[0], xs[2] - xs[1], xs[3] - xs[2]


_sort_key = functools.cmp_to_key(_cmp)


def is_canonical_R1_3(c: Configuration) -> bool:
    """Walking right along the low line, the double cut leads to the nearest cut of its pair."""
    label = classify(c)
    if label.name != "R1_3_cell":
        raise PreconditionError(f"configuration is in {label}, not an R1_3 cell")
    return _cell(c, _coincidences(c)).canonical


def canonical_R1_3(c: Configuration) -> Smooth:
    """The canonical member of the pair of equivalent diagrams for an R1_3 cell.

    The two members share their three cut positions; they differ in which
    end of the upper pair carries the lower pair's end.
    """
    label = classify(c)
    if label.name != "R1_3_cell":
        raise PreconditionError(f"configuration is in {label}, not an R1_3 cell")
    cell = _cell(c, _coincidences(c))
    if cell.canonical:
        return c
    lower = 1 - cell.upper
    upper_pair = c.pairs[cell.upper]
    free = c.pairs[lower][cell.w]
    moved = CutPoint(upper_pair[1 - cell.d].re, free.im)
    ends = sorted((free, moved), key=lambda x: _sort_key(x.re))
    pairs = list(c.pairs)
    pairs[lower] = tuple(ends)
    return Smooth(c.field, tuple(pairs))


def attachment(label: StratumLabel) -> list[StratumLabel]:
    """Strata in whose closure ``label`` is attached, with multiplicity."""
    if label == R1_4_0:
        return [R1_3_0, R1_3_0, R1_3_0]
    if label.name == "R1_3_cell":
        return [R1_3_0]
    if label in (R1_2_SMOOTH, R1_2_SING):
        return [R1_2_0]
    return []


def _smooth(field: ScalarField, pairs) -> Smooth:
    return Smooth(
        field,
        tuple(
            (CutPoint(field.const(pr), field.const(h)), CutPoint(field.const(qr), field.const(h)))
            for (pr, qr), h in pairs
        ),
    )


def sample(label: StratumLabel, params: Sequence) -> Configuration:
    """A configuration in ``label`` built from ``dimension`` rational parameters."""
    if len(params) != label.dimension:
        raise DomainError(f"{label} takes {label.dimension} parameters, got {len(params)}")
    ps = [as_fraction(x) for x in params]
    field = ScalarField.rational()

    def positive(*idx):
        for i in idx:
            if ps[i] <= 0:
                raise DomainError(f"parameter {i + 1} of {label} must be positive")

    def nonzero(*idx):
        for i in idx:
            if ps[i] == 0:
                raise DomainError(f"parameter {i + 1} of {label} must be nonzero")

    zero = Fraction(0)
    if label in (R1_4, R1_4_0):
        positive(0, 1, 2)
        a, b, c = ps[:3]
        h = ps[3] if label == R1_4 else zero
        if label == R1_4:
            nonzero(3)
        return _smooth(field, [((zero, a + b), zero), ((a, a + b + c), h)])
    if label.name == "R1_3_cell":
        positive(0, 1, 2)
        a, b, h = ps
        x0, x1, x2 = zero, a, a + b
        d, w, u = {1: (x0, x1, x2), 2: (x1, x0, x2), 3: (x1, x2, x0)}[label.k]
        return _smooth(field, [(tuple(sorted((d, u))), h), (tuple(sorted((d, w))), zero)])
    if label == R1_3_0:
        positive(0, 1)
        a, b = ps
        return _smooth(field, [((zero, a), zero), ((a, a + b), zero)])
    if label == R1_2_SMOOTH:
        positive(0, 1)
        a, h = ps
        return _smooth(field, [((zero, a), h), ((zero, a), zero)])
    if label == R1_2_SING:
        nonzero(0, 1)
        return Singular(field, CutPoint(field.const(ps[0]), field.const(ps[1])))
    if label == R1_2_0:
        nonzero(0)
        return Singular(field, CutPoint(field.const(ps[0]), field.zero()))
    nonzero(0)
    return Singular(field, CutPoint(field.zero(), field.const(ps[0])))


def scale(c: Configuration, k) -> Configuration:
    k = as_fraction(k)
    if k <= 0:
        raise DomainError("scale factor must be positive")
    if isinstance(c, Singular):
        return Singular(c.field, CutPoint(c.node.re * k, c.node.im * k))
    return Smooth(c.field, tuple(tuple(CutPoint(x.re * k, x.im * k) for x in pq) for pq in c.pairs))
