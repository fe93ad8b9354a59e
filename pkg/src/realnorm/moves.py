"""Flat cut diagrams under horizontal motion, switches and caravan normal form.

A flat cut diagram is a set of arcs on one horizontal line.  Each arc has a
persistent label (its index in ``MetricArcDiagram.arcs``), so lengths and
transition matrices can be tracked through moves.  A switch fires when a
moving cut meets a static one: one of the two ends passes through the other
cut and reappears at that cut's partner, which changes its arc's length by
plus or minus the other arc's length.  Every switch is a second Vassiliev
move and multiplies the transition matrix by an elementary matrix.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from . import arcs
from .cuts import CutDiagram, CutPoint, flatten
from .errors import (
    AmbiguousCollision,
    DomainError,
    EmbeddingCollision,
    InternalError,
    InvalidMove,
    InvalidRetarget,
    PreconditionError,
    TerminationViolation,
)
from .scalars import (
    EQUAL,
    GREATER,
    LESS,
    PeriodLattice,
    RealValue,
    ScalarField,
    compare,
    is_totally_incommensurable,
    same_lattice,
    solve_rational,
)

LEFT, RIGHT = 0, 1
SIDE_NAMES = ("left", "right")

Matrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b) -> list[list[int]]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def transpose(a) -> list[list[int]]:
    return [list(r) for r in zip(*a)]


def determinant(a) -> int:
    """Exact determinant of an integer matrix (Bareiss)."""
    m = [list(map(int, r)) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def freeze(a) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in a)


def _cmp(a: RealValue, b: RealValue) -> int:
    try:
        return compare(a, b)
    except EmbeddingCollision as exc:
        raise AmbiguousCollision(str(exc)) from exc


@dataclass(frozen=True)
class MetricArcDiagram:
    field: ScalarField
    arcs: tuple[tuple[RealValue, RealValue], ...]

    def __post_init__(self):
        arcs_ = tuple((l, r) for l, r in self.arcs)
        object.__setattr__(self, "arcs", arcs_)
        for i, (l, r) in enumerate(arcs_):
            if l.field != self.field or r.field != self.field:
                raise DomainError(f"arc {i} lives over another field")
            if compare(l, r) != LESS:
                raise InvalidMove(f"arc {i} must have positive length")
        ends = self.ends()
        for a, b in zip(ends, ends[1:]):
            if compare(a[0], b[0]) == EQUAL:
                raise InvalidMove("endpoint positions must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.arcs)

    @property
    def g(self) -> int:
        return len(self.arcs) // 2

    def lengths(self) -> list[RealValue]:
        return [r - l for l, r in self.arcs]

    def lattice(self) -> PeriodLattice:
        return PeriodLattice(self.field, tuple(self.lengths()))

    def ends(self) -> list[tuple[RealValue, int, int]]:
        """All ends as ``(position, arc, side)`` sorted by position."""
        out = [(pos, i, s) for i, pair in enumerate(self.arcs) for s, pos in enumerate(pair)]
        return sorted(out, key=functools.cmp_to_key(lambda x, y: compare(x[0], y[0])))

    def left_order(self) -> list[int]:
        """Arc labels sorted by left end."""
        return [i for _, i, s in self.ends() if s == LEFT]

    def matching(self) -> arcs.Matching:
        slot = {}
        for k, (_, i, s) in enumerate(self.ends(), 1):
            slot[(i, s)] = k
        return arcs.Matching(tuple((slot[(i, LEFT)], slot[(i, RIGHT)]) for i in range(self.n)))

    @classmethod
    def from_cut_diagram(cls, d: CutDiagram) -> "MetricArcDiagram":
        flat = flatten(d)
        return cls(d.field, tuple((p.re, q.re) for p, q in flat.pairs))

    @classmethod
    def from_rationals(cls, pairs, field: ScalarField | None = None) -> "MetricArcDiagram":
        field = field or ScalarField.rational()
        return cls(field, tuple((field.const(l), field.const(r)) for l, r in pairs))

    def to_cut_diagram(self) -> CutDiagram:
        zero = self.field.zero()
        return CutDiagram(
            self.field, tuple((CutPoint(l, zero), CutPoint(r, zero)) for l, r in self.arcs)
        )


@dataclass(frozen=True)
class MoveEvent:
    """One entry of a move trace.

    ``kind`` is ``"translate"`` (arcs shifted by ``delta``, no switch),
    ``"slide"`` (end ``end`` of ``arc`` re-anchored to ``position`` after
    passing the cut of ``over``), ``"reorient"`` (the arc's ends swap roles
    because its signed length went negative) or ``"relabel"`` (arcs renumbered
    left to right, ``order[k]`` being the old label of new arc ``k``).
    """

    kind: str
    step: str = ""
    arc: int | None = None
    over: int | None = None
    end: str | None = None
    position: RealValue | None = None
    arcs: tuple[int, ...] = ()
    delta: RealValue | None = None
    order: tuple[int, ...] = ()
    matrix: Matrix | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.step:
            out["step"] = self.step
        if self.arc is not None:
            out["arc"] = self.arc
        if self.over is not None:
            out["over"] = self.over
        if self.end is not None:
            out["end"] = self.end
        if self.position is not None:
            out["position"] = self.position.to_json()
        if self.arcs:
            out["arcs"] = list(self.arcs)
        if self.delta is not None:
            out["delta"] = self.delta.to_json()
        if self.order:
            out["order"] = list(self.order)
        if self.matrix is not None:
            out["matrix"] = [list(r) for r in self.matrix]
        return out

    @classmethod
    def from_json(cls, field: ScalarField, obj: dict) -> "MoveEvent":
        def val(key):
            return RealValue.from_json(field, obj[key]) if key in obj else None

        return cls(
            kind=obj["kind"],
            step=obj.get("step", ""),
            arc=obj.get("arc"),
            over=obj.get("over"),
            end=obj.get("end"),
            position=val("position"),
            arcs=tuple(obj.get("arcs", ())),
            delta=val("delta"),
            order=tuple(obj.get("order", ())),
            matrix=freeze(obj["matrix"]) if "matrix" in obj else None,
        )


@dataclass
class MoveTrace:
    events: list[MoveEvent] = dc_field(default_factory=list)
    # Step-2 measures (ends in left + right interval, ends in right interval)
    measures: list[tuple[tuple[int, int], tuple[int, int]]] = dc_field(default_factory=list)
    snapshots: list | None = None

    def switches(self) -> list[MoveEvent]:
        """Events that change the combinatorics (everything but plain translations)."""
        return [e for e in self.events if e.kind != "translate"]

    def matrices(self) -> list[Matrix]:
        return [e.matrix for e in self.events if e.matrix is not None]

    def product(self, n: int) -> list[list[int]]:
        acc = identity(n)
        for mat in self.matrices():
            acc = matmul(mat, acc)
        return acc

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_json(), sort_keys=True, separators=(",", ":")) + "\n" for e in self.events)

    @classmethod
    def from_jsonl(cls, field: ScalarField, text: str) -> "MoveTrace":
        return cls([MoveEvent.from_json(field, json.loads(line)) for line in text.splitlines() if line.strip()])


def intersection_form(m: MetricArcDiagram) -> list[list[int]]:
    """Antisymmetric lift of the interlacement matrix, indexed by arc label.

    Crossing arcs i, j contribute +1 at (i, j) when i has the smaller left end.
    """
    n = m.n
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        li, ri = m.arcs[i]
        for j in range(i + 1, n):
            lj, rj = m.arcs[j]
            i_first = compare(li, lj) == LESS
            if i_first:
                cross = compare(lj, ri) == LESS and compare(ri, rj) == LESS
            else:
                cross = compare(li, rj) == LESS and compare(rj, ri) == LESS
            if cross:
                out[i][j] = 1 if i_first else -1
                out[j][i] = -out[i][j]
    return out


def is_symplectic(M, omega_from, omega_to) -> bool:
    """True iff M^T · omega_to · M = omega_from."""
    n = len(M)
    for mat in (omega_from, omega_to):
        if len(mat) != n or any(len(r) != n for r in mat):
            raise DomainError("size mismatch")
    if any(len(r) != n for r in M):
        raise DomainError("transition matrix must be square")
    return matmul(matmul(transpose(M), omega_to), M) == [list(r) for r in omega_from]


def is_caravan(m: MetricArcDiagram | arcs.Matching) -> bool:
    mt = m.matching() if isinstance(m, MetricArcDiagram) else m
    if mt.n_arcs % 2:
        return False
    want = []
    for k in range(mt.n_arcs // 2):
        want += [(4 * k + 1, 4 * k + 3), (4 * k + 2, 4 * k + 4)]
    return list(mt.pairs) == want


class _Walker:
    """Mutable working copy of a flat diagram plus its bookkeeping."""

    def __init__(self, m: MetricArcDiagram, record: bool = False):
        self.field = m.field
        self.n = m.n
        self.pos = [[l, r] for l, r in m.arcs]
        self.M = identity(m.n)
        self.trace = MoveTrace()
        self.snapshots: list[tuple[MetricArcDiagram, Matrix]] | None = [] if record else None

    # -- inspection -----------------------------------------------------------

    def length(self, i: int) -> RealValue:
        return self.pos[i][RIGHT] - self.pos[i][LEFT]

    def diagram(self) -> MetricArcDiagram:
        return MetricArcDiagram(self.field, tuple((l, r) for l, r in self.pos))

    def rest(self):
        """Mark a resting state: positions must be distinct again."""
        d = self.diagram()
        if self.snapshots is not None:
            self.snapshots.append((d, freeze(self.M)))
        return d

    def nearest(self, x: RealValue, direction: int, exclude: set[int]):
        """Closest end strictly beyond ``x`` in ``direction`` among arcs not in ``exclude``."""
        best = None
        for i in range(self.n):
            if i in exclude:
                continue
            for s in (LEFT, RIGHT):
                y = self.pos[i][s]
                if _cmp(y, x) != direction:
                    continue
                if best is None or _cmp(y, best[0]) == -direction:
                    best = (y, i, s)
        return best

    def between(self, lo: RealValue, hi: RealValue, exclude: set[int]) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            if i in exclude:
                continue
            for s in (LEFT, RIGHT):
                y = self.pos[i][s]
                if _cmp(lo, y) == LESS and _cmp(y, hi) == LESS:
                    out.append((i, s))
        return out

    def next_event(self, moving: set[int], direction: int):
        """The first collision of a moving end with a static one, or None."""
        events = []
        for i in moving:
            for s in (LEFT, RIGHT):
                x = self.pos[i][s]
                hit = self.nearest(x, direction, moving)
                if hit is not None:
                    gap = (hit[0] - x) if direction == GREATER else (x - hit[0])
                    events.append((gap, (i, s), hit[1:]))
        if not events:
            return None
        events.sort(key=functools.cmp_to_key(lambda a, b: _cmp(a[0], b[0])))
        if len(events) > 1 and _cmp(events[0][0], events[1][0]) == EQUAL:
            a, b = events[0], events[1]
            raise AmbiguousCollision(
                f"ends {a[1]} and {b[1]} collide with {a[2]} and {b[2]} at the same time",
                self.trace,
            )
        return events[0]

    # -- mutation -------------------------------------------------------------

    def shift(self, moving: Sequence[int], delta: RealValue, step: str = ""):
        if delta.is_zero():
            return
        for i in moving:
            self.pos[i][LEFT] = self.pos[i][LEFT] + delta
            self.pos[i][RIGHT] = self.pos[i][RIGHT] + delta
        self.trace.events.append(MoveEvent("translate", step=step, arcs=tuple(sorted(moving)), delta=delta))

    def slide(self, arc: int, side: int, to: RealValue, over: int, step: str):
        """Re-anchor one end of ``arc`` after it passed the cut of ``over``."""
        old_len = self.length(arc)
        disp = to - self.pos[arc][side]
        change = disp if side == RIGHT else -disp
        other = self.length(over)
        if change.coords == other.coords:
            sigma = 1
        elif (-change).coords == other.coords:
            sigma = -1
        else:
            raise InternalError(f"slide of arc {arc} over {over} changes its length by {change}")
        self.pos[arc][side] = to
        E = identity(self.n)
        E[arc][over] = sigma
        self.M = matmul(E, self.M)
        self.trace.events.append(
            MoveEvent("slide", step=step, arc=arc, over=over, end=SIDE_NAMES[side], position=to, matrix=freeze(E))
        )
        new_len = old_len + other * sigma
        s = _cmp(new_len, self.field.zero())
        if s == EQUAL:
            raise InvalidMove(f"slide leaves arc {arc} with zero length")
        if s == LESS:
            self.pos[arc].reverse()
            D = identity(self.n)
            D[arc][arc] = -1
            self.M = matmul(D, self.M)
            self.trace.events.append(MoveEvent("reorient", step=step, arc=arc, matrix=freeze(D)))

    def partner_position(self, arc: int, side: int) -> RealValue:
        return self.pos[arc][1 - side]

    def translate(self, moving: set[int], delta: RealValue, step: str = "translate"):
        """Move arcs by ``delta``; every collision passes the moving end through."""
        direction = delta.sign()
        if direction == EQUAL:
            return
        remaining = delta if direction == GREATER else -delta
        while True:
            ev = self.next_event(moving, direction)
            c = GREATER if ev is None else _cmp(ev[0], remaining)
            if c == EQUAL:
                raise InvalidMove("translation stops exactly on a collision")
            if c == GREATER:
                self.shift(moving, remaining * direction, step)
                return
            gap, (i, s), (j, t) = ev
            self.shift(moving, gap * direction, step)
            remaining = remaining - gap
            self.slide(i, s, self.partner_position(j, t), j, step)


def translate_pair(m: MetricArcDiagram, arc: int, delta: RealValue) -> tuple[MetricArcDiagram, MoveTrace]:
    if not 0 <= arc < m.n:
        raise DomainError(f"no arc {arc}")
    w = _Walker(m)
    w.translate({arc}, delta)
    return w.rest(), w.trace


def second_vassiliev_move(
    m: MetricArcDiagram, arc: int, end: str, over: int, toward: str | None = None
) -> tuple[MetricArcDiagram, Matrix]:
    """Slide one end of ``arc`` along ``over`` to the other end of ``over``.

    The end must be adjacent to an end of ``over``; ``toward`` ("left" or
    "right") picks the neighbour when both neighbours belong to ``over``.
    The move is realised by translating ``arc`` twice the distance to that
    neighbour, so the slid end ends up as far beyond the other end of
    ``over`` as it started before the first one; sliding back restores the
    diagram exactly.
    """
    if arc == over or not (0 <= arc < m.n and 0 <= over < m.n):
        raise PreconditionError("need two distinct arcs")
    side = SIDE_NAMES.index(end)
    x = m.arcs[arc][side]
    ends = m.ends()
    k = next(idx for idx, e in enumerate(ends) if e[1] == arc and e[2] == side)
    options = []
    if k > 0 and ends[k - 1][1] == over:
        options.append(("left", ends[k - 1]))
    if k + 1 < len(ends) and ends[k + 1][1] == over:
        options.append(("right", ends[k + 1]))
    if toward is not None:
        options = [o for o in options if o[0] == toward]
    if not options:
        raise PreconditionError(f"the {end} end of arc {arc} is not adjacent to arc {over}")
    if len(options) > 1:
        raise PreconditionError("both neighbours belong to the other arc; pass toward=")
    _, (y, _, _) = options[0]
    w = _Walker(m)
    w.translate({arc}, (y - x) * 2, step="vassiliev")
    slides = [e for e in w.trace.events if e.kind == "slide"]
    if len(slides) != 1 or slides[0].over != over:
        raise InvalidMove("the metric does not admit this slide as a single switch")
    if any(e.kind == "reorient" for e in w.trace.events):
        raise InvalidMove(f"slide leaves arc {arc} with non-positive length")
    return w.rest(), freeze(w.M)


def retarget_lengths(m: MetricArcDiagram, new_lengths: Sequence[RealValue]) -> MetricArcDiagram:
    """Keep left ends, move right ends to realise ``new_lengths``; order must not change."""
    if len(new_lengths) != m.n:
        raise DomainError("one length per arc")
    for v in new_lengths:
        if v.sign() <= 0:
            raise InvalidRetarget("lengths must be positive")
    arcs_ = tuple((l, l + v) for (l, _), v in zip(m.arcs, new_lengths))
    try:
        out = MetricArcDiagram(m.field, arcs_)
    except (InvalidMove, EmbeddingCollision) as exc:
        raise InvalidRetarget(str(exc)) from exc
    before = [(i, s) for _, i, s in m.ends()]
    after = [(i, s) for _, i, s in out.ends()]
    if before != after:
        raise InvalidRetarget("new lengths reorder the arc ends")
    return out


# -- caravan normal form ------------------------------------------------------------


def _make_room(w: _Walker, done: list[int], active_low: RealValue, distance: RealValue):
    """Push finished blocks left so the leftmost active end can travel ``distance``."""
    if not done:
        return
    high = None
    for i in done:
        for y in w.pos[i]:
            if high is None or _cmp(y, high) == GREATER:
                high = y
    if _cmp(active_low - high, distance) != GREATER:
        w.shift(done, -distance, "room")


def _move_left(w: _Walker, moving: list[int], distance: RealValue, done: list[int], step: str):
    low = min((w.pos[i][LEFT] for i in moving), key=functools.cmp_to_key(_cmp))
    _make_room(w, done, low, distance)
    w.shift(moving, -distance, step)


def _gap_left(w: _Walker, arc: int, side: int, exclude: set[int]) -> RealValue | None:
    hit = w.nearest(w.pos[arc][side], LESS, exclude)
    return None if hit is None else w.pos[arc][side] - hit[0]


def _min(values: list[RealValue]) -> RealValue:
    return min(values, key=functools.cmp_to_key(_cmp))


def _step1(w: _Walker, active: set[int], done: list[int]) -> tuple[int, int]:
    """Slide the leftmost arc left until its right end sits next to a crossing arc."""
    a = min(active, key=functools.cmp_to_key(lambda i, j: _cmp(w.pos[i][LEFT], w.pos[j][LEFT])))
    exclude = {a} | set(done)
    touching = False
    while True:
        x = w.pos[a][RIGHT]
        hit = w.nearest(x, LESS, exclude)
        if hit is None or _cmp(hit[0], w.pos[a][LEFT]) == LESS:
            raise InternalError(f"arc {a} crosses no other arc")
        y, j, t = hit
        if t == LEFT:
            if touching:
                _move_left(w, [a], (x - y) / 2, done, "1")
            return a, j
        _move_left(w, [a], x - y, done, "1")
        w.slide(a, RIGHT, w.pos[j][LEFT], j, "1")
        touching = True


def _measure(w: _Walker, a: int, b: int, exclude: set[int]) -> tuple[int, int]:
    left = w.between(w.pos[a][LEFT], w.pos[b][LEFT], exclude)
    right = w.between(w.pos[a][RIGHT], w.pos[b][RIGHT], exclude)
    return len(left) + len(right), len(right)


def _nudge_block(w: _Walker, a: int, b: int, done: list[int], exclude: set[int]):
    bounds = [w.pos[a][RIGHT] - w.pos[b][LEFT]]
    for s in (LEFT, RIGHT):
        gap = _gap_left(w, b, s, exclude)
        if gap is not None:
            bounds.append(gap)
    _move_left(w, [a, b], _min(bounds) / 2, done, "2")


def _end_at(w: _Walker, arc: int, x: RealValue) -> int:
    for s in (LEFT, RIGHT):
        if w.pos[arc][s].coords == x.coords:
            return s
    raise InternalError(f"arc {arc} has no end at {x}")


def _step2(w: _Walker, a: int, b: int, done: list[int]):
    """Push every foreign end out of the left and right intervals of the pair (a, b)."""
    exclude = {a, b} | set(done)
    while True:
        before = _measure(w, a, b, exclude)
        if before == (0, 0):
            return
        cands = []
        for side, kind in ((LEFT, "2.1"), (RIGHT, "2.2")):
            hit = w.nearest(w.pos[b][side], LESS, exclude)
            lo = w.pos[a][side]
            if hit is not None and _cmp(lo, hit[0]) == LESS:
                cands.append((w.pos[b][side] - hit[0], kind, hit))
        cands.sort(key=functools.cmp_to_key(lambda u, v: _cmp(u[0], v[0])))
        if len(cands) == 2 and _cmp(cands[0][0], cands[1][0]) == EQUAL:
            raise AmbiguousCollision("both ends of the second arc meet other cuts at once", w.trace)
        gap, kind, (y, c, s) = cands[0]
        _move_left(w, [a, b], gap, done, kind)
        if kind == "2.1":
            # the met end slides along b and leaves through b's right end
            w.slide(c, s, w.pos[b][RIGHT], b, kind)
            _nudge_block(w, a, b, done, exclude)
        elif s == RIGHT and _cmp(w.pos[a][RIGHT], w.pos[c][LEFT]) == LESS:
            # c is nested in the right interval: b's right end slides along c
            w.slide(b, RIGHT, w.pos[c][LEFT], c, kind)
            _nudge_block(w, a, b, done, exclude)
        else:
            # the met end slides along b, then along a, into the left interval
            landing = w.pos[b][LEFT]
            w.slide(c, s, landing, b, kind)
            d = w.pos[a][RIGHT] - w.pos[b][LEFT]
            bounds = [d]
            for side in (LEFT, RIGHT):
                g = _gap_left(w, b, side, exclude)
                if g is not None:
                    bounds.append(g)
            eps = _min(bounds) / 2
            _move_left(w, [a, b], eps, done, kind)
            s = _end_at(w, c, landing)
            _move_left(w, [a], w.pos[a][RIGHT] - w.pos[c][s], done, kind)
            landing = w.pos[a][LEFT]
            w.slide(c, s, landing, a, kind)
            _move_left(w, [a], eps / 2, done, kind)
        after = _measure(w, a, b, exclude)
        if not after < before:
            raise TerminationViolation(f"interval measure went from {before} to {after}")
        w.trace.measures.append((before, after))
        w.rest()


def caravan_normalize(m: MetricArcDiagram, record: bool = False):
    """Bring a nondegenerate flat diagram to a g-caravan inside its period leaf.

    Returns ``(caravan, M, trace)`` where the caravan's arcs are numbered left
    to right and ``caravan.lengths() == M · m.lengths()`` exactly.  With
    ``record`` the trace keeps ``(diagram, M)`` at every resting state.
    """
    if not arcs.is_nondegenerate(m.matching()):
        raise PreconditionError("the arc diagram is degenerate")
    w = _Walker(m, record)
    w.rest()
    done: list[int] = []
    active = set(range(m.n))
    try:
        while active:
            a, b = _step1(w, active, done)
            w.rest()
            _step2(w, a, b, done)
            done += [a, b]
            active -= {a, b}
    except AmbiguousCollision as exc:
        raise AmbiguousCollision(str(exc), w.trace) from exc
    order = w.diagram().left_order()
    if order != list(range(m.n)):
        P = [[int(order[k] == j) for j in range(m.n)] for k in range(m.n)]
        w.pos = [w.pos[i] for i in order]
        w.M = matmul(P, w.M)
        w.trace.events.append(MoveEvent("relabel", order=tuple(order), matrix=freeze(P)))
    out = w.rest()
    if not is_caravan(out):
        raise InternalError("normalization did not reach a caravan")
    if apply_matrix(w.M, m.lengths()) != out.lengths():
        raise InternalError("transition matrix does not reproduce the lengths")
    trace = w.trace
    trace.snapshots = w.snapshots
    return out, freeze(w.M), trace


def apply_matrix(M, values: Sequence[RealValue]) -> list[RealValue]:
    field = values[0].field
    out = []
    for row in M:
        acc = field.zero()
        for k, v in zip(row, values):
            if k:
                acc = acc + v * k
        out.append(acc)
    return out


def caravan_form(g: int) -> list[list[int]]:
    omega = [[0] * (2 * g) for _ in range(2 * g)]
    for k in range(g):
        omega[2 * k][2 * k + 1] = 1
        omega[2 * k + 1][2 * k] = -1
    return omega


@dataclass(frozen=True)
class LeafReport:
    matrix: Matrix
    det: int
    symplectic: bool
    caravan1: MetricArcDiagram
    caravan2: MetricArcDiagram


def leaf_obstruction(m1: MetricArcDiagram, m2: MetricArcDiagram) -> LeafReport:
    """Compare the caravan period bases of two diagrams with the same lattice.

    A non-symplectic base change certifies that the two diagrams lie in
    different connected components of the locus with this period group.
    """
    if m1.field != m2.field:
        raise PreconditionError("diagrams live over different scalar fields")
    if m1.n != m2.n:
        raise PreconditionError("diagrams have different genus")
    for m in (m1, m2):
        if not arcs.is_nondegenerate(m.matching()):
            raise PreconditionError("a diagram is degenerate")
        if not is_totally_incommensurable(m.lattice(), m.g):
            raise PreconditionError("periods are not totally incommensurable")
    if not same_lattice(m1.lattice(), m2.lattice()):
        raise PreconditionError("the period lattices differ")
    c1, _, _ = caravan_normalize(m1)
    c2, _, _ = caravan_normalize(m2)
    base = [v.coords for v in c1.lengths()]
    B = []
    for v in c2.lengths():
        row = solve_rational(base, v.coords)
        if row is None or any(x.denominator != 1 for x in row):
            raise InternalError("caravan bases are not related by an integer matrix")
        B.append([int(x) for x in row])
    det = determinant(B)
    if det not in (1, -1):
        raise InternalError(f"base change has determinant {det}")
    omega = caravan_form(m1.g)
    return LeafReport(freeze(B), det, is_symplectic(B, omega, omega), c1, c2)


def _inverse_event_matrix(e: MoveEvent) -> list[list[int]]:
    if e.kind == "relabel":
        return transpose(e.matrix)
    if e.kind == "slide":
        inv = [list(r) for r in e.matrix]
        inv[e.arc][e.over] = -inv[e.arc][e.over]
        return inv
    return [list(r) for r in e.matrix]


def undo(m: MetricArcDiagram, trace: MoveTrace) -> tuple[MetricArcDiagram, Matrix]:
    """Run ``trace`` backwards from its final diagram ``m``.

    Returns the starting diagram and the matrix expressing its lengths in
    terms of the lengths of ``m``.
    """
    pos = [[l, r] for l, r in m.arcs]
    M = identity(m.n)
    for e in reversed(trace.events):
        if e.kind == "translate":
            for i in e.arcs:
                pos[i] = [x - e.delta for x in pos[i]]
            continue
        if e.kind == "reorient":
            pos[e.arc].reverse()
        elif e.kind == "relabel":
            old = [None] * m.n
            for k, i in enumerate(e.order):
                old[i] = pos[k]
            pos = old
        elif e.kind == "slide":
            sigma = e.matrix[e.arc][e.over]
            other = pos[e.over][RIGHT] - pos[e.over][LEFT]
            side = SIDE_NAMES.index(e.end)
            if side == RIGHT:
                pos[e.arc][RIGHT] = pos[e.arc][RIGHT] - other * sigma
            else:
                pos[e.arc][LEFT] = pos[e.arc][LEFT] + other * sigma
        else:
            raise InvalidMove(f"unknown event kind {e.kind!r}")
        M = matmul(_inverse_event_matrix(e), M)
    return MetricArcDiagram(m.field, tuple((l, r) for l, r in pos)), freeze(M)
