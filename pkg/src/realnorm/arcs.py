"""Arc diagrams: perfect matchings of 2n points on a line.

Points are numbered 1..2n from left to right.  Arcs are numbered by the
order of their left ends, so arc 0 always starts at point 1.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InternalError, InvalidInput

Pair = tuple[int, int]


@dataclass(frozen=True)
class Matching:
    pairs: tuple[Pair, ...]

    def __post_init__(self):
        pairs = []
        for p in self.pairs:
            if len(p) != 2:
                raise InvalidInput(f"not a pair: {p!r}")
            l, r = int(p[0]), int(p[1])
            if l >= r:
                raise InvalidInput(f"pair {p!r} must satisfy l < r")
            pairs.append((l, r))
        pairs.sort()
        used = sorted(i for p in pairs for i in p)
        if used != list(range(1, 2 * len(pairs) + 1)):
            raise InvalidInput("pairs must partition 1..2n")
        object.__setattr__(self, "pairs", tuple(pairs))

    @property
    def n_arcs(self) -> int:
        return len(self.pairs)

    def partner(self) -> dict[int, int]:
        out = {}
        for l, r in self.pairs:
            out[l] = r
            out[r] = l
        return out

    def to_json(self) -> list:
        return [list(p) for p in self.pairs]

    @classmethod
    def from_json(cls, obj) -> "Matching":
        if not isinstance(obj, list):
            raise InvalidInput("a matching is a JSON array of pairs")
        try:
            return cls(tuple(tuple(p) for p in obj))
        except TypeError as exc:
            raise InvalidInput(f"malformed matching: {obj!r}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __str__(self):
        return "{" + ",".join(f"({l},{r})" for l, r in self.pairs) + "}"


def crossing(a: Pair, b: Pair) -> bool:
    la, ra = a
    lb, rb = b
    if len({la, ra, lb, rb}) != 4:
        raise InvalidInput(f"pairs {a} and {b} share an index")
    if la > ra or lb > rb:
        raise InvalidInput("pairs must satisfy l < r")
    return la < lb < ra < rb or lb < la < rb < ra


@dataclass(frozen=True)
class InterlacementGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def rows_as_bits(self) -> list[int]:
        return [sum(1 << j for j, x in enumerate(row) if x) for row in self.adjacency]


def interlacement_graph(m: Matching) -> InterlacementGraph:
    n = m.n_arcs
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if crossing(m.pairs[i], m.pairs[j]):
                adj[i][j] = adj[j][i] = 1
    return InterlacementGraph(n, tuple(tuple(r) for r in adj))


def _rank_bits(rows: list[int]) -> int:
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def f2_rank(matrix: Sequence[Sequence[int]]) -> int:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise InvalidInput("f2_rank needs a square matrix")
    return _rank_bits([sum(1 << j for j, x in enumerate(row) if x & 1) for row in matrix])


def component_count(m: Matching) -> int:
    """Number of pieces the low horizontal line falls into after regluing."""
    g = interlacement_graph(m)
    return 1 + m.n_arcs - _rank_bits(g.rows_as_bits())


def is_nondegenerate(m: Matching) -> bool:
    return _rank_bits(interlacement_graph(m).rows_as_bits()) == m.n_arcs


def reglue_oracle(m: Matching) -> int:
    """Count pieces of the reglued line by following segments directly.

    Segment s_k lies between cut positions k and k+1; s_0 and s_2n are the
    two unbounded rays.  Crossing the cut at j sends you out at its partner.
    """
    n2 = 2 * m.n_arcs
    succ = {}
    for j, k in m.pairs:
        succ[j - 1] = k
        succ[k - 1] = j
    seen = set()
    s = 0
    seen.add(s)
    while s != n2:
        s = succ[s]
        if s in seen:
            raise InternalError("chain from s_0 revisits a segment")
        seen.add(s)
    cycles = 0
    for start in range(n2 + 1):
        if start in seen:
            continue
        cycles += 1
        s = start
        while s not in seen:
            seen.add(s)
            s = succ[s]
    return 1 + cycles


def euler_genus_oracle(m: Matching) -> int:
    """Genus of the glued surface from its cell structure (one face)."""
    n = m.n_arcs
    faces = 1
    edges = 2 * n
    vertices = n + reglue_oracle(m)
    chi = vertices - edges + faces
    twice_genus = 2 - chi
    if twice_genus < 0 or twice_genus % 2:
        raise InternalError(f"Euler characteristic {chi} gives no genus for {m}")
    return twice_genus // 2


def genus(m: Matching) -> int:
    r = _rank_bits(interlacement_graph(m).rows_as_bits())
    return r // 2


def _matchings(free: list[int]) -> Iterator[list[Pair]]:
    if not free:
        yield []
        return
    first, rest = free[0], free[1:]
    for i, j in enumerate(rest):
        for tail in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, j)] + tail


def enumerate_matchings(n: int, first_partner: int | None = None) -> Iterator[Matching]:
    """Every perfect matching of 1..2n, each exactly once.

    Order: point 1 is paired with 2, 3, ..., 2n in turn and the rest is
    enumerated recursively the same way.  ``first_partner`` restricts the run
    to the block where 1 is paired with that point, so the blocks for
    2..2n partition the whole stream.
    """
    if n < 0:
        raise InvalidInput("n must be non-negative")
    if n == 0:
        yield Matching(())
        return
    partners = range(2, 2 * n + 1) if first_partner is None else [first_partner]
    for j in partners:
        if not 2 <= j <= 2 * n:
            raise InvalidInput(f"first_partner must lie in 2..{2 * n}")
        rest = [k for k in range(2, 2 * n + 1) if k != j]
        for tail in _matchings(rest):
            yield Matching(((1, j),) + tuple(tail))


def _count_block(n: int, j: int) -> int:
    """Nondegenerate matchings of 1..2n with 1 paired to j.

    Builds interlacement rows incrementally: arcs appear in order of their
    left ends, and a new arc (l, r) crosses an earlier arc (l', r') iff
    l < r' < r.
    """
    count = 0
    size = 2 * n

    def rec(free: list[int], arcs: list[Pair], rows: list[int]):
        nonlocal count
        if not free:
            if _rank_bits(rows) == n:
                count += 1
            return
        l, rest = free[0], free[1:]
        k = len(arcs)
        for idx, r in enumerate(rest):
            row = 0
            new_rows = rows[:]
            for a, (_, r2) in enumerate(arcs):
                if l < r2 < r:
                    row |= 1 << a
                    new_rows[a] |= 1 << k
            new_rows.append(row)
            arcs.append((l, r))
            rec(rest[:idx] + rest[idx + 1:], arcs, new_rows)
            arcs.pop()

    rest = [k for k in range(2, size + 1) if k != j]
    rec(rest, [(1, j)], [0])
    return count


def count_nondegenerate(g: int, workers: int = 1) -> int:
    """Nondegenerate arc diagrams with 2g arcs."""
    if g < 1:
        raise InvalidInput("g must be positive")
    n = 2 * g
    blocks = range(2, 2 * n + 1)
    if workers <= 1:
        return sum(_count_block(n, j) for j in blocks)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_count_block, [n] * len(blocks), blocks))


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out
