"""Exact real scalars and additive subgroups of the reals.

A ``RealValue`` is a vector of rationals over a ``ScalarField``: a finite list
of basis symbols that are *declared* linearly independent over Q.  Each symbol
carries a rational embedding used only to order values and to draw them.
Ranks and lattice comparisons never look at the embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import DomainError, EmbeddingCollision, InvalidInput

LESS, EQUAL, GREATER = -1, 0, 1


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {x!r}") from exc
    raise InvalidInput(f"not a rational: {x!r}")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ScalarField:
    symbols: tuple[str, ...]
    embeddings: tuple[Fraction, ...]

    def __post_init__(self):
        symbols = tuple(self.symbols)
        embeddings = tuple(as_fraction(e) for e in self.embeddings)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "embeddings", embeddings)
        if not symbols:
            raise InvalidInput("a scalar field needs at least one symbol")
        if len(symbols) != len(embeddings):
            raise InvalidInput("symbols and embeddings differ in length")
        if len(set(symbols)) != len(symbols):
            raise InvalidInput("duplicate basis symbol")
        if any(e == 0 for e in embeddings):
            raise InvalidInput("embeddings must be nonzero")
        if len(set(embeddings)) != len(embeddings):
            raise InvalidInput("embeddings must be pairwise distinct")

    @property
    def dim(self) -> int:
        return len(self.symbols)

    @classmethod
    def rational(cls) -> "ScalarField":
        """The one-dimensional field whose single symbol stands for 1."""
        return cls(("1",), (Fraction(1),))

    def value(self, coords: Iterable) -> "RealValue":
        return RealValue(self, tuple(as_fraction(c) for c in coords))

    def zero(self) -> "RealValue":
        return RealValue(self, (Fraction(0),) * self.dim)

    def basis(self, k: int) -> "RealValue":
        coords = [Fraction(0)] * self.dim
        coords[k] = Fraction(1)
        return RealValue(self, tuple(coords))

    def const(self, x) -> "RealValue":
        """``x`` times the first basis symbol (a plain rational in ``rational()``)."""
        coords = [Fraction(0)] * self.dim
        coords[0] = as_fraction(x)
        return RealValue(self, tuple(coords))

    def to_json(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "embeddings": [format_fraction(e) for e in self.embeddings],
        }

    @classmethod
    def from_json(cls, obj) -> "ScalarField":
        if not isinstance(obj, dict) or "symbols" not in obj or "embeddings" not in obj:
            raise InvalidInput("field must be an object with symbols and embeddings")
        symbols = obj["symbols"]
        if not isinstance(symbols, list) or not all(isinstance(s, str) for s in symbols):
            raise InvalidInput("field symbols must be a list of strings")
        if not isinstance(obj["embeddings"], list):
            raise InvalidInput("field embeddings must be a list")
        return cls(tuple(symbols), tuple(as_fraction(e) for e in obj["embeddings"]))


@dataclass(frozen=True)
class RealValue:
    field: ScalarField
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.dim:
            raise InvalidInput(
                f"expected {self.field.dim} coordinates, got {len(self.coords)}"
            )

    def _check(self, other: "RealValue"):
        if other.field is not self.field and other.field != self.field:
            raise DomainError("values live over different scalar fields")

    def __add__(self, other: "RealValue") -> "RealValue":
        self._check(other)
        return RealValue(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RealValue") -> "RealValue":
        self._check(other)
        return RealValue(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RealValue":
        return RealValue(self.field, tuple(-a for a in self.coords))

    def __mul__(self, k) -> "RealValue":
        k = as_fraction(k)
        return RealValue(self.field, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, k) -> "RealValue":
        k = as_fraction(k)
        if k == 0:
            raise DomainError("division by zero")
        return RealValue(self.field, tuple(a / k for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def embedded(self) -> Fraction:
        cached = self.__dict__.get("_embedded")
        if cached is None:
            cached = sum((c * e for c, e in zip(self.coords, self.field.embeddings)), Fraction(0))
            object.__setattr__(self, "_embedded", cached)
        return cached

    def _approx(self) -> float:
        cached = self.__dict__.get("_float")
        if cached is None:
            try:
                cached = float(self.embedded())
            except OverflowError:
                cached = float("nan")
            object.__setattr__(self, "_float", cached)
        return cached

    def sign(self) -> int:
        return compare(self, self.field.zero())

    def to_json(self) -> dict:
        return {"coords": [format_fraction(c) for c in self.coords]}

    @classmethod
    def from_json(cls, field: ScalarField, obj) -> "RealValue":
        if isinstance(obj, dict):
            coords = obj.get("coords")
            if not isinstance(coords, list):
                raise InvalidInput("value must carry a coords list")
            return field.value(coords)
        raise InvalidInput(f"malformed value: {obj!r}")

    def __str__(self):
        parts = []
        for c, s in zip(self.coords, self.field.symbols):
            if c == 0:
                continue
            if s == "1":
                parts.append(format_fraction(c))
            elif c == 1:
                parts.append(s)
            elif c == -1:
                parts.append(f"-{s}")
            else:
                parts.append(f"{format_fraction(c)}*{s}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def compare(a: RealValue, b: RealValue) -> int:
    """Three-way comparison; ``EmbeddingCollision`` if the embeddings cannot tell."""
    a._check(b)
    if a.coords == b.coords:
        return EQUAL
    # floats are correctly rounded, so a clear gap decides the sign
    fx, fy = a._approx(), b._approx()
    if abs(fx - fy) > 1e-9 * max(abs(fx), abs(fy), 1e-300):
        return LESS if fx < fy else GREATER
    x, y = a.embedded(), b.embedded()
    if x == y:
        raise EmbeddingCollision(
            f"{a} and {b} differ formally but embed to the same rational {x}"
        )
    return LESS if x < y else GREATER


def vsum(values: Sequence[RealValue], field: ScalarField) -> RealValue:
    total = field.zero()
    for v in values:
        total = total + v
    return total


# -- rational / integer linear algebra ------------------------------------------


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale all rows by one common positive integer so they become integral."""
    scale = 1
    for row in rows:
        for x in row:
            scale = _lcm(scale, Fraction(x).denominator)
    return [[int(Fraction(x) * scale) for x in row] for row in rows], scale


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m, _ = integer_rows(rows)
    m = [row[:] for row in m if any(row)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, len(m)):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == len(m):
            break
    return r


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix, zero rows dropped.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``.  Two integer matrices span the same Z-module iff their
    forms agree.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        # gcd-combine everything below r into row r at column c
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            a, b = m[r][c], m[i][c]
            g, x, y = _xgcd(a, b)
            ra, rb = m[r], m[i]
            m[r] = [x * u + y * v for u, v in zip(ra, rb)]
            m[i] = [(a // g) * v - (b // g) * u for u, v in zip(ra, rb)]
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-u for u in m[r]]
            p = m[r][c]
            for i in range(r):
                q = m[i][c] // p
                if q:
                    m[i] = [u - q * v for u, v in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    out = [row for row in m[:r] if any(row)]
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def fraction_gcd(values: Iterable[Fraction]) -> Fraction:
    """gcd(p1/q1, p2/q2) = gcd(p1*q2, p2*q1) / (q1*q2), reduced; always >= 0."""

    def g(x: Fraction, y: Fraction) -> Fraction:
        return Fraction(
            math.gcd(x.numerator * y.denominator, y.numerator * x.denominator),
            x.denominator * y.denominator,
        )

    return reduce(g, (abs(Fraction(v)) for v in values), Fraction(0))


def solve_rational(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique x with x·A = b (x combines the rows of A), or None."""
    n = len(a)
    ncols = len(b)
    # augmented system on columns: sum_i x_i a[i][c] = b[c]
    aug = [[Fraction(a[i][c]) for i in range(n)] + [Fraction(b[c])] for c in range(ncols)]
    piv_cols = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, ncols) if aug[i][col] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(ncols):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [u - f * v for u, v in zip(aug[i], aug[r])]
        piv_cols.append(col)
        r += 1
    if len(piv_cols) < n:
        return None
    if any(aug[i][n] != 0 for i in range(r, ncols)):
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(piv_cols):
        x[col] = aug[i][n]
    return x


# -- period lattices ---------------------------------------------------------------


@dataclass(frozen=True)
class PeriodLattice:
    field: ScalarField
    generators: tuple[RealValue, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for v in gens:
            if v.field != self.field:
                raise DomainError("generator over a different field")

    @classmethod
    def of(cls, values: Sequence[RealValue], field: ScalarField | None = None) -> "PeriodLattice":
        if field is None:
            if not values:
                raise InvalidInput("need a field for an empty lattice")
            field = values[0].field
        return cls(field, tuple(values))

    def rows(self) -> list[tuple[Fraction, ...]]:
        return [v.coords for v in self.generators]

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "generators": [v.to_json() for v in self.generators],
        }


def q_rank(lattice: PeriodLattice) -> int:
    return rank(lattice.rows())


def is_discrete(lattice: PeriodLattice) -> bool:
    return q_rank(lattice) <= 1


def is_totally_incommensurable(lattice: PeriodLattice, g: int) -> bool:
    return q_rank(lattice) == 2 * g


def canonical_generator(lattice: PeriodLattice) -> RealValue:
    """The positive generator of a discrete, nontrivial lattice."""
    if not is_discrete(lattice):
        raise DomainError("lattice is dense; it has no single generator")
    nonzero = [v for v in lattice.generators if not v.is_zero()]
    if not nonzero:
        raise DomainError("trivial lattice has no positive generator")
    base = nonzero[0]
    k = next(i for i, c in enumerate(base.coords) if c != 0)
    ratios = [v.coords[k] / base.coords[k] for v in nonzero]
    gen = base * fraction_gcd(ratios)
    if gen.sign() < 0:
        gen = -gen
    return gen


def lattice_hnf(lattice: PeriodLattice, scale: int = 1) -> list[list[int]]:
    m = [[int(x * scale) for x in row] for row in lattice.rows()]
    return hermite_normal_form(m)


def same_lattice(l1: PeriodLattice, l2: PeriodLattice) -> bool:
    """Equality of the Z-modules spanned by the two generator sets."""
    if l1.field != l2.field:
        raise DomainError("lattices live over different scalar fields")
    _, scale = integer_rows(l1.rows() + l2.rows())
    return lattice_hnf(l1, scale) == lattice_hnf(l2, scale)
