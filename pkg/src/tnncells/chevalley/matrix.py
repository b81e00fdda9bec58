"""Exact rational matrices and the Chevalley generators of SL_n."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq as Rational

from ..errors import ParameterError, SingularMatrixError

__all__ = [
    "Rational", "as_rational", "RationalMatrix", "generator", "x_gen", "y_gen", "sdot",
    "sdot_inv", "coroot",
]

Number = int | Fraction | Rational | str


def as_rational(value: Number) -> Rational:
    """Exact conversion of ints, ``Fraction``s and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, (bool, float)):
        raise TypeError(f"exact rationals only, got {value!r}")
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        value = value.strip()
    return Rational(value)


class RationalMatrix:
    """Immutable square matrix of exact rational entries."""

    __slots__ = ("rows", "n", "_hash")

    def __init__(self, rows: Iterable[Iterable[Number]]):
        self.rows = tuple(tuple(as_rational(a) for a in row) for row in rows)
        self.n = len(self.rows)
        if any(len(row) != self.n for row in self.rows):
            raise ValueError("matrix must be square")
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls._raw(tuple(tuple(Rational(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def _raw(cls, rows: tuple[tuple[Rational, ...], ...]) -> RationalMatrix:
        m = cls.__new__(cls)
        m.rows = rows
        m.n = len(rows)
        m._hash = None
        return m

    def __repr__(self):
        return f"RationalMatrix({self.to_json()})"

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __getitem__(self, ij: tuple[int, int]) -> Rational:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        cols = list(zip(*other.rows))
        return RationalMatrix._raw(tuple(
            tuple(sum((a * b for a, b in zip(row, col) if a and b), Rational(0)) for col in cols)
            for row in self.rows
        ))

    def column(self, j: int) -> tuple[Rational, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[list[Rational]]:
        return [list(c) for c in zip(*self.rows)]

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Rational]]) -> RationalMatrix:
        return cls._raw(tuple(zip(*(tuple(c) for c in cols))))

    def transpose(self) -> RationalMatrix:
        return RationalMatrix._raw(tuple(zip(*self.rows)))

    def det(self) -> Rational:
        a = [list(row) for row in self.rows]
        n = self.n
        det = Rational(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return Rational(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> RationalMatrix:
        n = self.n
        a = [list(row) + [Rational(int(i == j)) for j in range(n)] for i, row in enumerate(self.rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                raise SingularMatrixError("matrix is singular")
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [x / piv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return RationalMatrix._raw(tuple(tuple(row[n:]) for row in a))

    def to_json(self) -> list[list[str]]:
        return [[f"{a.numerator}/{a.denominator}" for a in row] for row in self.rows]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[Number]]) -> RationalMatrix:
        return cls(data)


def _check(i: int, n: int):
    if not isinstance(i, int) or not 1 <= i <= n - 1:
        raise ParameterError(f"generator index {i!r} out of range 1..{n - 1}")


def _elementary(n: int, i: int, j: int, t: Rational) -> RationalMatrix:
    rows = [[Rational(int(r == c)) for c in range(n)] for r in range(n)]
    rows[i][j] = t
    return RationalMatrix._raw(tuple(map(tuple, rows)))


def x_gen(i: int, t: Number, n: int) -> RationalMatrix:
    """``x_i(t) = 1 + t E_{i,i+1}``."""
    _check(i, n)
    return _elementary(n, i - 1, i, as_rational(t))


def y_gen(i: int, t: Number, n: int) -> RationalMatrix:
    """``y_i(t) = 1 + t E_{i+1,i}``."""
    _check(i, n)
    return _elementary(n, i, i - 1, as_rational(t))


def sdot(i: int, n: int) -> RationalMatrix:
    """``x_i(-1) y_i(1) x_i(-1)``."""
    return x_gen(i, -1, n) @ y_gen(i, 1, n) @ x_gen(i, -1, n)


def sdot_inv(i: int, n: int) -> RationalMatrix:
    return x_gen(i, 1, n) @ y_gen(i, -1, n) @ x_gen(i, 1, n)


def coroot(i: int, t: Number, n: int) -> RationalMatrix:
    """``alpha_i^vee(t)``: ``t`` in slot ``i``, ``1/t`` in slot ``i+1``."""
    _check(i, n)
    t = as_rational(t)
    if t == 0:
        raise ParameterError("coroot parameter must be nonzero")
    rows = [[Rational(int(r == c)) for c in range(n)] for r in range(n)]
    rows[i - 1][i - 1] = t
    rows[i][i] = 1 / t
    return RationalMatrix._raw(tuple(map(tuple, rows)))


def generator(kind: str, i: int, t: Number | None = None, n: int = 3) -> RationalMatrix:
    if kind == "x":
        return x_gen(i, 0 if t is None else t, n)
    if kind == "y":
        return y_gen(i, 0 if t is None else t, n)
    if kind == "sdot":
        return sdot(i, n)
    if kind == "coroot":
        if t is None:
            raise ParameterError("coroot needs a parameter")
        return coroot(i, t, n)
    raise ParameterError(f"unknown generator kind {kind!r}")
