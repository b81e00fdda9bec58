"""
Flags ``g B^+`` in SL_n and their Bruhat / Richardson / parabolic classification.

The Weyl group of SL_n is S_n; the word ``(i_1, ..., i_m)`` corresponds to the
permutation ``t_{i_1} o ... o t_{i_m}`` and to the signed permutation matrix
``sdot(i_1) ... sdot(i_m)``, which sends ``e_j`` to ``+-e_{w(j)}``.
"""

from __future__ import annotations

from functools import cache
from typing import Iterable, Sequence

from ..coxeter import WeylElement, WeylGroup, weyl_group
from ..errors import ClassificationError, ParameterError, ReductionError, SingularMatrixError
from ..parabolic import parabolic
from ..poset import CellIndex, StratumIndex
from .matrix import Rational, RationalMatrix, sdot

__all__ = [
    "MAX_N", "type_a_group", "permutation", "element_of_permutation", "lift",
    "rank_table", "bruhat_cell", "bruhat_decompose", "FlagPoint", "relative_position",
    "classify_flag", "reduce", "classify_parabolic",
]

MAX_N = 6


@cache
def type_a_group(n: int) -> WeylGroup:
    """The Weyl group S_n of SL_n, as type ``A_{n-1}``."""
    if not 2 <= n <= MAX_N:
        raise ParameterError(f"SL_n needs 2 <= n <= {MAX_N}, got n={n}")
    return weyl_group(f"A{n - 1}")


def _n_of(group: WeylGroup) -> int:
    if group.cartan.family != "A":
        raise ParameterError(f"matrix model only covers type A, got {group.cartan}")
    n = group.rank + 1
    if n > MAX_N:
        raise ParameterError(f"SL_{n} exceeds the cap n <= {MAX_N}")
    return n


def permutation(w: WeylElement) -> tuple[int, ...]:
    """One-line notation (0-based) of ``w``."""
    perm = list(range(w.group.rank + 1))
    for i in w.word:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def element_of_permutation(group: WeylGroup, perm: Sequence[int]) -> WeylElement:
    perm = list(perm)
    letters = []
    while True:
        for i in range(len(perm) - 1):
            if perm[i] > perm[i + 1]:
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
                letters.append(i + 1)
                break
        else:
            return group.from_word(reversed(letters))


@cache
def lift(w: WeylElement) -> RationalMatrix:
    """The representative ``w-dot``, a product of ``sdot`` along any reduced word."""
    n = _n_of(w.group)
    g = RationalMatrix.identity(n)
    for i in w.word:
        g = g @ sdot(i, n)
    return g


def rank_table(g: RationalMatrix) -> list[list[int]]:
    """``r[i][j]`` = rank of the block of rows ``i..n-1`` and columns ``0..j-1``."""
    n = g.n
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        basis: list[tuple[int, list[Rational]]] = []
        for j in range(n):
            vec = [g.rows[r][j] for r in range(i, n)]
            for piv, b in basis:
                if vec[piv]:
                    f = vec[piv] / b[piv]
                    vec = [x - f * y for x, y in zip(vec, b)]
            piv = next((k for k, x in enumerate(vec) if x), None)
            if piv is not None:
                basis.append((piv, vec))
            table[i][j + 1] = len(basis)
    return table


def bruhat_cell(g: RationalMatrix, group: WeylGroup | None = None) -> WeylElement:
    """The ``w`` with ``g`` in ``B^+ w-dot B^+``, read off the lower-left rank table."""
    n = g.n
    group = group or type_a_group(n)
    r = rank_table(g)
    if r[0][n] != n:
        raise SingularMatrixError("flag matrix is singular")
    perm = [None] * n
    for j in range(n):
        for i in range(n):
            if r[i][j + 1] - r[i][j] - r[i + 1][j + 1] + r[i + 1][j] == 1:
                perm[j] = i
                break
    return element_of_permutation(group, perm)


def bruhat_decompose(g: RationalMatrix) -> tuple[tuple[int, ...], RationalMatrix]:
    """
    Independent Bruhat decomposition by structured elimination.

    Row operations only add multiples of a row to rows above it and column
    operations only add multiples of a column to columns right of it, so
    ``L g R`` is monomial with ``L``, ``R`` upper unitriangular.  Returns the
    permutation and ``z = L^-1``, so that ``g B^+ = z w-dot B^+``.
    """
    n = g.n
    a = [list(row) for row in g.rows]
    L = [[Rational(int(i == j)) for j in range(n)] for i in range(n)]
    pivots: list[int] = []
    for j in range(n):
        for jj, p in enumerate(pivots):
            if a[p][j]:
                f = a[p][j] / a[p][jj]
                for r in range(n):
                    a[r][j] -= f * a[r][jj]
        free = [r for r in range(n) if r not in pivots and a[r][j]]
        if not free:
            raise SingularMatrixError("matrix is singular")
        p = max(free)
        for r in free:
            if r != p:
                f = a[r][j] / a[p][j]
                a[r] = [x - f * y for x, y in zip(a[r], a[p])]
                L[r] = [x - f * y for x, y in zip(L[r], L[p])]
        pivots.append(p)
    return tuple(pivots), RationalMatrix(L).inverse()


def _column_reduce(g: RationalMatrix) -> RationalMatrix:
    n = g.n
    cols = g.columns()
    pivots: list[int] = []
    scale = Rational(1)
    for j in range(n):
        col = cols[j]
        for jj, p in enumerate(pivots):
            if col[p]:
                f = col[p] / cols[jj][p]
                col = [x - f * y for x, y in zip(col, cols[jj])]
        p = max((r for r in range(n) if r not in pivots and col[r]), default=None)
        if p is None:
            raise SingularMatrixError("flag matrix is singular")
        piv = col[p]
        if j < n - 1:
            col = [x / piv for x in col]
            scale *= piv
        else:
            col = [x * scale for x in col]
        cols[j] = col
        pivots.append(p)
    return RationalMatrix.from_columns(cols)


class FlagPoint:
    """The flag ``g B^+``; equal when related by right multiplication by ``B^+``."""

    __slots__ = ("g", "_canonical")

    def __init__(self, g: RationalMatrix, normalize: bool = False):
        if not isinstance(g, RationalMatrix):
            g = RationalMatrix(g)
        det = g.det()
        if det == 0:
            raise SingularMatrixError("flag matrix is singular")
        if det != 1:
            if not normalize:
                raise ParameterError(f"flag representative must have determinant 1, got {det}")
            cols = g.columns()
            cols[-1] = [x / det for x in cols[-1]]
            g = RationalMatrix.from_columns(cols)
        self.g = g
        self._canonical = None

    @property
    def n(self) -> int:
        return self.g.n

    def canonical(self) -> RationalMatrix:
        if self._canonical is None:
            self._canonical = _column_reduce(self.g)
        return self._canonical

    def __eq__(self, other):
        if not isinstance(other, FlagPoint):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"FlagPoint({self.canonical().to_json()})"

    def translate(self, h: RationalMatrix) -> FlagPoint:
        """The flag ``h g B^+``."""
        return FlagPoint(h @ self.g)


def _flag(g) -> FlagPoint:
    return g if isinstance(g, FlagPoint) else FlagPoint(g)


def base_flag(n: int) -> FlagPoint:
    return FlagPoint(RationalMatrix.identity(n))


def opposite_flag(n: int) -> FlagPoint:
    group = type_a_group(n)
    return FlagPoint(lift(group.longest_element()))


def relative_position(f1, f2) -> WeylElement:
    """The ``w`` with ``g1^-1 g2`` in ``B^+ w-dot B^+``."""
    f1, f2 = _flag(f1), _flag(f2)
    return bruhat_cell(f1.g.inverse() @ f2.g)


def classify_flag(g) -> CellIndex:
    """The Richardson cell ``(v, w)`` containing ``g B^+``."""
    f = _flag(g)
    group = type_a_group(f.n)
    w0 = group.longest_element()
    w = bruhat_cell(f.g, group)
    # position of B^- relative to g B^+ is w0 v
    v = w0 * bruhat_cell(lift(w0).inverse() @ f.g, group)
    if not group.bruhat_leq(v, w):
        raise ClassificationError(f"classified ({v}, {w}) but {v} is not below {w}")
    return CellIndex(v, w)


def reduce(g, w1: WeylElement) -> FlagPoint:
    """
    The reduction map: for ``g B^+ = z w-dot B^+`` with ``z`` in ``U^+`` and
    ``w = w1 w2`` length-additive, return ``z w1-dot B^+``.  Both defining
    relative positions are re-checked.
    """
    f = _flag(g)
    group = type_a_group(f.n)
    perm, z = bruhat_decompose(f.g)
    w = element_of_permutation(group, perm)
    w2 = w1.inverse() * w
    if w1.length + w2.length != w.length:
        raise ReductionError(f"{w1} is not a length-additive left factor of {w}")
    out = FlagPoint(z @ lift(w1))
    if relative_position(base_flag(f.n), out) != w1 or relative_position(out, f) != w2:
        raise ClassificationError(f"reduction of a flag in cell {w} to {w1} failed its checks")
    return out


def classify_parabolic(g, J: Iterable[int]) -> StratumIndex:
    """
    The stratum ``(x, u, w)`` of ``G/P_J`` containing the image of ``g B^+``.

    ``B_L`` is the flag of the parabolic nearest ``B^+`` (a reduction map);
    ``B_R`` the one nearest ``B^-``, found by the same map after translating
    by ``w0-dot^-1``.
    """
    f = _flag(g)
    n = f.n
    group = type_a_group(n)
    ctx = parabolic(group.cartan, tuple(sorted(set(J))))
    w0 = group.longest_element()
    w0dot = lift(w0)

    w, ua = ctx.factorize(bruhat_cell(f.g, group))
    B_L = reduce(f, w)
    h = FlagPoint(w0dot.inverse() @ f.g)
    a, _ = ctx.factorize(bruhat_cell(h.g, group))
    B_R = reduce(h, a).translate(w0dot)
    u = relative_position(B_L, B_R)
    x = w0 * a

    if not ctx.is_max_rep(x) or not ctx.in_W_J(u) or not group.bruhat_leq(x, w * u):
        raise ClassificationError(f"inconsistent stratum ({x}, {u}, {w}) for J={list(ctx.J)}")
    if not (ctx.in_W_J(relative_position(B_L, f)) and ctx.in_W_J(relative_position(B_R, f))):
        raise ClassificationError("B_L or B_R left the parabolic")
    if relative_position(B_R, opposite_flag(n)) != x.inverse() * w0:
        raise ClassificationError("B_R is not in the expected position relative to B^-")
    return StratumIndex(x, u, w)
