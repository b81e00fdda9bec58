"""
Sampling totally nonnegative cells and degenerating their parameters.

A point of the cell ``(v, w)`` is ``g_1 ... g_m B^+`` for a reduced word
``(i_1, ..., i_m)`` of ``w``, where ``g_r = sdot(i_r)`` at the positions of the
rightmost subexpression for ``v`` and ``g_r = y_{i_r}(t_r)``, ``t_r > 0``,
elsewhere.  Degenerations put ``t_r = 0`` (exact substitution) or, for
``limit_flag``, let ``t_r = c_r T^k`` with ``T -> infinity``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..coxeter import WeylElement
from ..errors import InvalidWordError, ParameterError
from ..poset import CellIndex
from ..subexpr import PositionedSubexpression, rightmost_subexpression
from .flags import FlagPoint, _n_of, classify_flag, lift
from .matrix import Rational, RationalMatrix, as_rational, sdot, sdot_inv, x_gen, y_gen

__all__ = [
    "CellSample", "random_rational", "random_params", "sample_cell", "sample_tilde_cell",
    "phi_translate", "degenerate_flag", "degenerations", "limit_flag",
]


def random_rational(rng: random.Random) -> Rational:
    return Rational(rng.randint(1, 100), rng.randint(1, 100))


def random_params(rng: random.Random, k: int) -> tuple[Rational, ...]:
    return tuple(random_rational(rng) for _ in range(k))


@dataclass(frozen=True)
class CellSample:
    cell: CellIndex
    word: tuple[int, ...]
    subexpression: PositionedSubexpression
    params: tuple[Rational, ...]
    flag: FlagPoint

    @property
    def free_positions(self) -> tuple[int, ...]:
        return self.subexpression.free_positions


def _prepare(v: WeylElement, w: WeylElement, word: Sequence[int] | None):
    if v.group is not w.group:
        raise ParameterError("v and w must come from the same group")
    _n_of(w.group)
    word = tuple(w.word if word is None else word)
    if w.group.from_word(word) != w or len(word) != w.length:
        raise InvalidWordError(f"{word} is not a reduced word for {w}")
    return word, rightmost_subexpression(word, v)


def _param_map(sub: PositionedSubexpression, params, *, allow_zero=()) -> dict[int, Rational]:
    free = sub.free_positions
    params = tuple(as_rational(t) for t in params)
    if len(params) != len(free):
        raise ParameterError(f"expected {len(free)} parameters, got {len(params)}")
    out = dict(zip(free, params))
    for r, t in out.items():
        if t <= 0 and not (t == 0 and r in allow_zero):
            raise ParameterError(f"parameter at position {r} must be positive, got {t}")
    return out


def _product(word, indices, values: Mapping[int, Rational], n: int, tilde=False) -> RationalMatrix:
    g = RationalMatrix.identity(n)
    taken = set(indices)
    for r, i in enumerate(word, start=1):
        if r in taken:
            g = g @ (sdot_inv(i, n) if tilde else sdot(i, n))
        elif values[r]:
            g = g @ (x_gen(i, values[r], n) if tilde else y_gen(i, values[r], n))
    return g


def sample_cell(v: WeylElement, w: WeylElement, word: Sequence[int] | None = None,
                params: Sequence | None = None, rng: random.Random | None = None) -> CellSample:
    """A point of the cell ``(v, w)``; parameters are drawn from ``rng`` when omitted."""
    word, sub = _prepare(v, w, word)
    if params is None:
        params = random_params(rng or random.Random(0), len(sub.free_positions))
    values = _param_map(sub, params)
    g = _product(word, sub.indices, values, w.group.rank + 1)
    return CellSample(CellIndex(v, w), word, sub, tuple(values.values()), FlagPoint(g))


def sample_tilde_cell(v: WeylElement, w: WeylElement, word: Sequence[int] | None = None,
                      params: Sequence | None = None, rng: random.Random | None = None) -> FlagPoint:
    """The mirrored parameterization based at ``B^-``, returned as a flag ``(...) w0-dot B^+``."""
    word, sub = _prepare(v, w, word)
    if params is None:
        params = random_params(rng or random.Random(0), len(sub.free_positions))
    values = _param_map(sub, params)
    n = w.group.rank + 1
    g = _product(word, sub.indices, values, n, tilde=True)
    return FlagPoint(g @ lift(w.group.longest_element()))


def phi_translate(flag: FlagPoint, w: WeylElement, params: Sequence | None = None,
                  rng: random.Random | None = None) -> FlagPoint:
    """``u . flag`` for ``u`` a positive ``y``-product along the canonical word of ``w0 w^-1``."""
    group = w.group
    n = _n_of(group)
    word = (group.longest_element() * w.inverse()).word
    if params is None:
        params = random_params(rng or random.Random(0), len(word))
    if len(params) != len(word) or any(as_rational(t) <= 0 for t in params):
        raise ParameterError(f"need {len(word)} positive parameters")
    u = RationalMatrix.identity(n)
    for i, t in zip(word, params):
        u = u @ y_gen(i, t, n)
    return flag.translate(u)


def degenerate_flag(v: WeylElement, w: WeylElement, word: Sequence[int] | None,
                    zero_set, params: Sequence) -> FlagPoint:
    word, sub = _prepare(v, w, word)
    zero_set = frozenset(zero_set)
    if not zero_set <= set(sub.free_positions):
        raise ParameterError(f"zero set {sorted(zero_set)} must lie in free positions {sub.free_positions}")
    values = _param_map(sub, params)
    for r in zero_set:
        values[r] = Rational(0)
    return FlagPoint(_product(word, sub.indices, values, w.group.rank + 1))


def degenerations(v: WeylElement, w: WeylElement, word: Sequence[int] | None,
                  zero_set, params: Sequence) -> CellIndex:
    """Cell reached by setting the parameters at ``zero_set`` (1-based positions) to 0."""
    return classify_flag(degenerate_flag(v, w, word, zero_set, params))


# Limits T -> infinity ---------------------------------------------------------
#
# Entries are Laurent polynomials in T, stored as {exponent: Rational}.

def _padd(p, q, sign=1):
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, 0) + sign * c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _pmatmul(a, b):
    n = len(a)
    out = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if not a[i][k]:
                continue
            for j in range(n):
                if b[k][j]:
                    out[i][j] = _padd(out[i][j], _pmul(a[i][k], b[k][j]))
    return out


def _const(m: RationalMatrix):
    return [[({0: x} if x else {}) for x in row] for row in m.rows]


def _solve(vectors: list[list[Rational]], target: list[Rational]) -> list[Rational] | None:
    """Coefficients expressing ``target`` in the span of ``vectors``, or None."""
    k = len(vectors)
    if not k:
        return None if any(target) else []
    n = len(target)
    a = [[vectors[c][r] for c in range(k)] + [target[r]] for r in range(n)]
    row, pivcols = 0, []
    for c in range(k):
        p = next((r for r in range(row, n) if a[r][c]), None)
        if p is None:
            continue
        a[row], a[p] = a[p], a[row]
        a[row] = [x / a[row][c] for x in a[row]]
        for r in range(n):
            if r != row and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivcols.append(c)
        row += 1
    if any(a[r][k] for r in range(row, n)):
        return None
    coeffs = [Rational(0)] * k
    for r, c in enumerate(pivcols):
        coeffs[c] = a[r][k]
    return coeffs


def _limit_columns(m, max_steps: int = 10_000) -> RationalMatrix:
    n = len(m)
    basis, leads = [], []
    for j in range(n):
        col = [m[r][j] for r in range(n)]
        for _ in range(max_steps):
            deg = max((max(p) for p in col if p), default=None)
            if deg is None:
                raise ParameterError("limit family is degenerate (column vanished)")
            col = [{e - deg: c for e, c in p.items()} for p in col]
            lead = [p.get(0, Rational(0)) for p in col]
            coeffs = _solve(leads, lead)
            if coeffs is None:
                basis.append(col)
                leads.append(lead)
                break
            for a, b in zip(coeffs, basis):
                if a:
                    col = [_padd(p, {e: a * c for e, c in q.items()}, -1) for p, q in zip(col, b)]
        else:
            raise ParameterError("limit computation did not terminate")
    return RationalMatrix.from_columns(leads)


def limit_flag(v: WeylElement, w: WeylElement, word: Sequence[int] | None, params: Sequence,
               zero_set=(), growth: Mapping[int, int] | Sequence[int] = ()) -> FlagPoint:
    """
    Exact limit of the cell parameterization as ``T -> infinity``, with
    ``t_r = 0`` on ``zero_set`` and ``t_r = c_r T^k`` on ``growth``
    (``{position: k}`` with ``k != 0``; a plain list means ``k = 1``).
    Negative ``k`` sends a coordinate to zero at a prescribed rate.
    """
    word, sub = _prepare(v, w, word)
    values = _param_map(sub, params)
    if not isinstance(growth, Mapping):
        growth = {r: 1 for r in growth}
    zero_set = frozenset(zero_set)
    free = set(sub.free_positions)
    if not zero_set <= free or not set(growth) <= free or zero_set & set(growth):
        raise ParameterError("zero and growth positions must be disjoint free positions")
    if any(not isinstance(k, int) or k == 0 for k in growth.values()):
        raise ParameterError("growth exponents must be nonzero integers")
    n = w.group.rank + 1
    taken = set(sub.indices)
    m = _const(RationalMatrix.identity(n))
    for r, i in enumerate(word, start=1):
        if r in taken:
            m = _pmatmul(m, _const(sdot(i, n)))
        elif r in zero_set:
            continue
        else:
            factor = _const(RationalMatrix.identity(n))
            factor[i][i - 1] = {growth.get(r, 0): values[r]}
            m = _pmatmul(m, factor)
    return FlagPoint(_limit_columns(m), normalize=True)
