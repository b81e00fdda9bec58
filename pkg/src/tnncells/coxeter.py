"""
Finite Weyl groups.

An element is stored as the image ``w(rho)`` of the Weyl vector, written in
fundamental-weight coordinates.  Since ``rho`` is regular this is faithful,
and the coordinate ``<w(rho), alpha_i^vee>`` is negative exactly when ``i`` is
a left descent of ``w``.  Canonical (shortlex-minimal) reduced words come from
repeatedly stripping the smallest left descent.

>>> W = weyl_group("A2")
>>> s1, s2 = W.gen(1), W.gen(2)
>>> (s1 * s2 * s1).word
(1, 2, 1)
>>> W.longest_element() == s2 * s1 * s2
True
"""

from __future__ import annotations

import math
import os
import re
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cache, cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CartanTypeError, EnumerationTooLarge, GroupMismatchError, InvalidWordError

__all__ = [
    "DEFAULT_CAP", "CartanType", "WeylGroup", "WeylElement", "weyl_group",
    "default_cap", "enumerate_group", "multiply", "length", "inverse",
    "descents", "bruhat_leq", "longest_element", "all_reduced_words",
    "length_additive_factorizations",
]

DEFAULT_CAP = 10**6
BRUHAT_MATRIX_CAP = 5_000
CAP_ENV_VAR = "TNNCELLS_CAP"

Word = tuple[int, ...]


_cap_override: int | None = None


@contextmanager
def enumeration_cap(cap: int | None):
    """Temporarily replace the enumeration cap (``None`` leaves it alone)."""
    global _cap_override
    saved, _cap_override = _cap_override, cap if cap is not None else _cap_override
    try:
        yield
    finally:
        _cap_override = saved


def default_cap() -> int:
    """The enumeration cap, overridable through ``TNNCELLS_CAP``."""
    if _cap_override is not None:
        return _cap_override
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or not raw.strip():
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise CartanTypeError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise CartanTypeError(f"{CAP_ENV_VAR} must be positive, got {cap}")
    return cap


def _chain(rank: int) -> list[list[int]]:
    c = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        c[i][i] = 2
        if i + 1 < rank:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def _cartan_matrix(family: str, rank: int) -> list[list[int]]:
    # entry [i][j] = <alpha_i^vee, alpha_j>, Bourbaki labelling
    if family == "A":
        return _chain(rank)
    if family in "BC":
        c = _chain(rank)
        if family == "B":
            c[rank - 1][rank - 2] = -2
        else:
            c[rank - 2][rank - 1] = -2
        return c
    if family == "D":
        c = _chain(rank)
        c[rank - 2][rank - 1] = c[rank - 1][rank - 2] = 0
        c[rank - 3][rank - 1] = c[rank - 1][rank - 3] = -1
        return c
    if family == "G":
        return [[2, -1], [-3, 2]]
    if family == "F":
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    if family == "E":
        c = [[0] * rank for _ in range(rank)]
        # 1-3-4-5-6-7-8 with 2 attached to 4
        edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
        for i in range(rank):
            c[i][i] = 2
        for a, b in edges:
            if a <= rank and b <= rank:
                c[a - 1][b - 1] = c[b - 1][a - 1] = -1
        return c
    raise CartanTypeError(f"unsupported family {family!r}")


_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}
_FIXED_RANKS = {"G": (2,), "F": (4,), "E": (6, 7, 8)}


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family in _MIN_RANK:
            if self.rank < _MIN_RANK[self.family]:
                raise CartanTypeError(f"type {self.family}{self.rank} is not supported")
        elif self.family in _FIXED_RANKS:
            if self.rank not in _FIXED_RANKS[self.family]:
                raise CartanTypeError(f"type {self.family}{self.rank} is not a finite type")
        else:
            raise CartanTypeError(f"unknown Cartan family {self.family!r}")

    @classmethod
    def parse(cls, text: str | CartanType) -> CartanType:
        if isinstance(text, CartanType):
            return text
        m = re.fullmatch(r"\s*([A-Za-z])\s*_?\s*(\d+)\s*", str(text))
        if not m:
            raise CartanTypeError(f"cannot parse Cartan type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"

    @property
    def index_set(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(map(tuple, _cartan_matrix(self.family, self.rank)))

    @cached_property
    def coxeter_matrix(self) -> tuple[tuple[int, ...], ...]:
        c = self.cartan_matrix
        orders = {0: 2, 1: 3, 2: 4, 3: 6}
        return tuple(
            tuple(1 if i == j else orders[c[i][j] * c[j][i]] for j in range(self.rank))
            for i in range(self.rank)
        )

    def group_order(self) -> int:
        n = self.rank
        if self.family == "A":
            return math.factorial(n + 1)
        if self.family in "BC":
            return 2**n * math.factorial(n)
        if self.family == "D":
            return 2 ** (n - 1) * math.factorial(n)
        return {"G2": 12, "F4": 1152, "E6": 51840, "E7": 2903040, "E8": 696729600}[str(self)]

    def num_positive_roots(self) -> int:
        n = self.rank
        if self.family == "A":
            return n * (n + 1) // 2
        if self.family in "BC":
            return n * n
        if self.family == "D":
            return n * (n - 1)
        return {"G2": 6, "F4": 24, "E6": 36, "E7": 63, "E8": 120}[str(self)]


class WeylElement:
    """An element of a finite Weyl group; interned per group, so ``is`` works."""

    __slots__ = ("group", "key", "word", "_inverse", "__weakref__")

    def __init__(self, group: WeylGroup, key: tuple[int, ...], word: Word):
        self.group = group
        self.key = key
        self.word = word
        self._inverse = None

    def __repr__(self):
        return f"WeylElement({self.group.cartan}, {format_word(self.word)})"

    def __str__(self):
        return format_word(self.word)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self is other or (self.group is other.group and self.key == other.key)

    def __mul__(self, other: WeylElement) -> WeylElement:
        return self.group.multiply(self, other)

    def __reduce__(self):
        return (_element_from_word, (str(self.group.cartan), self.word))

    def __invert__(self) -> WeylElement:
        return self.inverse()

    @property
    def length(self) -> int:
        return len(self.word)

    def inverse(self) -> WeylElement:
        if self._inverse is None:
            inv = self.group.from_word(self.word[::-1])
            self._inverse, inv._inverse = inv, self
        return self._inverse

    def left_descents(self) -> frozenset[int]:
        return frozenset(i + 1 for i, c in enumerate(self.key) if c < 0)

    def right_descents(self) -> frozenset[int]:
        return self.inverse().left_descents()

    def is_identity(self) -> bool:
        return not self.word

    def sort_key(self):
        return (len(self.word), self.word)


def _element_from_word(cartan: str, word: Word) -> WeylElement:
    return weyl_group(cartan).from_word(word)


def format_word(word: Sequence[int]) -> str:
    return " ".join(f"s{i}" for i in word) if word else "e"


class WeylGroup:
    """A finite Weyl group context.  Immutable apart from memo tables."""

    def __init__(self, cartan: CartanType | str):
        self.cartan = CartanType.parse(cartan)
        self.rank = self.cartan.rank
        self.index_set = self.cartan.index_set
        cm = self.cartan.cartan_matrix
        # simple root alpha_i in fundamental-weight coordinates: <alpha_i, alpha_j^vee>
        self._roots = tuple(tuple(cm[j][i] for j in range(self.rank)) for i in range(self.rank))
        self._rho = (1,) * self.rank
        self._interned: dict[tuple[int, ...], WeylElement] = {}
        self._bruhat_memo: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
        self._elements: list[WeylElement] | None = None
        self.identity = self._intern(self._rho, ())

    def __repr__(self):
        return f"WeylGroup({self.cartan})"

    def __reduce__(self):
        return (weyl_group, (str(self.cartan),))

    # -- construction ------------------------------------------------------

    def _reflect(self, i: int, vec: tuple[int, ...]) -> tuple[int, ...]:
        c = vec[i]
        if c == 0:
            return vec
        root = self._roots[i]
        return tuple(a - c * r for a, r in zip(vec, root))

    def _intern(self, key: tuple[int, ...], word: Word | None = None) -> WeylElement:
        el = self._interned.get(key)
        if el is None:
            if word is None:
                word = self._canonical_word(key)
            el = self._interned.setdefault(key, WeylElement(self, key, word))
        return el

    def _canonical_word(self, key: tuple[int, ...]) -> Word:
        word = []
        vec = key
        while True:
            for i, c in enumerate(vec):
                if c < 0:
                    word.append(i + 1)
                    vec = self._reflect(i, vec)
                    break
            else:
                return tuple(word)

    def _check_index(self, i: int):
        if not isinstance(i, (int, np.integer)) or not 1 <= i <= self.rank:
            raise InvalidWordError(f"index {i!r} not in 1..{self.rank} for {self.cartan}")

    def gen(self, i: int) -> WeylElement:
        self._check_index(i)
        return self.from_word((i,))

    def gens(self) -> list[WeylElement]:
        return [self.gen(i) for i in self.index_set]

    def from_word(self, word: Iterable[int]) -> WeylElement:
        """The element ``s_{i_1} ... s_{i_m}`` (any word, reduced or not)."""
        word = tuple(word)
        vec = self._rho
        for i in reversed(word):
            self._check_index(i)
            vec = self._reflect(i - 1, vec)
        return self._intern(vec)

    def is_reduced(self, word: Sequence[int]) -> bool:
        return self.from_word(word).length == len(word)

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        if a.group is not self or b.group is not self:
            raise GroupMismatchError(f"cannot multiply {a!r} and {b!r} in {self}")
        vec = b.key
        for i in reversed(a.word):
            vec = self._reflect(i - 1, vec)
        return self._intern(vec)

    def _same(self, *els: WeylElement):
        for el in els:
            if el.group is not self:
                raise GroupMismatchError(f"{el!r} does not belong to {self}")

    # -- enumeration -------------------------------------------------------

    def order(self) -> int:
        return self.cartan.group_order()

    def elements(self, cap: int | None = None) -> list[WeylElement]:
        """All elements, sorted by (length, canonical word)."""
        cap = default_cap() if cap is None else cap
        if self.order() > cap:
            raise EnumerationTooLarge(f"|W({self.cartan})| = {self.order()} exceeds cap {cap}")
        if self._elements is None:
            seen = {self.identity.key: self.identity}
            queue = deque([self.identity])
            while queue:
                w = queue.popleft()
                for i in range(self.rank):
                    key = self._reflect(i, w.key)
                    if key not in seen:
                        seen[key] = self._intern(key)
                        queue.append(seen[key])
            els = sorted(seen.values(), key=WeylElement.sort_key)
            self._index = {w.key: n for n, w in enumerate(els)}
            self._elements = els
        return self._elements

    def index(self, w: WeylElement) -> int:
        self.elements()
        return self._index[w.key]

    def longest_element(self) -> WeylElement:
        # w0 sends rho to -rho
        return self._intern(tuple(-c for c in self._rho))

    # -- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, v: WeylElement, w: WeylElement) -> bool:
        self._same(v, w)
        return self._bruhat(v, w)

    def _bruhat(self, v: WeylElement, w: WeylElement) -> bool:
        if v.length > w.length:
            return False
        if v.length == 0:
            return True
        if v.length == w.length:
            return v.key == w.key
        memo_key = (v.key, w.key)
        hit = self._bruhat_memo.get(memo_key)
        if hit is not None:
            return hit
        # s a right descent of w: v <= w iff v <= ws or vs <= ws
        s = self.gen(min(w.right_descents()))
        ws = w * s
        result = self._bruhat(v, ws) or self._bruhat(v * s, ws)
        self._bruhat_memo[memo_key] = result
        return result

    @cache
    def bruhat_matrix(self) -> np.ndarray:
        """Boolean matrix ``M[a, b] = elements[a] <= elements[b]``."""
        els = self.elements()
        n = len(els)
        if n > BRUHAT_MATRIX_CAP:
            raise EnumerationTooLarge(
                f"Bruhat matrix of {self.cartan} ({n} elements) exceeds {BRUHAT_MATRIX_CAP}")
        # right[i][a] = index of els[a] * s_i
        right = [np.array([self.index(w * s) for w in els]) for s in self.gens()]
        m = np.zeros((n, n), dtype=bool)
        m[0, 0] = True
        # columns in length order; with s a right descent of w,
        # {v <= w} = {v <= ws} union {v s : v <= ws}
        for b in range(1, n):
            i = min(els[b].right_descents()) - 1
            c = right[i][b]
            col = m[:, c]
            m[:, b] = col
            m[right[i][col], b] = True
        m.setflags(write=False)
        return m

    # -- words -------------------------------------------------------------

    def reduced_words(self, w: WeylElement, limit: int = 100_000) -> list[Word]:
        """Every reduced word of ``w`` in lexicographic order."""
        self._same(w)
        memo: dict[tuple[int, ...], list[Word]] = {}

        def words(x: WeylElement) -> list[Word]:
            if x.length == 0:
                return [()]
            got = memo.get(x.key)
            if got is None:
                got = []
                for i in sorted(x.left_descents()):
                    got.extend((i,) + rest for rest in words(self.gen(i) * x))
                    if len(got) > limit:
                        raise EnumerationTooLarge(f"{w!r} has more than {limit} reduced words")
                memo[x.key] = got
            return got

        return words(w)

    def factorizations(self, w: WeylElement) -> list[tuple[WeylElement, WeylElement]]:
        """All ``(a, b)`` with ``a * b == w`` and ``len(a) + len(b) == len(w)``."""
        self._same(w)
        found: dict[tuple, tuple[WeylElement, WeylElement]] = {}
        stack = [(self.identity, w)]
        while stack:
            a, b = stack.pop()
            if a.key in found:
                continue
            found[a.key] = (a, b)
            for i in b.left_descents():
                s = self.gen(i)
                stack.append((a * s, s * b))
        return sorted(found.values(), key=lambda ab: ab[0].sort_key())


def weyl_group(cartan: CartanType | str) -> WeylGroup:
    """The shared group context for a Cartan type."""
    return _weyl_group(CartanType.parse(cartan))


@cache
def _weyl_group(cartan: CartanType) -> WeylGroup:
    return WeylGroup(cartan)


# Functional surface ---------------------------------------------------------

def enumerate_group(cartan: CartanType | str, cap: int | None = None) -> list[WeylElement]:
    return list(weyl_group(cartan).elements(cap))


def multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    if a.group is not b.group:
        raise GroupMismatchError(f"mismatched groups {a.group.cartan} and {b.group.cartan}")
    return a.group.multiply(a, b)


def length(w: WeylElement) -> int:
    return w.length


def inverse(w: WeylElement) -> WeylElement:
    return w.inverse()


def descents(w: WeylElement, side: str = "right") -> frozenset[int]:
    if side == "right":
        return w.right_descents()
    if side == "left":
        return w.left_descents()
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def bruhat_leq(v: WeylElement, w: WeylElement) -> bool:
    if v.group is not w.group:
        raise GroupMismatchError(f"mismatched groups {v.group.cartan} and {w.group.cartan}")
    return v.group.bruhat_leq(v, w)


def longest_element(cartan: CartanType | str) -> WeylElement:
    return weyl_group(cartan).longest_element()


def all_reduced_words(w: WeylElement, limit: int = 100_000) -> set[Word]:
    return set(w.group.reduced_words(w, limit))


def length_additive_factorizations(w: WeylElement) -> list[tuple[WeylElement, WeylElement]]:
    return w.group.factorizations(w)


def iter_subwords(word: Sequence[int]) -> Iterator[tuple[tuple[int, ...], Word]]:
    """Yield ``(positions, letters)`` for every subword, positions 0-based."""
    m = len(word)
    for mask in range(1 << m):
        pos = tuple(r for r in range(m) if mask >> r & 1)
        yield pos, tuple(word[r] for r in pos)
