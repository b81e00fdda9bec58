"""
Rightmost reduced subexpressions.

Given a reduced word ``(i_1, ..., i_m)`` for ``w`` and ``v <= w``, there is a
unique reduced subexpression ``(j_1 < ... < j_k)`` for ``v`` such that each
partial product ``v_l = s_{i_{j_1}} ... s_{i_{j_l}}`` satisfies
``v_l s_{i_r} > v_l`` for all ``j_l < r <= j_{l+1}`` (with ``j_{k+1} = m``).
Positions are 1-based here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .coxeter import WeylElement, WeylGroup
from .errors import InvalidWordError, NoSubexpressionError

__all__ = [
    "PositionedSubexpression", "rightmost_subexpression", "verify_rightmost",
    "reduced_subexpressions",
]


@dataclass(frozen=True)
class PositionedSubexpression:
    word: tuple[int, ...]
    indices: tuple[int, ...]
    v: WeylElement

    @property
    def free_positions(self) -> tuple[int, ...]:
        """Positions (1-based) not used by the subexpression."""
        used = set(self.indices)
        return tuple(r for r in range(1, len(self.word) + 1) if r not in used)

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(self.word[j - 1] for j in self.indices)


def _check_word(group: WeylGroup, word: Sequence[int]) -> tuple[int, ...]:
    word = tuple(int(i) for i in word)
    if not group.is_reduced(word):
        raise InvalidWordError(f"word {word} is not reduced in {group.cartan}")
    return word


def rightmost_subexpression(word: Sequence[int], v: WeylElement) -> PositionedSubexpression:
    """
    Scan right to left, taking position ``r`` whenever ``s_{i_r}`` is a right
    descent of the part of ``v`` still to be matched.

    >>> from tnncells.coxeter import weyl_group
    >>> W = weyl_group("A2")
    >>> rightmost_subexpression((1, 2, 1), W.gen(1)).indices
    (3,)
    """
    group = v.group
    word = _check_word(group, word)
    rest = v
    taken = []
    for r in range(len(word), 0, -1):
        i = word[r - 1]
        if i in rest.right_descents():
            taken.append(r)
            rest = rest * group.gen(i)
    if not rest.is_identity():
        raise NoSubexpressionError(f"{v} is not below {group.from_word(word)} in Bruhat order")
    return PositionedSubexpression(word, tuple(reversed(taken)), v)


def verify_rightmost(word: Sequence[int], indices: Sequence[int], v: WeylElement) -> bool:
    """Check the subexpression conditions directly, without constructing anything."""
    group = v.group
    word = tuple(word)
    indices = tuple(indices)
    m = len(word)
    if any(not 1 <= j <= m for j in indices) or list(indices) != sorted(set(indices)):
        return False
    prod = group.from_word(word[j - 1] for j in indices)
    if prod != v or prod.length != len(indices):
        return False
    bounds = indices + (m,)
    prefix = group.identity
    for l, j in enumerate(indices):
        prefix = prefix * group.gen(word[j - 1])
        for r in range(j + 1, bounds[l + 1] + 1):
            if (prefix * group.gen(word[r - 1])).length < prefix.length:
                return False
    return True


def reduced_subexpressions(word: Sequence[int], v: WeylElement) -> list[tuple[int, ...]]:
    """All 1-based index sets giving a reduced subexpression for ``v`` (brute force)."""
    group = v.group
    word = tuple(word)
    k = v.length
    return [
        tuple(j + 1 for j in pos)
        for pos in combinations(range(len(word)), k)
        if group.from_word(word[j] for j in pos) == v
    ]
