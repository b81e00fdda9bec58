"""Parabolic subgroups ``W_J`` and their minimal / maximal coset representatives."""

from __future__ import annotations

from functools import cache, cached_property
from typing import Iterable

from .coxeter import CartanType, WeylElement, WeylGroup, weyl_group
from .errors import InvalidWordError

__all__ = [
    "ParabolicContext", "parabolic", "parabolic_elements", "min_coset_reps",
    "max_coset_reps", "longest_parabolic", "coset_factorize",
]


class ParabolicContext:
    """Coset data for ``W / W_J``, computed lazily and cached."""

    def __init__(self, group: WeylGroup, J: Iterable[int]):
        self.group = group
        self.J = tuple(sorted(set(J)))
        for j in self.J:
            if j not in group.index_set:
                raise InvalidWordError(f"J contains {j}, not an index of {group.cartan}")
        self._Jset = frozenset(self.J)

    def __repr__(self):
        return f"ParabolicContext({self.group.cartan}, J={list(self.J)})"

    @cached_property
    def W_J(self) -> list[WeylElement]:
        gens = [self.group.gen(j) for j in self.J]
        seen = {self.group.identity}
        frontier = [self.group.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    ws = w * s
                    if ws not in seen:
                        seen.add(ws)
                        nxt.append(ws)
            frontier = nxt
        return sorted(seen, key=WeylElement.sort_key)

    @cached_property
    def W_J_set(self) -> frozenset[WeylElement]:
        return frozenset(self.W_J)

    @cached_property
    def longest(self) -> WeylElement:
        return max(self.W_J, key=WeylElement.sort_key)

    @cached_property
    def min_reps(self) -> list[WeylElement]:
        return [w for w in self.group.elements() if self.is_min_rep(w)]

    @cached_property
    def max_reps(self) -> list[WeylElement]:
        wJ = self.longest
        return sorted((a * wJ for a in self.min_reps), key=WeylElement.sort_key)

    def is_min_rep(self, w: WeylElement) -> bool:
        return not (w.right_descents() & self._Jset)

    def is_max_rep(self, w: WeylElement) -> bool:
        return self._Jset <= w.right_descents()

    def in_W_J(self, w: WeylElement) -> bool:
        return set(w.word) <= self._Jset

    def factorize(self, w: WeylElement) -> tuple[WeylElement, WeylElement]:
        """Split ``w = a * b`` with ``a`` in ``W^J``, ``b`` in ``W_J``, lengths adding."""
        a, b = w, self.group.identity
        while True:
            hit = a.right_descents() & self._Jset
            if not hit:
                return a, b
            s = self.group.gen(min(hit))
            a, b = a * s, s * b


def parabolic(cartan: CartanType | str, J: Iterable[int]) -> ParabolicContext:
    """Shared, cached context per ``(type, J)``."""
    return _parabolic(CartanType.parse(cartan), tuple(sorted(set(J))))


@cache
def _parabolic(cartan: CartanType, J: tuple[int, ...]) -> ParabolicContext:
    return ParabolicContext(weyl_group(cartan), J)


def _ctx(ctx_or_group, J=None) -> ParabolicContext:
    if isinstance(ctx_or_group, ParabolicContext):
        return ctx_or_group
    group = ctx_or_group if isinstance(ctx_or_group, WeylGroup) else weyl_group(ctx_or_group)
    return parabolic(group.cartan, tuple(J or ()))


def parabolic_elements(ctx, J=None) -> list[WeylElement]:
    return list(_ctx(ctx, J).W_J)


def min_coset_reps(ctx, J=None) -> list[WeylElement]:
    return list(_ctx(ctx, J).min_reps)


def max_coset_reps(ctx, J=None) -> list[WeylElement]:
    return list(_ctx(ctx, J).max_reps)


def longest_parabolic(ctx, J=None) -> WeylElement:
    return _ctx(ctx, J).longest


def coset_factorize(w: WeylElement, ctx, J=None) -> tuple[WeylElement, WeylElement]:
    return _ctx(ctx, J).factorize(w)
