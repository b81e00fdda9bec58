"""
Index sets and closure posets for totally nonnegative cells.

Full flag variety cells are indexed by Bruhat intervals ``v <= w``; the
strata of ``G/P_J`` by triples ``(x, u, w)`` with ``x`` a maximal coset
representative, ``u`` in ``W_J``, ``w`` a minimal coset representative and
``x <= w u``.  A stratum ``(x', u', w')`` lies in the closure of ``(x, u, w)``
iff ``u'`` splits length-additively as ``u'_1 u'_2`` with

    x u^-1  <=  x' u'_2^-1  <=  w' u'_1  <=  w.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .coxeter import CartanType, WeylElement, WeylGroup, weyl_group
from .errors import EnumerationTooLarge, TnnCellsError
from .parabolic import parabolic

__all__ = [
    "NODE_CAP", "CellIndex", "StratumIndex", "ClosurePoset", "AxiomsReport",
    "enumerate_cells", "enumerate_QJ", "leq_fullflag", "leq_QJ", "relation_matrix_QJ",
    "closure_poset", "cell_poset", "poset_axioms_report", "export_poset", "parse_poset",
]

NODE_CAP = 10_000


@dataclass(frozen=True)
class CellIndex:
    v: WeylElement
    w: WeylElement

    @property
    def dim(self) -> int:
        return self.w.length - self.v.length

    def sort_key(self):
        return (self.dim, self.v.word, self.w.word)

    def __str__(self):
        return f"({self.v}, {self.w})"


@dataclass(frozen=True)
class StratumIndex:
    x: WeylElement
    u: WeylElement
    w: WeylElement

    @property
    def dim(self) -> int:
        return self.w.length + self.u.length - self.x.length

    def sort_key(self):
        return (self.dim, self.x.word, self.u.word, self.w.word)

    def __str__(self):
        return f"({self.x}, {self.u}, {self.w})"


Node = Union[CellIndex, StratumIndex]


def _group(cartan) -> WeylGroup:
    return cartan if isinstance(cartan, WeylGroup) else weyl_group(cartan)


def enumerate_cells(cartan, cap: int = NODE_CAP) -> list[CellIndex]:
    """All Bruhat intervals ``(v, w)``, ordered by dimension then words."""
    group = _group(cartan)
    els = group.elements()
    bru = group.bruhat_matrix()
    count = int(bru.sum())
    if count > cap:
        raise EnumerationTooLarge(f"{count} cells in {group.cartan} exceed node cap {cap}")
    cells = [CellIndex(els[a], els[b]) for a, b in zip(*np.nonzero(bru))]
    return sorted(cells, key=CellIndex.sort_key)


def enumerate_QJ(cartan, J: Iterable[int] = (), cap: int = NODE_CAP) -> list[StratumIndex]:
    """The triples ``(x, u, w)`` with ``x <= w u``, ordered by dimension then words."""
    group = _group(cartan)
    ctx = parabolic(group.cartan, tuple(sorted(set(J))))
    bru = group.bruhat_matrix()
    idx = group.index
    out = []
    for w in ctx.min_reps:
        for u in ctx.W_J:
            col = idx(w * u)
            for x in ctx.max_reps:
                if bru[idx(x), col]:
                    out.append(StratumIndex(x, u, w))
                    if len(out) > cap:
                        raise EnumerationTooLarge(
                            f"|Q^J| for {group.cartan}, J={list(ctx.J)} exceeds node cap {cap}")
    return sorted(out, key=StratumIndex.sort_key)


def leq_fullflag(a: CellIndex, b: CellIndex) -> bool:
    """``a`` lies in the closure of ``b``: ``b.v <= a.v <= a.w <= b.w``."""
    g = a.v.group
    return g.bruhat_leq(b.v, a.v) and g.bruhat_leq(a.v, a.w) and g.bruhat_leq(a.w, b.w)


def leq_QJ(a: StratumIndex, b: StratumIndex, J: Iterable[int] | None = None) -> bool:
    """Closure order on ``Q^J``, by search over length-additive splittings of ``a.u``."""
    g = a.x.group
    lo = b.x * b.u.inverse()
    for u1, u2 in g.factorizations(a.u):
        p = a.x * u2.inverse()
        q = a.w * u1
        if g.bruhat_leq(lo, p) and g.bruhat_leq(p, q) and g.bruhat_leq(q, b.w):
            return True
    return False


def relation_matrix_QJ(nodes: Sequence[StratumIndex]) -> np.ndarray:
    """Raw pairwise ``leq_QJ`` as a boolean matrix, ``R[a, b] = nodes[a] <= nodes[b]``."""
    n = len(nodes)
    rel = np.zeros((n, n), dtype=bool)
    if not n:
        return rel
    group = nodes[0].x.group
    bru = group.bruhat_matrix()
    idx = group.index
    lo = np.array([idx(b.x * b.u.inverse()) for b in nodes])
    hi = np.array([idx(b.w) for b in nodes])
    for a, node in enumerate(nodes):
        row = rel[a]
        for u1, u2 in group.factorizations(node.u):
            p = idx(node.x * u2.inverse())
            q = idx(node.w * u1)
            if bru[p, q]:
                row |= bru[lo, p] & bru[q, hi]
    return rel


def _relation_matrix_cells(nodes: Sequence[CellIndex]) -> np.ndarray:
    if not nodes:
        return np.zeros((0, 0), dtype=bool)
    group = nodes[0].v.group
    bru = group.bruhat_matrix()
    vi = np.array([group.index(c.v) for c in nodes])
    wi = np.array([group.index(c.w) for c in nodes])
    # a <= b iff b.v <= a.v and a.w <= b.w (a.v <= a.w holds for nodes)
    return bru[np.ix_(vi, vi)].T & bru[np.ix_(wi, wi)]


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float32 counts are exact below 2**24
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    closed = rel | np.eye(len(rel), dtype=bool)
    while True:
        step = closed | _bool_matmul(closed, closed)
        if np.array_equal(step, closed):
            return closed
        closed = step


def _covers(order: np.ndarray) -> list[tuple[int, int]]:
    strict = order & ~np.eye(len(order), dtype=bool)
    cov = strict & ~_bool_matmul(strict, strict)
    lower, upper = np.nonzero(cov)
    return sorted(zip(upper.tolist(), lower.tolist()))


@dataclass(eq=False)
class ClosurePoset:
    """Cells or strata with the closure order; ``order[a, b]`` means ``a`` below ``b``."""

    cartan: CartanType
    J: tuple[int, ...]
    nodes: list[Node]
    relation: np.ndarray
    order: np.ndarray = field(repr=False)
    covers: list[tuple[int, int]]

    @classmethod
    def from_relation(cls, cartan, J, nodes, relation) -> ClosurePoset:
        order = _transitive_closure(relation)
        return cls(CartanType.parse(cartan), tuple(J), list(nodes), relation, order, _covers(order))

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, ClosurePoset):
            return NotImplemented
        return (self.cartan == other.cartan and self.J == other.J
                and self.nodes == other.nodes and self.covers == other.covers)

    @property
    def dims(self) -> list[int]:
        return [node.dim for node in self.nodes]

    def leq(self, a: int, b: int) -> bool:
        return bool(self.order[a, b])

    def below(self, b: int) -> list[int]:
        return np.nonzero(self.order[:, b])[0].tolist()

    def f_vector(self) -> tuple[int, ...]:
        dims = self.dims
        if not dims:
            return ()
        return tuple(dims.count(d) for d in range(max(dims) + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * f for d, f in enumerate(self.f_vector()))

    def maximal(self) -> list[int]:
        strict = self.order & ~np.eye(len(self), dtype=bool)
        return [b for b in range(len(self)) if not strict[b].any()]

    def top(self) -> int | None:
        tops = self.maximal()
        return tops[0] if len(tops) == 1 else None


def closure_poset(cartan, J: Iterable[int] = (), cap: int = NODE_CAP) -> ClosurePoset:
    """Closure poset of the strata of ``G/P_J`` (for ``J`` empty: triples ``(v, e, w)``)."""
    group = _group(cartan)
    J = tuple(sorted(set(J)))
    nodes = enumerate_QJ(group, J, cap)
    return ClosurePoset.from_relation(group.cartan, J, nodes, relation_matrix_QJ(nodes))


def cell_poset(cartan, cap: int = NODE_CAP) -> ClosurePoset:
    """Closure poset of the cells of the full flag variety, ordered by intervals."""
    group = _group(cartan)
    nodes = enumerate_cells(group, cap)
    return ClosurePoset.from_relation(group.cartan, (), nodes, _relation_matrix_cells(nodes))


@dataclass
class AxiomsReport:
    cartan: str
    J: tuple[int, ...]
    nodes: int
    edges: int
    reflexive: bool
    antisymmetric: bool
    transitive: bool
    dimension_monotone: bool
    covers_drop_by_one: bool
    has_top: bool
    f_vector: tuple[int, ...]
    euler_characteristic: int
    witnesses: dict[str, list[int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.reflexive and self.antisymmetric and self.transitive and self.dimension_monotone

    def summary(self) -> str:
        flags = ", ".join(
            f"{name}={'yes' if getattr(self, name) else 'NO'}"
            for name in ("reflexive", "antisymmetric", "transitive",
                         "dimension_monotone", "covers_drop_by_one", "has_top"))
        J = "{" + ",".join(map(str, self.J)) + "}"
        return (f"{self.cartan} J={J}: {self.nodes} nodes, {self.edges} covers, "
                f"f={self.f_vector}, chi={self.euler_characteristic}; {flags}")


def _first(mask: np.ndarray) -> list[int] | None:
    hits = np.argwhere(mask)
    return hits[0].tolist() if len(hits) else None


def poset_axioms_report(p: ClosurePoset) -> AxiomsReport:
    """Check the order axioms on the raw pairwise relation (not its closure)."""
    rel = p.relation
    n = len(p)
    eye = np.eye(n, dtype=bool)
    dims = np.array(p.dims, dtype=int)
    witnesses = {}

    bad = ~np.diag(rel)
    if bad.any():
        witnesses["reflexive"] = [int(np.argmax(bad))]
    hit = _first(rel & rel.T & ~eye)
    if hit:
        witnesses["antisymmetric"] = hit
    hit = _first(_bool_matmul(rel, rel) & ~rel)
    if hit:
        a, c = hit
        b = int(np.argmax(rel[a] & rel[:, c]))
        witnesses["transitive"] = [a, b, c]
    hit = _first(rel & ~eye & (dims[:, None] >= dims[None, :]))
    if hit:
        witnesses["dimension_monotone"] = hit
    drops = [(u, l) for u, l in p.covers if dims[u] - dims[l] != 1]
    if drops:
        witnesses["covers_drop_by_one"] = list(drops[0])

    return AxiomsReport(
        cartan=str(p.cartan), J=p.J, nodes=n, edges=len(p.covers),
        reflexive="reflexive" not in witnesses,
        antisymmetric="antisymmetric" not in witnesses,
        transitive="transitive" not in witnesses,
        dimension_monotone="dimension_monotone" not in witnesses,
        covers_drop_by_one="covers_drop_by_one" not in witnesses,
        has_top=p.top() is not None,
        f_vector=p.f_vector(),
        euler_characteristic=p.euler_characteristic(),
        witnesses=witnesses,
    )


# Serialization -------------------------------------------------------------

def _zero_based(w: WeylElement) -> list[int]:
    return [i - 1 for i in w.word]


def _node_json(i: int, node: Node) -> dict:
    if isinstance(node, StratumIndex):
        return {"id": i, "x": _zero_based(node.x), "u": _zero_based(node.u),
                "w": _zero_based(node.w), "dim": node.dim}
    return {"id": i, "v": _zero_based(node.v), "w": _zero_based(node.w), "dim": node.dim}


def _node_label(node: Node) -> str:
    if isinstance(node, StratumIndex):
        return f"({node.x} | {node.u} | {node.w})"
    return f"({node.v} | {node.w})"


def export_poset(p: ClosurePoset, format: str = "json") -> bytes:
    if format == "json":
        doc = {
            "cartan": str(p.cartan),
            "J": list(p.J),
            "nodes": [_node_json(i, node) for i, node in enumerate(p.nodes)],
            "covers": [list(c) for c in p.covers],
        }
        return (json.dumps(doc, indent=1) + "\n").encode()
    if format == "dot":
        J = ",".join(map(str, p.J))
        lines = [f'digraph "{p.cartan} J={{{J}}}" {{', "  rankdir=TB;"]
        dims = p.dims
        for d in sorted(set(dims), reverse=True):
            members = " ".join(f"n{i};" for i, di in enumerate(dims) if di == d)
            lines.append(f"  {{ rank=same; {members} }}")
        for i, node in enumerate(p.nodes):
            lines.append(f'  n{i} [label="{_node_label(node)}\\ndim {node.dim}"];')
        for upper, lower in p.covers:
            lines.append(f"  n{upper} -> n{lower};")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {format!r}; expected 'json' or 'dot'")


def parse_poset(data: bytes | str) -> ClosurePoset:
    """Inverse of ``export_poset(p, 'json')``; the order is rebuilt from the covers."""
    doc = json.loads(data)
    group = weyl_group(doc["cartan"])

    def el(word):
        return group.from_word(i + 1 for i in word)

    nodes: list[Node] = []
    for i, raw in enumerate(doc["nodes"]):
        if raw["id"] != i:
            raise TnnCellsError(f"node ids must be 0..n-1 in order, got {raw['id']} at {i}")
        if "x" in raw:
            nodes.append(StratumIndex(el(raw["x"]), el(raw["u"]), el(raw["w"])))
        else:
            nodes.append(CellIndex(el(raw["v"]), el(raw["w"])))
    n = len(nodes)
    rel = np.eye(n, dtype=bool)
    for upper, lower in doc["covers"]:
        rel[lower, upper] = True
    return ClosurePoset.from_relation(group.cartan, tuple(doc["J"]), nodes, rel)


def coverage(reached: Iterable[Node], claimed: Iterable[Node]) -> Fraction:
    claimed = set(claimed)
    if not claimed:
        return Fraction(1)
    return Fraction(len(claimed & set(reached)), len(claimed))
