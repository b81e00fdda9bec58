"""
Acceptance suite: one test per criterion, exact arithmetic, zero tolerance.

Run on its own with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line
per criterion is printed at the end of the session.
"""

import subprocess
import sys
import time
from contextlib import contextmanager
from itertools import combinations

import numpy as np
import pytest

from oracles import CoxeterOracle, f_vector
from tnncells.chevalley import flags, survey
from tnncells.chevalley.flags import type_a_group
from tnncells.chevalley.survey import (
    all_subsets, check_degenerations, check_parabolic, check_phi, check_reduction,
    check_round_trip, check_tilde, degeneration_survey,
)
from tnncells.coxeter import weyl_group
from tnncells.errors import ClassificationError
from tnncells.poset import (
    CellIndex, cell_poset, closure_poset, enumerate_cells, enumerate_QJ, leq_QJ,
    poset_axioms_report, relation_matrix_QJ,
)

RESULTS: dict[int, str] = {}
_PARTS: dict[int, list[tuple[bool, str, float]]] = {}
SEED = 0


@contextmanager
def criterion(number: int, title: str):
    """Record a PASS/FAIL line; parametrized criteria pass only if every part does."""
    notes: list[str] = []
    start = time.perf_counter()
    parts = _PARTS.setdefault(number, [])
    try:
        yield notes
        parts.append((True, "; ".join(notes), time.perf_counter() - start))
    except BaseException:
        parts.append((False, "failed", time.perf_counter() - start))
        raise
    finally:
        ok = all(p[0] for p in parts)
        detail = " | ".join(p[1] for p in parts)
        seconds = sum(p[2] for p in parts)
        RESULTS[number] = f"{'PASS' if ok else 'FAIL'}  {number:>2}  {title} [{detail}] ({seconds:.1f} s)"
        print(RESULTS[number])


def cold_seconds(setup: str, body: str) -> float:
    """Wall time of ``body`` in a fresh interpreter, after ``setup``."""
    code = f"{setup}\nimport time\nt = time.perf_counter()\n{body}\nprint(time.perf_counter() - t)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    return float(out.stdout.split()[-1])


def _oracle_f_vector(name, J):
    o = CoxeterOracle(name)
    return f_vector(o.triple_dim(t) for t in o.triples(J))


def test_criterion_01_a2_full_flag_poset():
    with criterion(1, "A2, J=(): 19 cells, f-vector (6, 8, 4, 1), a 3-ball") as notes:
        p = closure_poset("A2", ())
        assert len(p) == 19
        assert p.f_vector() == (6, 8, 4, 1) == _oracle_f_vector("A2", ())
        assert p.euler_characteristic() == 1
        cells = cell_poset("A2")
        assert cells.covers == p.covers
        # boundary of the top cell is a 2-sphere, edges have two ends, rank-2 intervals are diamonds
        top = p.top()
        assert p.nodes[top].dim == 3
        assert sum((-1) ** n.dim for i, n in enumerate(p.nodes) if i != top) == 2
        for e, node in enumerate(p.nodes):
            if node.dim == 1:
                assert sum(1 for u, _ in p.covers if u == e) == 2
        for a in range(19):
            for b in range(19):
                if p.leq(a, b) and p.nodes[b].dim - p.nodes[a].dim == 2:
                    assert sum(p.leq(a, c) and p.leq(c, b) for c in range(19)) == 4
        seconds = cold_seconds("from tnncells.poset import closure_poset", "closure_poset('A2', ())")
        assert seconds < 1.0
        notes.append(f"{len(p.covers)} covers, cold build {seconds:.3f} s")


def test_criterion_02_a2_j1_triangle():
    with criterion(2, "A2, J={1}: |Q^J| = 7, f-vector (3, 3, 1), face poset of a triangle") as notes:
        p = closure_poset("A2", (1,))
        assert len(p) == 7
        assert p.f_vector() == (3, 3, 1) == _oracle_f_vector("A2", (1,))
        verts = {i for i, n in enumerate(p.nodes) if n.dim == 0}
        edges = [i for i, n in enumerate(p.nodes) if n.dim == 1]
        ends = [frozenset(l for u, l in p.covers if u == e) for e in edges]
        assert all(len(x) == 2 and x <= verts for x in ends)
        assert len(set(ends)) == 3
        top = p.top()
        assert {l for u, l in p.covers if u == top} == set(edges)
        assert len(p.covers) == 9
        seconds = cold_seconds("from tnncells.poset import closure_poset", "closure_poset('A2', (1,))")
        assert seconds < 1.0
        notes.append(f"top {p.nodes[top]}, cold build {seconds:.3f} s")


def test_criterion_03_order_axioms():
    with criterion(3, "order axioms for every J on A2, B2, G2, A3, B3") as notes:
        body = (
            "from itertools import combinations\n"
            "from tnncells.coxeter import weyl_group\n"
            "from tnncells.poset import closure_poset, poset_axioms_report\n"
            "bad = []\n"
            "for name in ['A2', 'B2', 'G2', 'A3', 'B3']:\n"
            "    I = weyl_group(name).index_set\n"
            "    for k in range(len(I) + 1):\n"
            "        for J in combinations(I, k):\n"
            "            r = poset_axioms_report(closure_poset(name, J))\n"
            "            if not r.ok: bad.append((name, J, r.witnesses))\n"
            "assert not bad, bad"
        )
        seconds = cold_seconds("", body)
        assert seconds < 60.0
        count = 0
        for name in ["A2", "B2", "G2", "A3", "B3"]:
            for J in all_subsets(weyl_group(name).index_set):
                r = poset_axioms_report(closure_poset(name, J))
                assert r.reflexive and r.antisymmetric and r.transitive, (name, J, r.witnesses)
                assert r.dimension_monotone, (name, J, r.witnesses)
                count += 1
        notes.append(f"{count} posets, cold run {seconds:.1f} s")


def test_criterion_04_empty_J_is_interval_order():
    with criterion(4, "J=(): leq_QJ equals v <= v' <= w' <= w, rank <= 3") as notes:
        pairs = 0
        for name in ["A1", "A2", "B2", "G2", "A3", "B3", "C3"]:
            o = CoxeterOracle(name)
            nodes = enumerate_QJ(name, ())
            g = [(o.element(n.x.word), o.element(n.w.word)) for n in nodes]
            expected = np.array([[o.bruhat(v2, v1) and o.bruhat(w1, w2)
                                  for (v2, w2) in g] for (v1, w1) in g])
            assert np.array_equal(relation_matrix_QJ(nodes), expected), name
            if len(nodes) <= 300:
                for a, na in enumerate(nodes):
                    for b, nb in enumerate(nodes):
                        assert leq_QJ(na, nb) == expected[a, b]
            pairs += len(nodes) ** 2
        notes.append(f"{pairs} node pairs")


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_05_round_trip(n):
    title = "round-trip classification, 20 samples per cell, every reduced word"
    with criterion(5, title) as notes:
        group = type_a_group(n)
        result = check_round_trip(group, 20, SEED)
        expected = sum(max(20, len(group.reduced_words(c.w))) for c in enumerate_cells(group))
        assert result.checks == expected
        assert result.failure_count == 0, result.failures
        notes.append(f"A{n - 1}: {result.checks} samples")


def test_criterion_06_degeneration_subset_law():
    with criterion(6, "degeneration subset law on A2 and A3; full coverage on A2") as notes:
        a2 = check_degenerations(type_a_group(3), 1, SEED, limits=True)
        assert a2.failure_count == 0, a2.failures
        assert a2.notes["full_coverage_cells"] == a2.notes["cells"] == 19, a2.notes["coverage"]
        a2_more = check_degenerations(type_a_group(3), 5, SEED + 1)
        assert a2_more.failure_count == 0, a2_more.failures
        a3 = check_degenerations(type_a_group(4), 1, SEED)
        assert a3.failure_count == 0, a3.failures
        notes.append(f"A2 {a2.checks + a2_more.checks} degenerations, coverage 19/19 cells")
        notes.append(f"A3 {a3.checks} degenerations, full coverage on "
                     f"{a3.notes['full_coverage_cells']}/{a3.notes['cells']} cells (zero substitution only)")


@pytest.mark.parametrize("n, trials", [(3, 20), (4, 5)])
def test_criterion_07_parabolic_round_trip(n, trials):
    with criterion(7, "parabolic round trip from (x, wu) and (xu^-1, w), every J") as notes:
        group = type_a_group(n)
        total = 0
        for J in all_subsets(group.index_set):
            result = check_parabolic(group, J, trials, SEED, degenerate=False)
            assert result.failure_count == 0, (J, result.failures)
            assert result.checks == 2 * trials * len(enumerate_QJ(group, J))
            total += result.checks
        notes.append(f"A{n - 1}: {total} samples")


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_08_parabolic_degenerations(n):
    with criterion(8, "degenerations in G/P stay below the source stratum, every J") as notes:
        group = type_a_group(n)
        total = 0
        for J in all_subsets(group.index_set):
            for triple in enumerate_QJ(group, J):
                x, u, w = triple.x, triple.u, triple.w
                for v, top in ((x, w * u), (x * u.inverse(), w)):
                    words = None if n == 3 else [top.word]
                    rep = degeneration_survey(v, top, J, 1, SEED, words)
                    assert rep.violations == [], rep.violations[:3]
                    if J:
                        assert rep.stratum == triple
                        assert all(leq_QJ(s, triple) for s in rep.reached_strata)
                    else:
                        # G/B: the stratum is the cell (x, w) itself
                        assert rep.cell == CellIndex(x, w)
                    total += rep.degenerations
        notes.append(f"A{n - 1}: {total} degenerations")


def test_criterion_09_tilde_and_phi():
    with criterion(9, "tilde identity and phi_w property, 20 trials per A2 cell") as notes:
        group = type_a_group(3)
        tilde = check_tilde(group, 20, SEED)
        phi = check_phi(group, 20, SEED)
        assert tilde.failure_count == 0, tilde.failures
        assert phi.failure_count == 0, phi.failures
        assert tilde.checks == phi.checks == 19 * 20
        notes.append(f"{tilde.checks + phi.checks} checks")


def test_criterion_10_reduction_map(monkeypatch):
    with criterion(10, "reduction map: both position conditions on every call, truncated products") as notes:
        calls = {"reduce": 0, "position": 0}
        real_reduce, real_position = flags.reduce, flags.relative_position

        def counting_reduce(*args):
            calls["reduce"] += 1
            return real_reduce(*args)

        def counting_position(*args):
            calls["position"] += 1
            return real_position(*args)

        monkeypatch.setattr(survey, "reduce", counting_reduce)
        monkeypatch.setattr(flags, "relative_position", counting_position)
        total = 0
        for n in (3, 4):
            result = check_reduction(type_a_group(n), 1, SEED)
            assert result.failure_count == 0, result.failures
            total += result.checks
        assert calls["reduce"] == total
        assert calls["position"] == 2 * calls["reduce"]

        # the checks are live: a corrupted decomposition is rejected
        monkeypatch.setattr(flags, "relative_position", real_position)
        monkeypatch.setattr(flags, "bruhat_decompose",
                            lambda g: (tuple(range(g.n)), g.identity(g.n)))
        group = type_a_group(3)
        s = survey.sample_cell(group.identity, group.longest_element(), rng=survey.task_rng(0))
        with pytest.raises(ClassificationError):
            real_reduce(s.flag, group.identity)
        notes.append(f"{total} reduce calls on A2 and A3, each re-checked twice")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
