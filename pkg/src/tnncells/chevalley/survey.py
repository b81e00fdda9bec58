"""
Empirical verification harness.

Every suite walks the cells (or strata) of a small SL_n exhaustively, draws
seeded positive rational parameters, and records any disagreement with the
closure theorems together with enough data to reproduce it.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ..coxeter import WeylElement, WeylGroup
from ..errors import ClassificationError, ParameterError
from ..parabolic import parabolic
from ..poset import (
    CellIndex, StratumIndex, coverage, enumerate_cells, enumerate_QJ, leq_fullflag, leq_QJ,
)
from ..subexpr import rightmost_subexpression
from .cells import (
    degenerate_flag, limit_flag, phi_translate, random_params, sample_cell, sample_tilde_cell,
)
from .flags import FlagPoint, classify_flag, classify_parabolic, reduce, type_a_group
from .matrix import RationalMatrix, sdot, y_gen

__all__ = [
    "SurveyReport", "SuiteResult", "VerifyReport", "degeneration_survey", "task_rng",
    "check_round_trip", "check_tilde", "check_phi", "check_reduction", "check_degenerations",
    "check_parabolic", "run_verification", "all_subsets",
]

LIMIT_STATES = ("zero", "fixed", 1, -1)
MAX_FAILURES_KEPT = 20


def task_rng(seed: int, *parts) -> random.Random:
    """A generator determined by ``seed`` and the task description only."""
    return random.Random(":".join([str(seed)] + [repr(p) for p in parts]))


def _word_json(w: WeylElement) -> list[int]:
    return [i - 1 for i in w.word]


def _node_json(node) -> dict:
    if isinstance(node, StratumIndex):
        return {"x": _word_json(node.x), "u": _word_json(node.u), "w": _word_json(node.w)}
    return {"v": _word_json(node.v), "w": _word_json(node.w)}


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class SurveyReport:
    cell: CellIndex
    J: tuple[int, ...]
    stratum: StratumIndex | None
    degenerations: int
    reached: list[CellIndex]
    claimed: int
    coverage: Fraction
    reached_strata: list[StratumIndex] = field(default_factory=list)
    claimed_strata: int = 0
    stratum_coverage: Fraction | None = None
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        doc = {
            "cell": _node_json(self.cell),
            "J": list(self.J),
            "degenerations": self.degenerations,
            "violations": self.violations,
            "reached": [_node_json(c) for c in self.reached],
            "claimed": self.claimed,
            "coverage": _frac(self.coverage),
        }
        if self.stratum is not None:
            doc["stratum"] = _node_json(self.stratum)
            doc["reached_strata"] = [_node_json(s) for s in self.reached_strata]
            doc["claimed_strata"] = self.claimed_strata
            doc["stratum_coverage"] = _frac(self.stratum_coverage)
        return doc


def _sort_cells(cells):
    return sorted(cells, key=lambda c: c.sort_key())


def degeneration_survey(v: WeylElement, w: WeylElement, J: Iterable[int] = (), trials: int = 1,
                        seed: int = 0, words: Sequence[Sequence[int]] | None = None,
                        limits: bool = False) -> SurveyReport:
    """
    Degenerate the cell ``(v, w)`` along every subset of its coordinates (and,
    with ``limits``, along every mix of fixed / zero / ``T^{+-1}`` rates).
    Reached cells must satisfy the interval law; with ``J`` nonempty the
    reached strata must lie below the stratum of the undegenerated samples.
    """
    group = w.group
    J = tuple(sorted(set(J)))
    target = CellIndex(v, w)
    words = [tuple(x) for x in (words or group.reduced_words(w))]
    reached: set[CellIndex] = set()
    reached_strata: set[StratumIndex] = set()
    violations: list[dict] = []
    source = None
    count = 0

    def record(flag, repro):
        cell = classify_flag(flag)
        reached.add(cell)
        if not leq_fullflag(cell, target):
            violations.append({"kind": "cell", "reached": _node_json(cell), **repro})
        if J:
            stratum = classify_parabolic(flag, J)
            reached_strata.add(stratum)
            if not leq_QJ(stratum, source):
                violations.append({"kind": "stratum", "reached": _node_json(stratum), **repro})

    for word in words:
        free = rightmost_subexpression(word, v).free_positions
        for trial in range(trials):
            params = random_params(task_rng(seed, "degen", v.word, w.word, word, trial), len(free))
            base = {"seed": seed, "trial": trial, "word": [i - 1 for i in word],
                    "params": [_frac(t) for t in params]}
            if J:
                here = classify_parabolic(degenerate_flag(v, w, word, (), params), J)
                if source is None:
                    source = here
                elif here != source:
                    violations.append({"kind": "source", "reached": _node_json(here), **base})
            for k in range(len(free) + 1):
                for zero in itertools.combinations(free, k):
                    flag = degenerate_flag(v, w, word, zero, params)
                    record(flag, {**base, "zero_set": list(zero)})
                    count += 1
            if limits:
                for states in itertools.product(LIMIT_STATES, repeat=len(free)):
                    growth = {r: s for r, s in zip(free, states) if isinstance(s, int)}
                    if not growth:
                        continue
                    zero = [r for r, s in zip(free, states) if s == "zero"]
                    flag = limit_flag(v, w, word, params, zero, growth)
                    record(flag, {**base, "zero_set": zero,
                                  "growth": {str(r): k for r, k in growth.items()}})
                    count += 1

    claimed = [c for c in enumerate_cells(group) if leq_fullflag(c, target)]
    report = SurveyReport(
        cell=target, J=J, stratum=source, degenerations=count,
        reached=_sort_cells(reached), claimed=len(claimed),
        coverage=coverage(reached, claimed), violations=violations,
    )
    if J:
        claimed_strata = [s for s in enumerate_QJ(group, J) if leq_QJ(s, source)]
        report.reached_strata = _sort_cells(reached_strata)
        report.claimed_strata = len(claimed_strata)
        report.stratum_coverage = coverage(reached_strata, claimed_strata)
    return report


# Suites ----------------------------------------------------------------------
#
# Each suite is split into one task per cell; tasks return ``(passed, repro)``
# records and are merged in task order, so reports do not depend on workers.

@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[dict] = field(default_factory=list)
    failure_count: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def add(self, records: Iterable[tuple[bool, dict]]):
        for passed, repro in records:
            self.checks += 1
            if not passed:
                self.failure_count += 1
                if len(self.failures) < MAX_FAILURES_KEPT:
                    self.failures.append(repro)

    def add_survey(self, checks: int, violations: list[dict], **context):
        self.checks += checks
        self.failure_count += len(violations)
        room = max(0, MAX_FAILURES_KEPT - len(self.failures))
        self.failures.extend({**bad, **context} for bad in violations[:room])

    def to_json(self) -> dict:
        return {"name": self.name, "checks": self.checks, "ok": self.ok,
                "failure_count": self.failure_count, "failures": self.failures, **self.notes}


def _map(fn, tasks, workers: int):
    if workers <= 1:
        return map(fn, tasks)
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, tasks, chunksize=4))


def _repro(seed, cell, word, params, **extra):
    return {"seed": seed, "cell": _node_json(cell), "word": [i - 1 for i in word],
            "params": [_frac(t) for t in params], **extra}


def _sample_words(w: WeylElement, count: int) -> list[tuple[int, ...]]:
    # at least `count` samples, cycling through every reduced word
    words = w.group.reduced_words(w)
    return [words[k % len(words)] for k in range(max(count, len(words)))]


def _round_trip_task(args):
    cell, trials, seed = args
    out = []
    for k, word in enumerate(_sample_words(cell.w, trials)):
        s = sample_cell(cell.v, cell.w, word, rng=task_rng(seed, "rt", cell.v.word, cell.w.word, k))
        got = classify_flag(s.flag)
        out.append((got == cell, _repro(seed, cell, word, s.params, got=_node_json(got))))
    return out


def _tilde_task(args):
    cell, trials, seed = args
    w0 = cell.w.group.longest_element()
    expected = CellIndex(cell.w * w0, cell.v * w0)
    out = []
    for k in range(trials):
        rng = task_rng(seed, "tilde", cell.v.word, cell.w.word, k)
        params = random_params(rng, cell.dim)
        got = classify_flag(sample_tilde_cell(cell.v, cell.w, None, params))
        out.append((got == expected, _repro(seed, cell, cell.w.word, params, got=_node_json(got))))
    return out


def _phi_task(args):
    cell, trials, seed = args
    w0 = cell.w.group.longest_element()
    out = []
    for k in range(trials):
        rng = task_rng(seed, "phi", cell.v.word, cell.w.word, k)
        s = sample_cell(cell.v, cell.w, rng=rng)
        got = classify_flag(phi_translate(s.flag, cell.w, rng=rng))
        out.append((got == CellIndex(cell.v, w0), _repro(seed, cell, s.word, s.params, got=_node_json(got))))
    return out


def _reduction_task(args):
    cell, trials, seed = args
    group = cell.w.group
    n = group.rank + 1
    out = []
    for k, word in enumerate(_sample_words(cell.w, trials)):
        s = sample_cell(cell.v, cell.w, word, rng=task_rng(seed, "red", cell.v.word, cell.w.word, k))
        values = dict(zip(s.free_positions, s.params))
        taken = set(s.subexpression.indices)
        g = RationalMatrix.identity(n)
        for m in range(len(word) + 1):
            if m:
                i = word[m - 1]
                g = g @ (sdot(i, n) if m in taken else y_gen(i, values[m], n))
            w1 = group.from_word(word[:m])
            v1 = group.from_word(word[j - 1] for j in s.subexpression.indices if j <= m)
            try:
                # reduce re-checks both relative positions and raises on failure
                red = reduce(s.flag, w1)
                ok = red == FlagPoint(g) and classify_flag(red) == CellIndex(v1, w1)
            except ClassificationError:
                ok = False
            out.append((ok, _repro(seed, cell, word, s.params, prefix=m)))
    return out


def _degeneration_task(args):
    cell, J, trials, seed, all_words, limits = args
    words = None if all_words else [cell.w.word]
    return degeneration_survey(cell.v, cell.w, J, trials, seed, words, limits)


def _parabolic_task(args):
    triple, J, trials, seed, degenerate = args
    x, u, w = triple.x, triple.u, triple.w
    out, surveys = [], []
    for v, top in ((x, w * u), (x * u.inverse(), w)):
        cell = CellIndex(v, top)
        for k in range(trials):
            s = sample_cell(v, top, rng=task_rng(seed, "par", J, v.word, top.word, k))
            got = classify_parabolic(s.flag, J)
            out.append((got == triple, _repro(seed, cell, s.word, s.params, J=list(J),
                                              got=_node_json(got))))
        if degenerate:
            rep = degeneration_survey(v, top, J, 1, seed, [top.word])
            out.append((rep.stratum == triple, {"kind": "source", "cell": _node_json(cell),
                                                "seed": seed, "J": list(J)}))
            surveys.append((cell, rep))
    return out, surveys


def _simple_suite(name, task, group, trials, seed, workers):
    res = SuiteResult(name)
    for records in _map(task, [(c, trials, seed) for c in enumerate_cells(group)], workers):
        res.add(records)
    return res


def check_round_trip(group: WeylGroup, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Samples classify back to their cell, for every reduced word of ``w``."""
    return _simple_suite("round_trip", _round_trip_task, group, trials, seed, workers)


def check_tilde(group: WeylGroup, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    return _simple_suite("tilde_symmetry", _tilde_task, group, trials, seed, workers)


def check_phi(group: WeylGroup, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """``u . B`` lands in ``(v, w0)`` for ``u`` in ``U^-(w0 w^-1)`` and ``B`` in ``(v, w)``."""
    return _simple_suite("phi_translation", _phi_task, group, trials, seed, workers)


def check_reduction(group: WeylGroup, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """
    For each prefix ``w1`` of each reduced word, the reduction of a sample
    equals the truncated product and lies in the truncated cell.
    """
    return _simple_suite("reduction", _reduction_task, group, trials, seed, workers)


def check_degenerations(group: WeylGroup, trials: int, seed: int, limits: bool = False,
                        all_words: bool = True, workers: int = 1) -> SuiteResult:
    res = SuiteResult("degenerations_full_flag")
    cells = enumerate_cells(group)
    tasks = [(c, (), trials, seed, all_words, limits) for c in cells]
    cov = {}
    for cell, rep in zip(cells, _map(_degeneration_task, tasks, workers)):
        res.add_survey(rep.degenerations, rep.violations, cell=_node_json(cell))
        cov[str(cell)] = _frac(rep.coverage)
    res.notes["coverage"] = cov
    res.notes["full_coverage_cells"] = sum(c == "1/1" for c in cov.values())
    res.notes["cells"] = len(cov)
    return res


def check_parabolic(group: WeylGroup, J: Iterable[int], trials: int, seed: int,
                    degenerate: bool = True, workers: int = 1) -> SuiteResult:
    """
    Samples of ``(x, wu)`` and ``(xu^-1, w)`` classify to ``(x, u, w)``, and
    their degenerations stay below it in the ``Q^J`` order.
    """
    J = tuple(sorted(set(J)))
    res = SuiteResult(f"parabolic_J={list(J)}")
    tasks = [(t, J, trials, seed, degenerate) for t in enumerate_QJ(group, J)]
    for records, surveys in _map(_parabolic_task, tasks, workers):
        res.add(records)
        for cell, rep in surveys:
            res.add_survey(rep.degenerations, rep.violations, cell=_node_json(cell), J=list(J))
    return res


@dataclass
class VerifyReport:
    cartan: str
    seed: int
    trials: int
    suites: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def failures(self) -> list[tuple[str, dict]]:
        return [(s.name, f) for s in self.suites for f in s.failures]

    def to_json(self) -> dict:
        return {"cartan": self.cartan, "seed": self.seed, "trials": self.trials, "ok": self.ok,
                "suites": [s.to_json() for s in self.suites]}


def all_subsets(index_set: Sequence[int]) -> list[tuple[int, ...]]:
    return [J for k in range(len(index_set) + 1) for J in itertools.combinations(index_set, k)]


def run_verification(n: int, trials: int = 20, seed: int = 0,
                     Js: Iterable[Iterable[int]] | None = None, limits: bool | None = None,
                     workers: int = 1) -> VerifyReport:
    """
    All suites for SL_n.  ``Js`` defaults to every nonempty subset of the
    index set; limit degenerations default to on for n <= 3.
    """
    group = type_a_group(n)
    if trials <= 0:
        raise ParameterError(f"trials must be positive, got {trials}")
    if Js is None:
        Js = all_subsets(group.index_set)
    if limits is None:
        limits = n <= 3
    suites = [
        check_round_trip(group, trials, seed, workers),
        check_tilde(group, trials, seed, workers),
        check_phi(group, trials, seed, workers),
        check_reduction(group, 1, seed, workers),
        check_degenerations(group, 1, seed, limits=limits, workers=workers),
    ]
    for J in Js:
        J = tuple(sorted(set(J)))
        if J:
            parabolic(group.cartan, J)  # validates J
            suites.append(check_parabolic(group, J, trials, seed, workers=workers))
    return VerifyReport(str(group.cartan), seed, trials, suites)
