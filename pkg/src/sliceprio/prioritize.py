"""Coverage-weighted test prioritization, the ANC baseline, and APFD.

Each test's weight is split by band: critical nodes it covers contribute
to ``wtc``, moderate ones to ``wtm``, weak ones to ``wtw``.  Tests are
ordered by ``wt``, then ``wtc``, ``wtm`` and ``wtw``, all descending.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .weights import Band, WeightMap

log = logging.getLogger(__name__)


class PrioritizationError(ValueError):
    pass


class UndetectedFaultError(PrioritizationError):
    pass


@dataclass(frozen=True)
class TestCase:
    id: str
    covered: frozenset[str] = frozenset()

    __test__ = False  # not a pytest class

    def __post_init__(self) -> None:
        if not isinstance(self.covered, frozenset):
            object.__setattr__(self, "covered", frozenset(self.covered))


@dataclass(frozen=True)
class TestWeights:
    wtc: int = 0
    wtm: int = 0
    wtw: int = 0

    __test__ = False

    @property
    def wt(self) -> int:
        return self.wtc + self.wtm + self.wtw

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.wt, self.wtc, self.wtm, self.wtw)

    def as_tuple(self) -> tuple[int, int, int, int]:
        """(wtc, wtm, wtw, wt), the column order of the weight table."""
        return (self.wtc, self.wtm, self.wtw, self.wt)


@dataclass(frozen=True)
class RankedTest:
    test_id: str
    rank: int
    weights: TestWeights | None = None
    score: float | None = None


@dataclass(frozen=True)
class PrioritizedSuite:
    entries: tuple[RankedTest, ...]
    ties: tuple[tuple[str, ...], ...] = ()
    strategy: str = "fpanc"

    @property
    def order(self) -> list[str]:
        return [e.test_id for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def test_weights(test: TestCase, weights: WeightMap) -> TestWeights:
    """Sum covered node weights per band; ids missing from the map are skipped."""
    sums = {Band.CRITICAL: 0, Band.MODERATE: 0, Band.WEAK: 0}
    unknown = []
    for node in sorted(test.covered):
        if node not in weights:
            unknown.append(node)
            continue
        sums[weights.band(node)] += weights[node]
    if unknown:
        log.debug("test %s covers %d node(s) outside the weight map: %s",
                  test.id, len(unknown), ", ".join(unknown))
    return TestWeights(sums[Band.CRITICAL], sums[Band.MODERATE], sums[Band.WEAK])


test_weights.__test__ = False  # type: ignore[attr-defined]


def _check_suite(suite: Sequence[TestCase]) -> None:
    if not suite:
        raise PrioritizationError("cannot prioritize an empty test suite")
    ids = [t.id for t in suite]
    if len(set(ids)) != len(ids):
        raise PrioritizationError("test ids must be unique")


def prioritize(suite: Sequence[TestCase], weights: WeightMap) -> PrioritizedSuite:
    """Stable descending sort on (wt, wtc, wtm, wtw).

    Tests equal on all four keys keep their input order and are reported
    together in ``ties``.
    """
    _check_suite(suite)
    scored = [(t, test_weights(t, weights)) for t in suite]
    outside = {n for t in suite for n in t.covered if n not in weights}
    if outside:
        log.info("%d covered node(s) lie outside the weight map and add nothing", len(outside))
    scored.sort(key=lambda tw: tw[1].key, reverse=True)  # sort() is stable under reverse=True
    entries = tuple(RankedTest(t.id, i + 1, w, float(w.wt)) for i, (t, w) in enumerate(scored))

    ties: list[tuple[str, ...]] = []
    group: list[str] = []
    prev = None
    for t, w in scored:
        if w.key != prev and group:
            if len(group) > 1:
                ties.append(tuple(group))
            group = []
        group.append(t.id)
        prev = w.key
    if len(group) > 1:
        ties.append(tuple(group))
    return PrioritizedSuite(entries, tuple(ties), "fpanc")


def anc_prioritize(suite: Sequence[TestCase], affected: Iterable[str],
                   decay: str = "halve") -> PrioritizedSuite:
    """Greedy affected-node coverage with decaying node weights.

    Every affected node starts at 1.0.  Each round picks the unscheduled test
    with the largest summed weight over the affected nodes it covers (first
    in input order on ties), then decays those nodes: ``halve`` multiplies
    by 0.5, ``subtract`` takes 0.5 off, floored at 0.
    """
    _check_suite(suite)
    if decay not in ("halve", "subtract"):
        raise ValueError(f"decay must be 'halve' or 'subtract', got {decay!r}")
    weight = {n: 1.0 for n in affected}
    remaining = list(suite)
    entries = []
    while remaining:
        best_i, best_score = 0, None
        for i, t in enumerate(remaining):
            score = sum(weight[n] for n in t.covered if n in weight)
            if best_score is None or score > best_score:
                best_i, best_score = i, score
        pick = remaining.pop(best_i)
        entries.append(RankedTest(pick.id, len(entries) + 1, None, best_score))
        for n in pick.covered:
            if n in weight:
                weight[n] = weight[n] * 0.5 if decay == "halve" else max(0.0, weight[n] - 0.5)
    return PrioritizedSuite(tuple(entries), (), "anc")


# ---- evaluation ------------------------------------------------------------

@dataclass(frozen=True)
class FaultMatrix:
    """Which tests detect which faults."""

    tests: tuple[str, ...]
    faults: tuple[str, ...]
    detects: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        known_t, known_f = set(self.tests), set(self.faults)
        for t, f in self.detects:
            if t not in known_t or f not in known_f:
                raise PrioritizationError(f"detection ({t}, {f}) names an unknown test or fault")

    @classmethod
    def from_rows(cls, tests: Sequence[str], rows: Mapping[str, Iterable[str]]) -> "FaultMatrix":
        """``rows`` maps each fault to the tests that detect it."""
        return cls(tuple(tests), tuple(rows),
                   frozenset((t, f) for f, ts in rows.items() for t in ts))

    def detected_by(self, test_id: str) -> set[str]:
        return {f for t, f in self.detects if t == test_id}


def _check_ordering(ordering: Sequence[str], faults: FaultMatrix) -> None:
    known = set(faults.tests)
    missing = [t for t in ordering if t not in known]
    if missing:
        raise PrioritizationError(f"tests not in the fault matrix: {', '.join(missing)}")
    if len(set(ordering)) != len(ordering):
        raise PrioritizationError("ordering repeats a test")


def first_detection(ordering: Sequence[str], faults: FaultMatrix,
                    permissive: bool = False) -> list[int]:
    """1-based position of the first detecting test, per fault."""
    _check_ordering(ordering, faults)
    position = {t: i + 1 for i, t in enumerate(ordering)}
    first: dict[str, int] = {}
    for t, f in faults.detects:
        if t in position and position[t] < first.get(f, len(ordering) + 1):
            first[f] = position[t]
    out = []
    for f in faults.faults:
        if f in first:
            out.append(first[f])
        elif permissive:
            out.append(len(ordering) + 1)
        else:
            raise UndetectedFaultError(f"fault {f} is not detected by any test in the ordering")
    return out


def apfd(ordering: Sequence[str], faults: FaultMatrix, permissive: bool = False) -> float:
    """1 - sum(F_i) / (n * l) + 1 / (2n)."""
    n, l = len(ordering), len(faults.faults)
    if n == 0 or l == 0:
        raise PrioritizationError("APFD needs at least one test and one fault")
    positions = first_detection(ordering, faults, permissive)
    return 1.0 - sum(positions) / (n * l) + 1.0 / (2 * n)


def percent_detected_curve(ordering: Sequence[str], faults: FaultMatrix,
                           permissive: bool = False) -> list[float]:
    """Cumulative percentage of faults found after each test."""
    if not ordering:
        return []
    l = len(faults.faults)
    if l == 0:
        raise PrioritizationError("fault matrix has no faults")
    first_detection(ordering, faults, permissive)  # same preconditions as apfd
    found: set[str] = set()
    curve = []
    for t in ordering:
        found |= faults.detected_by(t)
        curve.append(100.0 * len(found) / l)
    return curve
