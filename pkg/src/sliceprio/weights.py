"""Fault-proneness weights from ACC values.

Two ways to band nodes into weak (1), moderate (2) and critical (3):

* fixed thresholds at 0.6 and 0.7;
* 1-D k-means with k = 3, where the cluster with the highest centroid is
  critical.

The two disagree on real data (a node at 0.8125 can land in the moderate
cluster), which is why both exist.
"""
from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Sequence

from .acc import AccReport


class Band(str, Enum):
    CRITICAL = "Critical"
    MODERATE = "Moderate"
    WEAK = "Weak"


class WeightMode(str, Enum):
    THRESHOLD = "threshold"
    KMEANS = "kmeans"
    INJECTED = "injected"


BAND_OF_WEIGHT = {3: Band.CRITICAL, 2: Band.MODERATE, 1: Band.WEAK}
WEIGHT_OF_BAND = {b: w for w, b in BAND_OF_WEIGHT.items()}

MODERATE_THRESHOLD = 0.6
CRITICAL_THRESHOLD = 0.7


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightMap:
    weights: Mapping[str, int]
    mode: WeightMode
    boundaries: tuple[float, float] | None = None
    centroids: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        for node, w in self.weights.items():
            if w not in BAND_OF_WEIGHT:
                raise WeightError(f"weight of {node!r} must be 1, 2 or 3, got {w!r}")

    def __getitem__(self, node_id: str) -> int:
        return self.weights[node_id]

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.weights

    def __len__(self) -> int:
        return len(self.weights)

    def band(self, node_id: str) -> Band:
        return BAND_OF_WEIGHT[self.weights[node_id]]

    def bands(self) -> dict[str, Band]:
        return {k: BAND_OF_WEIGHT[w] for k, w in self.weights.items()}


def _acc_values(acc: AccReport | Mapping[str, float]) -> dict[str, float]:
    values = acc.values() if isinstance(acc, AccReport) else dict(acc)
    for node, v in values.items():
        if not 0.0 <= v <= 1.0:
            raise WeightError(f"ACC of {node!r} is {v}, outside [0, 1]")
    return values


def threshold_weight(value: float) -> int:
    if value >= CRITICAL_THRESHOLD:
        return 3
    if value >= MODERATE_THRESHOLD:
        return 2
    return 1


def assign_weights_threshold(acc: AccReport | Mapping[str, float]) -> WeightMap:
    values = _acc_values(acc)
    return WeightMap({k: threshold_weight(v) for k, v in values.items()}, WeightMode.THRESHOLD,
                     (MODERATE_THRESHOLD, CRITICAL_THRESHOLD))


# ---- k-means ---------------------------------------------------------------

def _initial_centroids(values: Sequence[float], k: int, rng: random.Random | None) -> list[float]:
    if rng is None:
        # interpolated quantiles at 1/2k, 3/2k, ..., (2k-1)/2k
        if len(values) == 1:
            return [values[0]] * k
        cuts = statistics.quantiles(values, n=2 * k, method="inclusive")
        return cuts[0::2]
    return sorted(rng.sample(sorted(set(values)), k))


def _nearest(x: float, centroids: Sequence[float]) -> int:
    best, best_d = 0, abs(x - centroids[0])
    for j in range(1, len(centroids)):
        d = abs(x - centroids[j])
        if d < best_d:
            best, best_d = j, d
    return best


def within_ss(values: Sequence[float], assignment: Sequence[int], centroids: Sequence[float]) -> float:
    return math.fsum((x - centroids[a]) ** 2 for x, a in zip(values, assignment))


def lloyd_steps(values: Sequence[float], centroids: Sequence[float],
                max_iter: int = 1000) -> Iterator[tuple[list[float], list[int]]]:
    """Yield (centroids, assignment) after each update until the assignment is stable."""
    centroids = list(centroids)
    k = len(centroids)
    assignment: list[int] = []
    for _ in range(max_iter):
        new = [_nearest(x, centroids) for x in values]
        if new == assignment:
            return
        assignment = new
        members: list[list[float]] = [[] for _ in range(k)]
        for x, a in zip(values, assignment):
            members[a].append(x)
        # fsum keeps centroids independent of input order; an emptied cluster keeps its old centre
        centroids = [math.fsum(m) / len(m) if m else centroids[j] for j, m in enumerate(members)]
        yield centroids, assignment


def _lloyd(values: list[float], centroids: list[float], max_iter: int) -> tuple[list[float], list[int]]:
    k = len(centroids)
    assignment: list[int] = []
    for centroids, assignment in lloyd_steps(values, centroids, max_iter):
        pass
    rank = sorted(range(k), key=lambda j: centroids[j])
    relabel = {old: new for new, old in enumerate(rank)}
    return [centroids[j] for j in rank], [relabel[a] for a in assignment]


def kmeans_1d(values: Sequence[float], k: int = 3, seed: int = 0, n_init: int = 1,
              max_iter: int = 1000) -> tuple[list[float], list[int]]:
    """Lloyd iteration on scalars until the assignment stops changing.

    Returns centroids in ascending order and, per input value, the index
    of its centroid.  With ``seed == 0`` the first start is the
    interpolated-quantile one; otherwise every start is k distinct values
    drawn from ``random.Random(seed)``.  With ``n_init > 1`` the run with
    the lowest within-cluster sum of squares wins (earliest on ties).
    """
    values = [float(v) for v in values]
    if not values:
        raise WeightError("k-means needs at least one value")
    distinct = len(set(values))
    if k < 1 or k > distinct:
        raise WeightError(f"k={k} exceeds the {distinct} distinct values available")

    rng = random.Random(seed)
    best: tuple[float, list[float], list[int]] | None = None
    for run in range(max(1, n_init)):
        start = _initial_centroids(values, k, None if (seed == 0 and run == 0) else rng)
        centroids, assignment = _lloyd(values, start, max_iter)
        score = within_ss(values, assignment, centroids)
        if best is None or score < best[0]:
            best = (score, centroids, assignment)
    assert best is not None
    return best[1], best[2]


def cluster_boundaries(values: Sequence[float], assignment: Sequence[int], k: int) -> list[float]:
    """Midpoints between the extreme members of adjacent non-empty clusters."""
    lo: dict[int, float] = {}
    hi: dict[int, float] = {}
    for x, a in zip(values, assignment):
        lo[a] = min(lo.get(a, x), x)
        hi[a] = max(hi.get(a, x), x)
    edges = []
    for j in range(1, k):
        below = [hi[i] for i in range(j) if i in hi]
        above = [lo[i] for i in range(j, k) if i in lo]
        if below and above:
            edges.append((max(below) + min(above)) / 2)
        else:
            edges.append(min(above) if above else max(below))
    return edges


def assign_weights_kmeans(acc: AccReport | Mapping[str, float], seed: int = 0,
                          n_init: int = 10) -> WeightMap:
    values = _acc_values(acc)
    if len(set(values.values())) < 3:
        raise WeightError("k-means banding needs at least 3 distinct ACC values; use threshold mode")
    ids = list(values)
    xs = [values[i] for i in ids]
    centroids, assignment = kmeans_1d(xs, 3, seed, n_init)
    weights = {i: a + 1 for i, a in zip(ids, assignment)}
    moderate_lo, critical_lo = cluster_boundaries(xs, assignment, 3)
    return WeightMap(weights, WeightMode.KMEANS, (moderate_lo, critical_lo), tuple(centroids))


def assign_weights(acc: AccReport | Mapping[str, float], mode: WeightMode | str = WeightMode.KMEANS,
                   seed: int = 0) -> WeightMap:
    mode = WeightMode(mode)
    if mode is WeightMode.THRESHOLD:
        return assign_weights_threshold(acc)
    if mode is WeightMode.KMEANS:
        return assign_weights_kmeans(acc, seed)
    raise WeightError("injected weight maps are loaded from file, not computed")
