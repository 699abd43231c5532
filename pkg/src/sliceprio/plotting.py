"""Report figures.  Every function writes one PNG and returns its path."""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .prioritize import PrioritizedSuite  # noqa: E402
from .weights import Band, WeightMap  # noqa: E402

BAND_COLORS = {Band.CRITICAL: "#c0392b", Band.MODERATE: "#e67e22", Band.WEAK: "#2e86c1"}

plt.rcParams.update({
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
})


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def acc_clusters(acc: Mapping[str, float], weights: WeightMap, path: Path) -> Path:
    """ACC values on one axis, coloured by band, with the band edges marked."""
    fig, ax = plt.subplots(figsize=(6.4, 2.4))
    ids = sorted(acc, key=lambda n: acc[n])
    for band in (Band.WEAK, Band.MODERATE, Band.CRITICAL):
        xs = [acc[n] for n in ids if n in weights and weights.band(n) is band]
        ys = [i for i, n in enumerate(ids) if n in weights and weights.band(n) is band]
        ax.scatter(xs, ys, s=14, color=BAND_COLORS[band], label=f"{band.value} ({len(xs)})")
    if weights.boundaries:
        for b in weights.boundaries:
            ax.axvline(b, color="0.4", lw=0.8, ls="--")
    if weights.centroids:
        for c in weights.centroids:
            ax.axvline(c, color="0.75", lw=0.6)
    ax.set_xlabel("ACC")
    ax.set_ylabel("node (sorted by ACC)")
    ax.set_yticks([])
    ax.legend(frameon=False, fontsize=7, loc="upper left")
    ax.set_title(f"ACC bands ({weights.mode.value})")
    return _save(fig, path)


def test_weights(suite: PrioritizedSuite, path: Path) -> Path:
    """Stacked critical/moderate/weak weight per test, in priority order."""
    entries = [e for e in suite if e.weights is not None]
    fig, ax = plt.subplots(figsize=(6.4, 0.35 * len(entries) + 1.2))
    labels = [f"{e.rank}. {e.test_id}" for e in entries][::-1]
    left = [0] * len(entries)
    for band, attr in ((Band.CRITICAL, "wtc"), (Band.MODERATE, "wtm"), (Band.WEAK, "wtw")):
        vals = [getattr(e.weights, attr) for e in entries][::-1]
        ax.barh(labels, vals, left=left, color=BAND_COLORS[band], label=attr)
        left = [a + b for a, b in zip(left, vals)]
    ax.set_xlabel("test weight")
    ax.legend(frameon=False, fontsize=7, ncol=3, loc="lower right")
    return _save(fig, path)


test_weights.__test__ = False  # type: ignore[attr-defined]


def detection_curves(curves: Mapping[str, Sequence[float]], path: Path) -> Path:
    """Percent of faults detected against fraction of the suite run."""
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    for name, curve in curves.items():
        n = len(curve)
        xs = [0.0] + [100.0 * (i + 1) / n for i in range(n)]
        ax.step(xs, [0.0] + list(curve), where="post", label=name)
    ax.set_xlabel("% of tests executed")
    ax.set_ylabel("% of faults detected")
    ax.set_ylim(0, 105)
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)


def apfd_bars(scores: Mapping[str, float], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(4.0, 2.8))
    names = list(scores)
    best = max(scores.values())
    ax.bar(names, [scores[n] for n in names],
           color=["#c0392b" if scores[n] == best else "0.6" for n in names])
    for i, n in enumerate(names):
        ax.text(i, scores[n], f"{scores[n]:.4f}", ha="center", va="bottom", fontsize=7)
    ax.set_ylabel("APFD")
    ax.set_ylim(0, 1.05)
    return _save(fig, path)
