"""Flash/SAR hybrid front end for Chebyshev-timed sampling.

Time is measured in flash periods: the shortest gap between adjacent
Chebyshev nodes (at the window edges) is one unit.  Gap ``k`` between nodes
``k`` and ``k+1`` is then ``sin(k c) / sin(c)`` with ``c = pi / (N + 1)``.

A SAR converter is slow, so a sample may go to it only when the
neighbouring gaps leave it enough time.  Everything else is converted by the
flash ADC.  Power is counted in comparator firings: ``2**b`` per flash
conversion (thermometer code), ``b`` per SAR conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CANONICAL, ChebyshevWindow, cheb_nodes

POLICIES = ("both_adjacent", "preceding_gap_only", "greedy_nonoverlap")


@dataclass(frozen=True)
class SamplingTimeline:
    window: ChebyshevWindow
    gaps_in_flash_units: tuple[float, ...]

    @property
    def sample_times(self) -> np.ndarray:
        """Sampling instants in flash units, first sample at 0."""
        return np.concatenate([[0.0], np.cumsum(self.gaps_in_flash_units)])


@dataclass(frozen=True)
class AdcSplit:
    assignments: tuple[str, ...]
    a_flash: int
    a_sar: int
    t_sar: float
    policy: str

    def to_dict(self) -> dict:
        return {
            "assignments": list(self.assignments),
            "a_flash": self.a_flash,
            "a_sar": self.a_sar,
        }


@dataclass(frozen=True)
class PowerReport:
    bits: int
    flash_comparisons_per_sample: int
    sar_comparisons_per_sample: int
    a_flash: int
    a_sar: int
    total_au: int
    baseline_points: int
    baseline_au: int
    savings_percent: float


def build_timeline(N: int) -> SamplingTimeline:
    """Inter-sample gaps of a degree-``N`` Chebyshev window."""
    if N < 1:
        raise ValueError("a window needs at least two samples to have gaps")
    c = math.pi / (N + 1)
    k = np.arange(1, N + 1)
    gaps = np.sin(k * c) / math.sin(c)
    gaps[0] = gaps[-1] = 1.0
    # enforce exact palindrome against rounding in sin
    gaps = 0.5 * (gaps + gaps[::-1])
    return SamplingTimeline(cheb_nodes(N, CANONICAL), tuple(float(g) for g in gaps))


def _floor_gap(g: float) -> int:
    # sin ratios can land a few ulps under an integer (N=5, k=3 is exactly 2)
    return math.floor(g + 1e-9)


def split_samples(timeline: SamplingTimeline, t_sar: float, policy: str = "both_adjacent") -> AdcSplit:
    """Assign each sample of the window to the flash or SAR converter.

    ``both_adjacent``
        SAR iff the floored gaps on both sides are at least ``t_sar``.
    ``preceding_gap_only``
        SAR iff the floored gap before the sample is at least ``t_sar``.
    ``greedy_nonoverlap``
        Walk the samples in time order; give a sample to the SAR whenever at
        least ``t_sar`` has passed since the previous SAR sample and the
        following gap is at least ``t_sar``.

    Window edges count as zero-length gaps, so the first and last samples
    always go to the flash ADC.
    """
    if t_sar < 0 or math.isnan(t_sar):
        raise ValueError(f"t_sar must be nonnegative, got {t_sar}")
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; choose from {POLICIES}")
    gaps = [0.0, *timeline.gaps_in_flash_units, 0.0]
    n = len(gaps) - 1
    floors = [_floor_gap(g) for g in gaps]

    sar = [False] * n
    if policy == "both_adjacent":
        sar = [0 < i < n - 1 and floors[i] >= t_sar and floors[i + 1] >= t_sar for i in range(n)]
    elif policy == "preceding_gap_only":
        sar = [0 < i < n - 1 and floors[i] >= t_sar for i in range(n)]
    else:
        times = timeline.sample_times
        last = -math.inf
        for i in range(1, n - 1):
            if times[i] - last >= t_sar and gaps[i + 1] >= t_sar:
                sar[i] = True
                last = times[i]

    labels = tuple("sar" if s else "flash" for s in sar)
    a_sar = sum(sar)
    return AdcSplit(labels, n - a_sar, a_sar, float(t_sar), policy)


def power_report(split: AdcSplit, bits: int = 8, baseline_points: int = 10) -> PowerReport:
    """Comparator count of the hybrid against an all-flash equispaced front end."""
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    if baseline_points < 1:
        raise ValueError(f"baseline_points must be >= 1, got {baseline_points}")
    flash = 2 ** bits
    total = split.a_flash * flash + split.a_sar * bits
    baseline = baseline_points * flash
    return PowerReport(
        bits=bits,
        flash_comparisons_per_sample=flash,
        sar_comparisons_per_sample=bits,
        a_flash=split.a_flash,
        a_sar=split.a_sar,
        total_au=total,
        baseline_points=baseline_points,
        baseline_au=baseline,
        savings_percent=100.0 * (baseline - total) / baseline,
    )


def report_json(split: AdcSplit, report: PowerReport) -> dict:
    out = split.to_dict()
    out.update(
        total_au=report.total_au,
        baseline_au=report.baseline_au,
        savings_percent=report.savings_percent,
        bits=report.bits,
        t_sar=split.t_sar,
        policy=split.policy,
        baseline_points=report.baseline_points,
    )
    return out
