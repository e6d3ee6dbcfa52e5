"""Cycle-level model of a word-serial systolic Chebyshev interpolator.

The datapath has three stages sharing one clock, each with ``W`` multiply-
accumulate units (``W`` = samples per window):

``coeff``
    Linear array computing ``c = C f``.  PE ``j`` keeps row ``j`` of the DCT
    matrix stationary; samples enter PE 0 one per cycle and shift right one
    PE per cycle, so PE ``j`` sees sample ``k`` at cycle ``j + k`` (schedule
    ``[1, 1]``, projection ``[1, 0]``).  When the last sample of a window
    has been accumulated the result moves to a hold register.
``eval``
    Recurrence units producing ``Tbar_0(x) .. Tbar_N(x)``, one value per
    cycle.  A query occupies a unit for a ``W``-cycle period; the operand
    multiplexer selects ``0`` (T_0), ``x`` (T_1) or the IIR feedback
    ``2x T_{i-1} - T_{i-2}``.  A new query issues every cycle, round robin.
``fir``
    One accumulator per recurrence unit, ``acc += c_i * Tbar_i(x)``, reading
    ``c_i`` from the hold registers.

A MAC issued by a unit counts as one operation regardless of the mux
setting; mux switching and register moves are free.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, asdict
from typing import Sequence

import numpy as np

from .core import CANONICAL, INV_SQRT2, Interval, canonical_nodes, dct_matrix

STAGES = ("coeff", "eval", "fir")
ARCHITECTURES = ("proposed", "zhu_time", "zhu_transform")


@dataclass(frozen=True)
class SystolicConfig:
    window_size: int
    mac_count: int | None = None
    schedule_vector: tuple[int, int] = (1, 1)
    projection_vector: tuple[int, int] = (1, 0)

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError(f"window_size must be >= 1, got {self.window_size}")
        if self.mac_count is None:
            object.__setattr__(self, "mac_count", self.window_size)
        if self.mac_count != self.window_size:
            raise ValueError("the coefficient array needs exactly one MAC per sample")
        if tuple(self.schedule_vector) != (1, 1) or tuple(self.projection_vector) != (1, 0):
            raise ValueError("only schedule [1, 1] with projection [1, 0] is modelled")


@dataclass
class MacUnit:
    id: int
    state: float = 0.0
    busy_this_cycle: bool = False


@dataclass(frozen=True)
class CycleRecord:
    cycle_index: int
    ops_issued: int
    stage_ops: dict
    per_unit_busy: dict
    mux_state: dict


@dataclass(frozen=True)
class Dependence:
    producer_cycle: int
    consumer_cycle: int
    kind: str


@dataclass(frozen=True)
class OutputEvent:
    cycle: int
    window: int
    query_x: float
    value: float


@dataclass
class SystolicTrace:
    window_size: int
    cycles: list[CycleRecord]
    latency_cycles: int
    outputs: list[tuple[float, float]]
    output_events: list[OutputEvent]
    input_cycles: list[int]
    sample_reads: list[tuple[int, int, int]] = field(repr=False)
    dependences: list[Dependence] = field(repr=False)
    n_windows: int = 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cycle", "stage", "unit_id", "busy", "op_count", "mux_state"])
        for rec in self.cycles:
            for stage in STAGES:
                busy = rec.per_unit_busy[stage]
                mux = rec.mux_state[stage]
                for uid, b in enumerate(busy):
                    w.writerow([rec.cycle_index, stage, uid, int(b), int(b), mux[uid]])
        return buf.getvalue()


@dataclass(frozen=True)
class ArchMetrics:
    architecture: str
    buffering: str
    io_type: str
    peak_ops_coeff: int | str
    peak_ops_poly: int | str
    peak_ops_fir: int
    latency: int
    hue_percent: float
    hue_window: str = "steady_state"

    def to_dict(self) -> dict:
        return asdict(self)


def _check_queries(queries_per_window, W):
    if not queries_per_window or sum(len(q) for q in queries_per_window) == 0:
        raise ValueError("at least one query point is required")
    for w, qs in enumerate(queries_per_window[:-1]):
        if len(qs) > W:
            raise ValueError(
                f"window {w} has {len(qs)} queries; at most {W} fit before the next window's "
                "coefficients overwrite the hold registers"
            )


def simulate_stream(
    windows: Sequence[Sequence[float]],
    queries: Sequence[Sequence[float]],
    config: SystolicConfig,
) -> SystolicTrace:
    """Run back-to-back windows through the datapath.

    ``windows[w]`` holds the samples of window ``w`` in ascending-node order;
    ``queries[w]`` are the canonical-interval points to interpolate from it.
    Samples arrive one per cycle starting at cycle 0.
    """
    W = config.window_size
    if len(windows) != len(queries):
        raise ValueError("need one query list per window")
    samples = []
    for w, s in enumerate(windows):
        arr = np.asarray(s, dtype=float)
        if arr.ndim != 1 or arr.size != W:
            raise ValueError(f"window {w}: expected {W} samples, got {arr.size}")
        samples.append(arr)
    _check_queries(queries, W)
    M = len(samples)
    C = dct_matrix(W - 1).entries

    # issue schedule: query q of window w enters a recurrence unit at W-1 + wW + q
    issue = {}
    for w, qs in enumerate(queries):
        for q, x in enumerate(qs):
            issue[W - 1 + w * W + q] = (w, float(x))
    n_queries = len(issue)

    coeff_pe = [MacUnit(j) for j in range(W)]
    fir_pe = [MacUnit(u) for u in range(W)]
    shift_reg = [None] * W          # (window, k, value, produced_cycle) latched by PE j
    hold = [None] * W               # (window, value, latch_cycle)
    ev = [None] * W                 # dict: window, x, step, prev, cur
    ev_out = [None] * W             # (window, x, step, tbar, produced_cycle)
    hist = [dict() for _ in range(W)]  # per eval unit: step -> cycle produced, for dependences

    cycles, outputs, events, input_cycles = [], [], [], []
    reads, deps = [], []
    pending_out = []
    t = 0
    while len(outputs) < n_queries:
        stage_busy = {s: [False] * W for s in STAGES}
        stage_mux = {s: ["idle"] * W for s in STAGES}
        for pe in coeff_pe + fir_pe:
            pe.busy_this_cycle = False

        # emit outputs registered on the previous cycle
        for ev_item in pending_out:
            events.append(OutputEvent(t, *ev_item))
            outputs.append((ev_item[1], ev_item[2]))
        pending_out = []

        # coefficient array: compute with current register contents
        new_shift = [None] * W
        new_hold = list(hold)
        for j in range(W):
            if j == 0:
                if t < M * W:
                    w, k = divmod(t, W)
                    inp = (w, k, samples[w][k], t)
                    input_cycles.append(t)
                    reads.append((t, t, 0))
                else:
                    inp = None
            else:
                inp = shift_reg[j - 1]
                if inp is not None:
                    deps.append(Dependence(inp[3], t, "sample_shift"))
                    reads.append((inp[0] * W + inp[1], t, j))
            if inp is None:
                continue
            w, k, f, _ = inp
            pe = coeff_pe[j]
            if k == 0:
                pe.state = C[j, 0] * f
                stage_mux["coeff"][j] = "clear"
            else:
                pe.state += C[j, k] * f
                deps.append(Dependence(t - 1, t, "coeff_acc"))
                stage_mux["coeff"][j] = "acc"
            pe.busy_this_cycle = stage_busy["coeff"][j] = True
            new_shift[j] = (w, k, f, t)
            if k == W - 1:
                new_hold[j] = (w, pe.state, t)

        # recurrence units
        if t in issue:
            u = (t - (W - 1)) % W
            if ev[u] is not None:
                raise RuntimeError(f"cycle {t}: recurrence unit {u} still busy")
            w, x = issue[t]
            ev[u] = {"window": w, "x": x, "step": 0, "prev": 0.0, "cur": 0.0}
            hist[u] = {}
        new_ev_out = [None] * W
        for u in range(W):
            st = ev[u]
            if st is None:
                continue
            i, x = st["step"], st["x"]
            if i == 0:
                val, mux = 0.0 * x + 1.0, "zero"
            elif i == 1:
                val, mux = x * st["cur"] + 0.0, "x"
                deps.append(Dependence(hist[u][0], t, "recurrence"))
            else:
                val, mux = 2.0 * x * st["cur"] - st["prev"], "iir"
                deps.append(Dependence(hist[u][i - 1], t, "recurrence"))
                deps.append(Dependence(hist[u][i - 2], t, "recurrence"))
            st["prev"], st["cur"] = st["cur"], val
            hist[u][i] = t
            tbar = INV_SQRT2 if i == 0 else val
            new_ev_out[u] = (st["window"], x, i, tbar, t)
            stage_busy["eval"][u] = True
            stage_mux["eval"][u] = mux
            st["step"] += 1
            if st["step"] == W:
                ev[u] = None

        # FIR accumulators read last cycle's recurrence outputs and the hold bank
        for u in range(W):
            item = ev_out[u]
            if item is None:
                continue
            w, x, i, tbar, produced = item
            h = hold[i]
            if h is None or h[0] != w:
                raise RuntimeError(f"cycle {t}: coefficient {i} of window {w} not available")
            deps.append(Dependence(produced, t, "tbar"))
            deps.append(Dependence(h[2], t, "coefficient"))
            pe = fir_pe[u]
            if i == 0:
                pe.state = h[1] * tbar
                stage_mux["fir"][u] = "clear"
            else:
                pe.state += h[1] * tbar
                stage_mux["fir"][u] = "acc"
            pe.busy_this_cycle = stage_busy["fir"][u] = True
            if i == W - 1:
                pending_out.append((w, x, pe.state))

        stage_ops = {s: sum(stage_busy[s]) for s in STAGES}
        cycles.append(
            CycleRecord(
                t,
                sum(stage_ops.values()),
                stage_ops,
                {s: tuple(v) for s, v in stage_busy.items()},
                {s: tuple(v) for s, v in stage_mux.items()},
            )
        )

        # clock edge
        shift_reg = new_shift
        hold = new_hold
        ev_out = new_ev_out
        t += 1
        if t > 10 * (M * W + n_queries + 2 * W):
            raise RuntimeError("simulation did not drain")

    first_in = input_cycles[0]
    latency = events[0].cycle - first_in
    return SystolicTrace(W, cycles, latency, outputs, events, input_cycles, reads, deps, M)


def simulate_window(
    samples: Sequence[float],
    query_points: Sequence[float],
    config: SystolicConfig,
    interval: Interval = CANONICAL,
) -> SystolicTrace:
    """Interpolate one window of samples at ``query_points`` (in ``interval``)."""
    if len(query_points) == 0:
        raise ValueError("at least one query point is required")
    if len(samples) != config.window_size:
        raise ValueError(f"expected {config.window_size} samples, got {len(samples)}")
    canonical = [float(interval.to_canonical(x)) for x in query_points]
    trace = simulate_stream([samples], [canonical], config)
    trace.outputs = [(float(x), v) for x, (_, v) in zip(query_points, trace.outputs)]
    return trace


def stream_for_signal(signal, window_size: int, n_windows: int = 4,
                      interval: Interval = CANONICAL) -> tuple[list, list]:
    """Samples and queries for ``n_windows`` consecutive blocks of ``signal``.

    Block ``w`` covers ``interval`` shifted right by ``w`` widths; each block
    gets ``window_size`` evenly spread queries so every unit stays busy.
    """
    width = interval.hi - interval.lo
    nodes = canonical_nodes(window_size - 1)
    queries = list(np.linspace(-1.0, 1.0, window_size + 2)[1:-1]) if window_size > 1 else [0.0]
    windows = []
    for w in range(n_windows):
        block = Interval(interval.lo + w * width, interval.hi + w * width)
        windows.append(np.asarray(signal(block.from_canonical(nodes)), dtype=float))
    return windows, [list(queries) for _ in range(n_windows)]


def steady_state_range(trace: SystolicTrace) -> range:
    """Cycles after pipeline fill while samples are still streaming in."""
    start = trace.input_cycles[0] + trace.latency_cycles - 1
    stop = trace.input_cycles[-1] + 1
    return range(start, stop)


def compute_metrics(trace: SystolicTrace, config: SystolicConfig) -> ArchMetrics:
    """Peak per-stage operations, latency and utilization of a simulated run.

    Utilization is measured over :func:`steady_state_range`.  If the run is
    too short to have a steady state, the whole active span is used instead
    and ``hue_window`` says so.
    """
    W = config.window_size
    peaks = {s: max(rec.stage_ops[s] for rec in trace.cycles) for s in STAGES}
    window = steady_state_range(trace)
    label = "steady_state"
    if len(window) == 0:
        window = range(trace.cycles[0].cycle_index, trace.output_events[-1].cycle)
        label = "full_run"
    by_cycle = {rec.cycle_index: rec for rec in trace.cycles}
    busy = sum(by_cycle[c].ops_issued for c in window)
    available = len(window) * W * len(STAGES)
    per_cycle_inputs = np.bincount(trace.input_cycles)
    io_type = "word_serial" if per_cycle_inputs.max() <= 1 else "word_parallel"
    return ArchMetrics(
        architecture="proposed",
        buffering="none",
        io_type=io_type,
        peak_ops_coeff=peaks["coeff"],
        peak_ops_poly=peaks["eval"],
        peak_ops_fir=peaks["fir"],
        latency=trace.latency_cycles,
        hue_percent=100.0 * busy / available,
        hue_window=label,
    )


def analytic_metrics(architecture: str, window_size: int) -> ArchMetrics:
    """Closed-form figures for the two word-parallel reference arrays.

    The time-domain array forms interpolation functions in parallel from
    stored polynomial values, so its coefficient stage peak is only known to
    exceed ``W``; the transform-domain array reads polynomial values from
    storage instead of computing them.
    """
    W = window_size
    if W < 1:
        raise ValueError(f"window_size must be >= 1, got {W}")
    if architecture == "zhu_time":
        return ArchMetrics("zhu_time", "samples_and_T", "word_parallel",
                           f">{W}, stored", 0, W, 2 * W, 100.0, "analytic")
    if architecture == "zhu_transform":
        return ArchMetrics("zhu_transform", "T_only", "word_parallel",
                           W, "stored", W, 2 * W, 100.0, "analytic")
    raise ValueError(f"unknown architecture {architecture!r}; expected zhu_time or zhu_transform")


def run_proposed(signal, window_size: int = 8, n_windows: int = 4,
                 interval: Interval = CANONICAL) -> tuple[SystolicTrace, ArchMetrics]:
    config = SystolicConfig(window_size)
    windows, queries = stream_for_signal(signal, window_size, n_windows, interval)
    trace = simulate_stream(windows, queries, config)
    return trace, compute_metrics(trace, config)

