import csv
import io

import numpy as np
import pytest

from chebarch.core import Interval, cheb_nodes, compute_coeffs, interpolate
from chebarch.signals import DAMPED, HARMONIC, Constant, Polynomial
from chebarch.systolic import (
    STAGES,
    SystolicConfig,
    analytic_metrics,
    compute_metrics,
    run_proposed,
    simulate_stream,
    simulate_window,
    stream_for_signal,
)


@pytest.fixture(scope="module")
def stream8():
    return run_proposed(HARMONIC, window_size=8, n_windows=4)


def window_samples(signal, N, interval=Interval()):
    w = cheb_nodes(N, interval)
    return w, w.sample(signal)


def test_config_defaults_and_validation():
    cfg = SystolicConfig(8)
    assert cfg.mac_count == 8
    assert cfg.schedule_vector == (1, 1) and cfg.projection_vector == (1, 0)
    with pytest.raises(ValueError):
        SystolicConfig(0)
    with pytest.raises(ValueError):
        SystolicConfig(8, mac_count=4)
    with pytest.raises(ValueError):
        SystolicConfig(8, schedule_vector=(1, 2))


def test_constant_window():
    trace = simulate_window([3.0] * 8, [0.5], SystolicConfig(8))
    assert trace.outputs[0][1] == pytest.approx(3.0, abs=1e-14)


def test_identity_window():
    w, f = window_samples(Polynomial((0.0, 1.0)), 7)
    trace = simulate_window(f, [0.5], SystolicConfig(8))
    assert trace.outputs[0] == (0.5, pytest.approx(0.5, abs=1e-9))


def test_latency_two_window_sizes():
    _, f = window_samples(DAMPED, 7)
    assert simulate_window(f, [0.1, 0.2], SystolicConfig(8)).latency_cycles == 16
    assert simulate_window([1.0], [0.0], SystolicConfig(1)).latency_cycles == 2


@pytest.mark.parametrize("W", [1, 2, 3, 5, 8, 12])
def test_latency_is_twice_window(W):
    trace, m = run_proposed(DAMPED, window_size=W, n_windows=3)
    assert trace.latency_cycles == 2 * W
    assert m.latency == 2 * W


def test_single_sample_window_metrics():
    cfg = SystolicConfig(1)
    trace = simulate_window([4.0], [0.3], cfg)
    m = compute_metrics(trace, cfg)
    assert m.latency == 2
    assert (m.peak_ops_coeff, m.peak_ops_poly, m.peak_ops_fir) == (1, 1, 1)
    assert trace.outputs[0][1] == pytest.approx(4.0)


def test_errors():
    cfg = SystolicConfig(8)
    with pytest.raises(ValueError):
        simulate_window([1.0] * 7, [0.0], cfg)
    with pytest.raises(ValueError):
        simulate_window([1.0] * 8, [], cfg)
    with pytest.raises(ValueError):
        simulate_stream([[1.0] * 8] * 2, [[0.0] * 9, [0.0]], cfg)


def test_interval_mapping():
    iv = Interval(2.0, 6.0)
    w, f = window_samples(DAMPED, 7, iv)
    ref = interpolate(compute_coeffs(f, w), 3.3)
    trace = simulate_window(f, [3.3], SystolicConfig(8), iv)
    assert trace.outputs[0][0] == 3.3
    assert trace.outputs[0][1] == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_many_queries_single_window():
    w, f = window_samples(HARMONIC, 7)
    xs = np.linspace(-1, 1, 21)
    trace = simulate_window(f, xs, SystolicConfig(8))
    cs = compute_coeffs(f, w)
    for (x, v), xq in zip(trace.outputs, xs):
        assert x == xq
        assert v == pytest.approx(interpolate(cs, x), rel=1e-9, abs=1e-12)


def test_functional_equivalence_random():
    rng = np.random.default_rng(3)
    w = cheb_nodes(7)
    cfg = SystolicConfig(8)
    for _ in range(100):
        coeffs = tuple(rng.uniform(-2, 2, rng.integers(1, 12)))
        sig = Polynomial(coeffs)
        x = rng.uniform(-1, 1)
        f = w.sample(sig)
        ref = interpolate(compute_coeffs(f, w), x)
        got = simulate_window(f, [x], cfg).outputs[0][1]
        assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_stream_outputs_per_window():
    windows, queries = stream_for_signal(DAMPED, 8, 3, Interval(0, 1))
    trace = simulate_stream(windows, queries, SystolicConfig(8))
    for ev in trace.output_events:
        block = Interval(ev.window, ev.window + 1.0)
        w = cheb_nodes(7, block)
        cs = compute_coeffs(w.sample(DAMPED), w)
        x = float(block.from_canonical(ev.query_x))
        assert ev.value == pytest.approx(interpolate(cs, x), rel=1e-9, abs=1e-12)


def test_table_metrics(stream8):
    _, m = stream8
    assert m.latency == 16
    assert (m.peak_ops_coeff, m.peak_ops_poly, m.peak_ops_fir) == (8, 8, 8)
    assert m.hue_percent == 100.0
    assert m.hue_window == "steady_state"
    assert m.buffering == "none" and m.io_type == "word_serial"


def test_ops_ceiling(stream8):
    trace, _ = stream8
    for rec in trace.cycles:
        for s in STAGES:
            assert rec.stage_ops[s] <= 8
            assert rec.stage_ops[s] == sum(rec.per_unit_busy[s])
        assert rec.ops_issued == sum(rec.stage_ops.values())


def test_schedule_legality(stream8):
    trace, _ = stream8
    assert trace.dependences
    assert all(d.producer_cycle < d.consumer_cycle for d in trace.dependences)


def test_word_serial_input(stream8):
    trace, _ = stream8
    assert trace.input_cycles == list(range(32))
    assert all(arrival <= read for arrival, read, _ in trace.sample_reads)
    # PE j sees sample k at cycle j + k
    assert all(read - arrival == pe for arrival, read, pe in trace.sample_reads)


def test_mux_sequence_per_query(stream8):
    trace, _ = stream8
    states = [rec.mux_state["eval"][0] for rec in trace.cycles]
    first = states.index("zero")
    assert states[first:first + 8] == ["zero", "x"] + ["iir"] * 6
    assert states[first + 8] == "zero"


def test_short_run_reports_full_span_utilization():
    cfg = SystolicConfig(8)
    _, f = window_samples(HARMONIC, 7)
    m = compute_metrics(simulate_window(f, [0.0] * 8, cfg), cfg)
    assert m.hue_window == "full_run"
    assert 0 < m.hue_percent < 100


def test_determinism():
    a, ma = run_proposed(DAMPED, 8, 3)
    b, mb = run_proposed(DAMPED, 8, 3)
    assert a.to_csv() == b.to_csv()
    assert a.outputs == b.outputs and ma == mb


def test_trace_csv_layout(stream8):
    trace, _ = stream8
    rows = list(csv.DictReader(io.StringIO(trace.to_csv())))
    assert list(rows[0]) == ["cycle", "stage", "unit_id", "busy", "op_count", "mux_state"]
    assert len(rows) == len(trace.cycles) * 3 * 8
    assert {r["mux_state"] for r in rows if r["stage"] == "eval"} == {"idle", "zero", "x", "iir"}


def test_analytic_zhu_time():
    m = analytic_metrics("zhu_time", 8)
    assert m.io_type == "word_parallel"
    assert m.buffering == "samples_and_T"
    assert m.peak_ops_coeff == ">8, stored"
    assert m.peak_ops_poly == 0
    assert m.peak_ops_fir == 8 and m.latency == 16 and m.hue_percent == 100.0


def test_analytic_zhu_transform():
    m = analytic_metrics("zhu_transform", 8)
    assert m.buffering == "T_only"
    assert m.peak_ops_coeff == 8
    assert m.peak_ops_poly == "stored"
    assert m.io_type == "word_parallel" and m.latency == 16


def test_analytic_unknown():
    with pytest.raises(ValueError):
        analytic_metrics("proposed", 8)
    with pytest.raises(ValueError):
        analytic_metrics("wang", 8)


def test_metrics_json_field_names():
    d = analytic_metrics("zhu_transform", 8).to_dict()
    for key in ("architecture", "buffering", "io_type", "peak_ops_coeff", "peak_ops_poly",
                "peak_ops_fir", "latency", "hue_percent"):
        assert key in d


def test_constant_stream_outputs():
    trace, _ = run_proposed(Constant(-2.0), 8, 2)
    assert all(v == pytest.approx(-2.0, abs=1e-13) for _, v in trace.outputs)
