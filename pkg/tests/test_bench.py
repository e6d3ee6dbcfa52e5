import numpy as np
import pytest

from chebarch.bench import (
    _barycentric_eval,
    barycentric_weights,
    equispaced_nodes,
    error_ratio,
    lagrange_interpolate,
    measure_error,
    min_points_for_error,
)
from chebarch.core import Interval, cheb_nodes, compute_coeffs, interpolate
from chebarch.signals import DAMPED, HARMONIC, Constant, Polynomial


def test_equispaced_nodes_include_endpoints():
    w = equispaced_nodes(5, Interval(0, 2))
    assert w.nodes == pytest.approx([0, 0.5, 1.0, 1.5, 2.0])
    assert equispaced_nodes(1, Interval(0, 2)).nodes == (1.0,)
    with pytest.raises(ValueError):
        equispaced_nodes(0)


def test_lagrange_line():
    assert lagrange_interpolate([-1, 1], [-1, 1], 0.0) == 0.0


def test_lagrange_exact_at_nodes():
    xs = [-0.9, -0.2, 0.1, 0.75, 1.3]
    ys = [3.0, -1.0, 2.5, 0.0, 7.0]
    for x, y in zip(xs, ys):
        assert lagrange_interpolate(xs, ys, x) == y


def test_lagrange_matches_vandermonde_oracle():
    xs = np.linspace(-1, 1, 8)
    ys = HARMONIC(xs)
    coeffs = np.linalg.solve(np.vander(xs, 8), ys)
    assert lagrange_interpolate(xs, ys, 0.9) == pytest.approx(np.polyval(coeffs, 0.9), abs=1e-9)


def test_lagrange_errors():
    with pytest.raises(ValueError):
        lagrange_interpolate([0, 0, 1], [1, 2, 3], 0.5)
    with pytest.raises(ValueError):
        lagrange_interpolate([0, 1], [1, 2, 3], 0.5)


@pytest.mark.parametrize("scheme", ["chebyshev", "equispaced"])
def test_constant_signal_has_no_error(scheme):
    rep = measure_error(Constant(2.0), scheme, 7)
    assert rep.relative_error_percent == pytest.approx(0.0, abs=1e-12)


def test_unsupported_scheme():
    with pytest.raises(ValueError):
        measure_error(HARMONIC, "spline", 8)


def test_argument_checks():
    with pytest.raises(ValueError):
        measure_error(HARMONIC, "chebyshev", 1)
    with pytest.raises(ValueError):
        measure_error(HARMONIC, "chebyshev", 8, grid_density=999)
    with pytest.raises(ValueError):
        min_points_for_error(HARMONIC, "chebyshev", 0.0)


def test_report_fields_consistent():
    rep = measure_error(DAMPED, "chebyshev", 9)
    assert rep.relative_error_percent == pytest.approx(100 * rep.max_abs_error / rep.normalizer)
    assert rep.grid_density == 2001
    assert rep.scheme == "chebyshev" and rep.n_points == 9


def test_error_ratio_at_eight_points():
    assert 3.0 <= error_ratio(HARMONIC, 8) <= 5.0


@pytest.mark.parametrize("signal", [HARMONIC, DAMPED])
@pytest.mark.parametrize("n", range(6, 17))
def test_chebyshev_dominates(signal, n):
    c = measure_error(signal, "chebyshev", n).relative_error_percent
    e = measure_error(signal, "equispaced", n).relative_error_percent
    assert c <= e


@pytest.mark.parametrize("signal", [HARMONIC, DAMPED])
@pytest.mark.parametrize("scheme", ["chebyshev", "equispaced"])
def test_grid_density_stability(signal, scheme):
    a = measure_error(signal, scheme, 8, grid_density=2000).relative_error_percent
    b = measure_error(signal, scheme, 8, grid_density=4000).relative_error_percent
    assert abs(a - b) < 0.02 * b


def test_error_zero_at_nodes():
    # a grid made of the nodes themselves leaves only rounding error
    xs = np.linspace(-1, 1, 9)
    f = DAMPED(xs)
    assert np.max(np.abs(_barycentric_eval(xs, f, barycentric_weights(xs), xs.copy()) - f)) == 0.0
    w = cheb_nodes(8)
    cs = compute_coeffs(w.sample(DAMPED), w)
    for x in w.nodes:
        assert abs(interpolate(cs, x) - DAMPED(x)) <= 1e-10 * np.max(np.abs(w.sample(DAMPED)))


def test_polynomial_reproduced_by_both_schemes():
    p = Polynomial((0.5, -1.0, 2.0, 0.25))
    for scheme in ("chebyshev", "equispaced"):
        assert measure_error(p, scheme, 4).relative_error_percent < 1e-10


def test_min_points_not_reached():
    found = min_points_for_error(HARMONIC, "equispaced", 1e-6, n_max=6)
    assert not found.reached and found.n_points is None
    assert len(found.errors) == 5


def test_min_points_scan_is_first_crossing():
    found = min_points_for_error(HARMONIC, "chebyshev", 1.1)
    assert found.reached
    assert found.errors[-1] < 1.1
    assert all(e >= 1.1 for e in found.errors[:-1])


def test_determinism():
    assert measure_error(DAMPED, "equispaced", 11) == measure_error(DAMPED, "equispaced", 11)
