"""Chebyshev versus equispaced interpolation error experiments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import CANONICAL, Interval, cheb_nodes, compute_coeffs, cheb_values
from .signals import SignalSpec

SCHEMES = ("chebyshev", "equispaced")
DEFAULT_GRID = 2001


@dataclass(frozen=True)
class EquispacedWindow:
    count: int
    nodes: tuple[float, ...]
    interval: Interval = CANONICAL


@dataclass(frozen=True)
class ErrorReport:
    scheme: str
    n_points: int
    max_abs_error: float
    normalizer: float
    relative_error_percent: float
    grid_density: int


@dataclass(frozen=True)
class PointSearch:
    """Outcome of :func:`min_points_for_error`; ``n_points`` is None if not reached."""

    n_points: int | None
    target_percent: float
    n_max: int
    errors: tuple[float, ...]

    @property
    def reached(self) -> bool:
        return self.n_points is not None


def equispaced_nodes(n: int, interval: Interval = CANONICAL) -> EquispacedWindow:
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    if n == 1:
        nodes = (0.5 * (interval.lo + interval.hi),)
    else:
        nodes = tuple(float(v) for v in np.linspace(interval.lo, interval.hi, n))
    return EquispacedWindow(n, nodes, interval)


def barycentric_weights(nodes: Sequence[float]) -> np.ndarray:
    x = np.asarray(nodes, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    # rescale by the spread to keep the products in range for large n
    scale = 4.0 / (x.max() - x.min()) if x.size > 1 else 1.0
    return 1.0 / np.prod(diff * scale, axis=1)


def _check_nodes(nodes, samples):
    x = np.asarray(nodes, dtype=float)
    f = np.asarray(samples, dtype=float)
    if x.shape != f.shape or x.ndim != 1 or x.size == 0:
        raise ValueError(f"nodes and samples must be equal-length 1-D sequences, got {x.shape} and {f.shape}")
    if np.unique(x).size != x.size:
        raise ValueError("interpolation nodes must be distinct")
    return x, f


def lagrange_interpolate(nodes: Sequence[float], samples: Sequence[float], x: float) -> float:
    """Value at ``x`` of the polynomial through ``(nodes, samples)`` (barycentric form)."""
    xs, f = _check_nodes(nodes, samples)
    return float(_barycentric_eval(xs, f, barycentric_weights(xs), np.asarray([x], dtype=float))[0])


def _barycentric_eval(xs, f, w, grid):
    diff = grid[:, None] - xs[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = w / diff
    out = (terms @ f) / terms.sum(axis=1)
    hit_rows, hit_cols = np.nonzero(exact)
    out[hit_rows] = f[hit_cols]
    return out


def _chebyshev_on_grid(signal, n, interval, grid):
    window = cheb_nodes(n - 1, interval)
    cs = compute_coeffs(window.sample(signal), window)
    t = interval.to_canonical(grid)
    c = np.asarray(cs.coeffs)
    return np.array([np.dot(c, cheb_values(cs.N, ti)) for ti in t])


def evaluation_grid(interval: Interval, grid_density: int) -> np.ndarray:
    return np.linspace(interval.lo, interval.hi, grid_density)


def measure_error(
    signal: SignalSpec,
    scheme: str,
    n_points: int,
    interval: Interval = CANONICAL,
    grid_density: int = DEFAULT_GRID,
) -> ErrorReport:
    """Max deviation of the ``n_points`` interpolant, relative to max |signal|.

    Both the deviation and the normalizer are taken over a uniform grid of
    ``grid_density`` points spanning the interval.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unsupported scheme {scheme!r}; choose from {SCHEMES}")
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    if grid_density < 1000:
        raise ValueError(f"grid_density must be >= 1000, got {grid_density}")

    grid = evaluation_grid(interval, grid_density)
    truth = np.asarray(signal(grid), dtype=float)
    if scheme == "chebyshev":
        approx = _chebyshev_on_grid(signal, n_points, interval, grid)
    else:
        xs = np.asarray(equispaced_nodes(n_points, interval).nodes)
        f = np.asarray(signal(xs), dtype=float)
        approx = _barycentric_eval(xs, f, barycentric_weights(xs), grid.copy())

    max_err = float(np.max(np.abs(approx - truth)))
    norm = float(np.max(np.abs(truth)))
    rel = 0.0 if norm == 0.0 else 100.0 * max_err / norm
    return ErrorReport(scheme, n_points, max_err, norm, rel, grid_density)


def min_points_for_error(
    signal: SignalSpec,
    scheme: str,
    target_percent: float,
    interval: Interval = CANONICAL,
    n_max: int = 40,
    grid_density: int = DEFAULT_GRID,
) -> PointSearch:
    """Smallest point count in ``[2, n_max]`` whose error is below ``target_percent``.

    Equispaced errors are not monotone in ``n``, so this is a plain scan.
    """
    if target_percent <= 0:
        raise ValueError("target_percent must be positive")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    errors = []
    for n in range(2, n_max + 1):
        rel = measure_error(signal, scheme, n, interval, grid_density).relative_error_percent
        errors.append(rel)
        if rel < target_percent:
            return PointSearch(n, target_percent, n_max, tuple(errors))
    return PointSearch(None, target_percent, n_max, tuple(errors))


def error_ratio(signal: SignalSpec, n_points: int, interval: Interval = CANONICAL,
                grid_density: int = DEFAULT_GRID) -> float:
    """Equispaced over Chebyshev relative error at the same point count."""
    cheb = measure_error(signal, "chebyshev", n_points, interval, grid_density)
    equi = measure_error(signal, "equispaced", n_points, interval, grid_density)
    if cheb.max_abs_error == 0.0:
        return float("nan") if equi.max_abs_error == 0.0 else float("inf")
    return equi.max_abs_error / cheb.max_abs_error
