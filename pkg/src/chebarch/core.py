"""Chebyshev nodes, polynomials and DCT-based interpolation on one window.

Conventions
-----------
* Window samples are always ordered by ascending node position.  With that
  ordering the alternating sign in the DCT weights ``mu_j`` produces the
  expansion coefficients of ``f`` directly; with descending order every odd
  coefficient flips sign.
* Indices are zero based: a window of degree ``N`` holds ``N + 1`` samples.
* Everything is computed on the canonical interval [-1, 1]; an
  :class:`Interval` supplies the affine map to and from the user interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SQRT2 = math.sqrt(2.0)
INV_SQRT2 = 1.0 / SQRT2


@dataclass(frozen=True)
class Interval:
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if self.lo >= self.hi:
            raise ValueError(f"invalid interval: lo={self.lo} must be < hi={self.hi}")

    def to_canonical(self, x):
        """Map ``x`` from [lo, hi] to [-1, 1]."""
        return (2.0 * np.asarray(x, dtype=float) - self.lo - self.hi) / (self.hi - self.lo)

    def from_canonical(self, t):
        """Map ``t`` from [-1, 1] to [lo, hi]."""
        return 0.5 * (self.hi - self.lo) * np.asarray(t, dtype=float) + 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


CANONICAL = Interval(-1.0, 1.0)


@dataclass(frozen=True)
class ChebyshevWindow:
    """Node set for one block of ``degree + 1`` samples, ascending."""

    degree: int
    nodes: tuple[float, ...]
    interval: Interval = CANONICAL

    @property
    def size(self) -> int:
        return self.degree + 1

    @property
    def canonical_nodes(self) -> np.ndarray:
        return np.asarray(self.interval.to_canonical(self.nodes), dtype=float)

    def sample(self, signal) -> np.ndarray:
        return np.asarray(signal(np.asarray(self.nodes)), dtype=float)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "nodes": list(self.nodes), "interval": self.interval.to_dict()}


@dataclass(frozen=True)
class CoefficientMatrix:
    N: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.entries.setflags(write=False)


@dataclass(frozen=True)
class CoefficientSet:
    """Expansion coefficients ``c_0 .. c_N`` in the normalized Chebyshev basis."""

    N: int
    coeffs: tuple[float, ...]
    window: ChebyshevWindow
    matrix: CoefficientMatrix | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        out = self.window.to_dict()
        out["coeffs"] = list(self.coeffs)
        return out


@dataclass(frozen=True)
class PowerBasisMatrix:
    """Row ``i`` holds the coefficients of ``T_i`` on ``x^N .. x^0``."""

    N: int
    rows: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.rows.setflags(write=False)


def _check_degree(N: int) -> int:
    if isinstance(N, bool) or int(N) != N or N < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {N!r}")
    return int(N)


def canonical_nodes(N: int) -> np.ndarray:
    """Roots of ``T_{N+1}`` on [-1, 1], ascending."""
    N = _check_degree(N)
    n = N + 1
    k = np.arange(1, n + 1)
    # k = 1 is the root nearest +1; reverse for ascending order
    roots = np.cos((2 * k - 1) * np.pi / (2 * n))[::-1]
    # exact zero for the middle root of even-degree sets
    if n % 2 == 1:
        roots[N // 2] = 0.0
    return roots


def cheb_nodes(N: int, interval: Interval = CANONICAL) -> ChebyshevWindow:
    """Chebyshev window of degree ``N`` mapped into ``interval``."""
    roots = canonical_nodes(N)
    mapped = interval.from_canonical(roots)
    return ChebyshevWindow(int(N), tuple(float(v) for v in mapped), interval)


def cheb_eval(n: int, x: float) -> float:
    """``T_n(x)`` by the three-term recurrence."""
    if n < 0:
        raise ValueError(f"polynomial order must be nonnegative, got {n}")
    if n == 0:
        return 1.0
    prev, cur = 1.0, float(x)
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def cheb_values(N: int, x: float) -> np.ndarray:
    """Normalized values ``[Tbar_0(x), ..., Tbar_N(x)]`` in one recurrence pass.

    The recurrence runs on the plain polynomials; only the emitted ``T_0`` is
    scaled by 1/sqrt(2).  Recursing on the scaled value would corrupt every
    later term starting with ``T_2``.
    """
    out = np.empty(N + 1)
    out[0] = 1.0
    if N >= 1:
        out[1] = x
    for i in range(2, N + 1):
        out[i] = 2.0 * x * out[i - 1] - out[i - 2]
    out[0] = INV_SQRT2
    return out


def cheb_eval_normalized(n: int, x: float) -> float:
    if n < 0:
        raise ValueError(f"polynomial order must be nonnegative, got {n}")
    if n == 0:
        return INV_SQRT2
    return cheb_eval(n, x)


def dct_weights(N: int) -> np.ndarray:
    N = _check_degree(N)
    j = np.arange(N + 1)
    mu = 2.0 * (-1.0) ** j / (N + 1)
    mu[0] = SQRT2 / (N + 1)
    return mu


def dct_matrix(N: int) -> CoefficientMatrix:
    """``C[j, k] = mu_j cos(j pi (2k+1) / (2(N+1)))``."""
    N = _check_degree(N)
    j = np.arange(N + 1)[:, None]
    k = np.arange(N + 1)[None, :]
    entries = dct_weights(N)[:, None] * np.cos(j * np.pi * (2 * k + 1) / (2 * (N + 1)))
    return CoefficientMatrix(N, entries)


def compute_coeffs(samples: Sequence[float], window: ChebyshevWindow) -> CoefficientSet:
    """Coefficients ``C @ samples`` for samples taken at ``window.nodes``."""
    f = np.asarray(samples, dtype=float)
    if f.ndim != 1 or f.size != window.size:
        raise ValueError(f"expected {window.size} samples for degree {window.degree}, got {f.size}")
    C = dct_matrix(window.degree)
    c = C.entries @ f
    return CoefficientSet(window.degree, tuple(float(v) for v in c), window, C)


def interpolate(coeffs: CoefficientSet, x: float) -> float:
    """Evaluate ``sum c_i Tbar_i(x)`` with ``x`` in the window's interval.

    Points outside the interval are extrapolated without complaint; callers
    that care should check ``coeffs.window.interval.contains(x)``.
    """
    t = float(coeffs.window.interval.to_canonical(x))
    tbar = cheb_values(coeffs.N, t)
    return float(np.dot(coeffs.coeffs, tbar))


def ctif(i: int, x: float, N: int) -> float:
    """Cardinal function of sample ``i`` (ascending order) on [-1, 1]."""
    N = _check_degree(N)
    if not 0 <= i <= N:
        raise IndexError(f"sample index {i} out of range for degree {N}")
    k = np.arange(N + 1)
    cos_term = np.cos(k * np.pi * (2 * i + 1) / (2 * (N + 1)))
    return float(np.sum(dct_weights(N) * cheb_values(N, x) * cos_term))


def interpolate_ctif(samples: Sequence[float], x: float, interval: Interval = CANONICAL) -> float:
    """Time-domain form: ``sum f(x_i) phi_i(x)``."""
    f = np.asarray(samples, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("need at least one sample")
    N = f.size - 1
    t = float(interval.to_canonical(x))
    phi = np.array([ctif(i, t, N) for i in range(N + 1)])
    return float(np.dot(f, phi))


def power_basis_matrix(N: int) -> PowerBasisMatrix:
    """Coefficients of ``T_0 .. T_N`` in decreasing powers, built by recurrence.

    Only meant for small ``N`` cross-checks; the power basis is badly
    conditioned well before ``N = 20``.
    """
    N = _check_degree(N)
    rows = np.zeros((N + 1, N + 1))
    rows[0, N] = 1.0
    if N >= 1:
        rows[1, N - 1] = 1.0
    for i in range(1, N):
        shifted = np.roll(rows[i], -1)
        shifted[-1] = 0.0
        rows[i + 1] = 2.0 * shifted - rows[i - 1]
    return PowerBasisMatrix(N, rows)


def power_coefficients(coeffs: CoefficientSet) -> np.ndarray:
    """Interpolant on [-1, 1] as coefficients of ``x^N .. x^0``."""
    c = np.array(coeffs.coeffs)
    c[0] *= INV_SQRT2
    return c @ power_basis_matrix(coeffs.N).rows
