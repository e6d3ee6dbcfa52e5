"""Closed-form test signals that can be sampled at arbitrary points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class HarmonicSum:
    """Sum of sines, ``sum(a * sin(w * x))`` over ``(a, w)`` pairs."""

    terms: tuple[tuple[float, float], ...]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for amp, omega in self.terms:
            out = out + amp * np.sin(omega * x)
        return out if out.ndim else float(out)

    def describe(self) -> str:
        return " + ".join(f"{a:g}*sin({w:g}x)" for a, w in self.terms)


@dataclass(frozen=True)
class DampedSine:
    """``exp(-decay * x) * sin(omega * x)``."""

    decay: float
    omega: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(-self.decay * x) * np.sin(self.omega * x)
        return out if out.ndim else float(out)

    def describe(self) -> str:
        return f"exp(-{self.decay:g}x)*sin({self.omega:g}x)"


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with coefficients in increasing power order."""

    coeffs: tuple[float, ...]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.polynomial.polynomial.polyval(x, np.asarray(self.coeffs, dtype=float))
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    def describe(self) -> str:
        return "poly(" + ",".join(f"{c:g}" for c in self.coeffs) + ")"


@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.value)
        return out if out.ndim else float(out)

    def describe(self) -> str:
        return f"const({self.value:g})"


SignalSpec = Union[HarmonicSum, DampedSine, Polynomial, Constant]

#: sin(4x) + 0.5 sin(8x), bandlimited
HARMONIC = HarmonicSum(((1.0, 4.0), (0.5, 8.0)))
#: exp(-x) sin(8x), not bandlimited
DAMPED = DampedSine(1.0, 8.0)

PRESETS: dict[str, SignalSpec] = {
    "harmonic": HARMONIC,
    "damped": DAMPED,
}


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


def parse_signal(text: str) -> SignalSpec:
    """Build a signal from a short descriptor string.

    Accepted forms::

        harmonic | damped                 named presets
        const:<value>
        poly:<c0>,<c1>,...                increasing powers
        damped:<decay>,<omega>
        harmonic:<a1>,<w1>,<a2>,<w2>,...
    """
    text = text.strip()
    if text in PRESETS:
        return PRESETS[text]
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"unknown signal {text!r}")
    vals = _floats(rest)
    if kind == "const" and len(vals) == 1:
        return Constant(vals[0])
    if kind == "poly" and vals:
        return Polynomial(tuple(vals))
    if kind == "damped" and len(vals) == 2:
        return DampedSine(vals[0], vals[1])
    if kind == "harmonic" and vals and len(vals) % 2 == 0:
        return HarmonicSum(tuple(zip(vals[0::2], vals[1::2])))
    raise ValueError(f"malformed signal descriptor {text!r}")


def signal_name(signal: SignalSpec) -> str:
    for name, preset in PRESETS.items():
        if preset == signal:
            return name
    return signal.describe()


__all__ = [
    "HarmonicSum",
    "DampedSine",
    "Polynomial",
    "Constant",
    "SignalSpec",
    "HARMONIC",
    "DAMPED",
    "PRESETS",
    "parse_signal",
    "signal_name",
]
