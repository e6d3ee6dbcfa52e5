"""Chebyshev interpolation, a word-serial systolic datapath model and a hybrid ADC power model."""

from .core import (
    ChebyshevWindow,
    CoefficientMatrix,
    CoefficientSet,
    Interval,
    PowerBasisMatrix,
    cheb_eval,
    cheb_eval_normalized,
    cheb_nodes,
    compute_coeffs,
    ctif,
    dct_matrix,
    interpolate,
    interpolate_ctif,
    power_basis_matrix,
)
from .signals import DAMPED, HARMONIC, Constant, DampedSine, HarmonicSum, Polynomial, parse_signal

__version__ = "0.1.0"
