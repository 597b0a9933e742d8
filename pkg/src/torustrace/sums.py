"""Deterministic summation back-end.

Every series, quadrature and trace in this package reduces through the two
helpers below.  ``math.fsum`` is compensated (Shewchuk) summation and returns
the correctly rounded value of the exact sum, so reported digits do not depend
on term order or platform; complex sums reduce the real and imaginary parts
separately.
"""

from __future__ import annotations

import math

import numpy as np


def fsum(values) -> float:
    """Exactly rounded sum of real terms."""
    return math.fsum(values)


def fsum_complex(values) -> complex:
    """Exactly rounded sum of complex terms (componentwise fsum)."""
    arr = np.asarray(values)
    if arr.size == 0:
        return 0j
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real), math.fsum(arr.imag))
    return complex(math.fsum(arr.astype(np.float64)), 0.0)


def columnwise_fsum(terms: np.ndarray) -> np.ndarray:
    """Exact sum of each column of a 2-d term matrix."""
    out = np.empty(terms.shape[1], dtype=np.complex128)
    if np.iscomplexobj(terms):
        for j in range(terms.shape[1]):
            out[j] = complex(math.fsum(terms[:, j].real), math.fsum(terms[:, j].imag))
    else:
        for j in range(terms.shape[1]):
            out[j] = math.fsum(terms[:, j])
    return out


def rowwise_fsum(terms: np.ndarray) -> np.ndarray:
    """Exact sum of each row of a 2-d term matrix."""
    return columnwise_fsum(terms.T)
