"""Quantization of symbols on the torus.

``apply_symbol`` evaluates (T_a f)(x) = sum_xi e^{i2pi<x,xi>} a(x,xi) fhat(xi)
on the sample grid.  ``operator_matrix`` is the same operator compressed to
the truncated character basis, A[eta, xi] = hat{a}(eta - xi, xi), so its trace
and spectrum are exactly those of the compression P_N T_a P_N at every radius.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .harmonic import (
    FrequencyLattice,
    PeriodicFunction,
    TWO_PI,
    forward_transform,
    inverse_transform,
)
from .sums import fsum_complex, rowwise_fsum
from .symbols import SampledSymbol, Symbol, x_fourier_table

EIGEN_SIDE_LIMIT = 4096


class BandlimitWarning(UserWarning):
    """Input carried frequencies beyond the lattice; they were truncated."""


class EigensolverError(RuntimeError):
    pass


@dataclass
class OperatorMatrix:
    """Dense compression of T_a to the character basis of a lattice."""

    lattice: FrequencyLattice
    entries: np.ndarray

    def __post_init__(self):
        side = len(self.lattice)
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        if self.entries.shape != (side, side):
            raise ValueError(
                f"entries shape {self.entries.shape}, expected ({side}, {side})"
            )

    @property
    def side(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return fsum_complex(np.diag(self.entries))


def apply_symbol(
    a: Symbol, f: PeriodicFunction, lattice: FrequencyLattice
) -> PeriodicFunction:
    """Apply T_a to f; f is truncated to the lattice band (with a warning)."""
    if a.dim != f.dim or f.dim != lattice.dim:
        raise ValueError(
            f"grid/lattice mismatch: symbol dim {a.dim}, function dim {f.dim}, "
            f"lattice dim {lattice.dim}"
        )
    if isinstance(a, SampledSymbol) and (
        a.grid_size != f.grid_size or a.lattice != lattice
    ):
        raise ValueError("grid/lattice mismatch between sampled symbol and arguments")
    c = forward_transform(f, lattice)
    recon = inverse_transform(c, f.grid_size)
    excess = float(np.abs(f.values - recon.values).max())
    if excess > 1e-10 * (1.0 + float(np.abs(f.values).max())):
        warnings.warn(
            f"input is not band-limited to radius {lattice.radius}; excess content "
            f"of sup-size {excess:.3e} was truncated",
            BandlimitWarning,
            stacklevel=2,
        )
    x = recon.x_points()
    table = a.values(x, lattice.points)
    phases = np.exp(1j * TWO_PI * (x @ lattice.points.T.astype(np.float64)))
    values = rowwise_fsum(phases * table * c.coeffs[None, :])
    return PeriodicFunction(f.dim, f.grid_size, values)


def operator_matrix(a: Symbol, lattice: FrequencyLattice) -> OperatorMatrix:
    """A[eta, xi] = hat{a}(eta - xi, xi) over the lattice ordering.

    Differences eta - xi outside the admissible range of the symbol's x-Fourier
    data contribute 0 (only possible for sampled symbols).
    """
    if a.dim != lattice.dim:
        raise ValueError(f"dimension mismatch: symbol dim {a.dim}, lattice dim {lattice.dim}")
    pts = lattice.points
    side = len(lattice)
    n = lattice.dim
    span = 2 * lattice.radius
    diff_axis = np.arange(-span, span + 1, dtype=np.int64)
    if n == 1:
        diffs = diff_axis.reshape(-1, 1)
    else:
        grid = np.meshgrid(diff_axis, diff_axis, indexing="ij")
        diffs = np.stack([g.ravel() for g in grid], axis=1)
    table = x_fourier_table(a, diffs, lattice)  # (num_diffs, side)

    def diff_row(d: np.ndarray) -> int:
        idx = 0
        for c in d:
            idx = idx * (2 * span + 1) + int(c) + span
        return idx

    entries = np.empty((side, side), dtype=np.complex128)
    for j in range(side):
        d = pts - pts[j]
        rows = [diff_row(dr) for dr in d]
        entries[:, j] = table[rows, j]
    return OperatorMatrix(lattice, entries)


def canonical_eigen_order(eigs: np.ndarray) -> np.ndarray:
    """Permutation sorting eigenvalues by descending |lambda|, ties by argument."""
    return np.lexsort((np.angle(eigs), -np.abs(eigs)))


def eigenvalues(
    matrix, with_vectors: bool = False, residual_tol: float = 1e-9
):
    """All eigenvalues of a dense complex matrix in canonical order.

    Uses the balanced Hessenberg + shifted-QR path of LAPACK (zgeev).  When
    eigenvectors are requested, each pair is verified against
    ``||A v - lambda v|| <= residual_tol * ||A||`` and the eigenvalue sum is
    checked against the matrix trace.
    """
    A = matrix.entries if isinstance(matrix, OperatorMatrix) else np.asarray(matrix)
    A = A.astype(np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if A.shape[0] > EIGEN_SIDE_LIMIT:
        raise ValueError(
            f"matrix side {A.shape[0]} exceeds the desk-scale guard {EIGEN_SIDE_LIMIT}"
        )
    try:
        if with_vectors:
            eigs, vecs = np.linalg.eig(A)
        else:
            eigs = np.linalg.eigvals(A)
            vecs = None
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"QR iteration did not converge: {exc}") from exc
    order = canonical_eigen_order(eigs)
    eigs = eigs[order]
    if vecs is not None:
        vecs = vecs[:, order]
        norm_a = float(np.linalg.norm(A, 2))
        for i in range(eigs.size):
            res = float(np.linalg.norm(A @ vecs[:, i] - eigs[i] * vecs[:, i]))
            if res > residual_tol * max(norm_a, 1e-300):
                raise EigensolverError(
                    f"eigenpair {i} residual {res:.3e} exceeds "
                    f"{residual_tol:.1e} * ||A|| = {residual_tol * norm_a:.3e}"
                )
    trace = fsum_complex(np.diag(A))
    esum = fsum_complex(eigs)
    if abs(esum - trace) > 1e-9 * (1.0 + abs(trace)):
        raise EigensolverError(
            f"eigenvalue sum {esum} disagrees with matrix trace {trace}"
        )
    if with_vectors:
        return eigs, vecs
    return eigs


def eigen_residuals(matrix) -> np.ndarray:
    """Residual norms ||A v - lambda v|| for the canonical eigenpairs."""
    A = matrix.entries if isinstance(matrix, OperatorMatrix) else np.asarray(matrix)
    eigs, vecs = eigenvalues(A, with_vectors=True)
    return np.array(
        [float(np.linalg.norm(A @ vecs[:, i] - eigs[i] * vecs[:, i])) for i in range(eigs.size)]
    )
