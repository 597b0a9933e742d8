"""Unitary-dual data for the torus and SU(2), closed-form trace series, and
the truncated-synthesis approximation demonstration.

Normalization (stated in every report header): the torus dual point xi in Z^n
carries dimension 1 and Laplacian eigenvalue |xi|^2, so the group bracket
(1 + lambda)^{1/2} coincides with the toroidal <xi>.  The SU(2) dual is indexed
by l in {0, 1/2, 1, 3/2, ...} with dimension 2l + 1 and eigenvalue l(l + 1);
``half_integers=False`` restricts to the integer-spin subset.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product

import numpy as np

from .besov import BesovParams, besov_norm
from .harmonic import (
    FrequencyLattice,
    PeriodicFunction,
    forward_transform,
    max_alias_free_radius,
    partial_inverse,
)
from .sums import fsum, fsum_complex

GROUPS = ("torus", "su2")


class DivergenceWarning(UserWarning):
    """The requested series diverges; the partial sum is still reported."""


@dataclass(frozen=True)
class DualPoint:
    label: tuple
    d: int
    lam: float

    @property
    def bracket(self) -> float:
        return math.sqrt(1.0 + self.lam)


@dataclass
class GroupDual:
    group: str
    cutoff: float
    points: list[DualPoint]

    @property
    def group_dimension(self) -> int:
        if self.group == "su2":
            return 3
        return len(self.points[0].label) if self.points else 1

    @property
    def lambda_cap(self) -> float:
        """Largest eigenvalue below which the enumeration is complete.

        Dyadic bracket shells entirely below this cap contain every dual point
        they should; the trailing shell may be truncated and is excluded from
        convergence certification.
        """
        if self.group == "su2":
            return self.cutoff * (self.cutoff + 1.0)
        return float(int(self.cutoff)) ** 2  # Euclidean ball inside the max-norm box


def enumerate_dual(
    group: str, cutoff, dim: int = 1, half_integers: bool = True
) -> GroupDual:
    """Finite slice of the unitary dual, sorted by Laplacian eigenvalue.

    torus: lattice points |xi|_inf <= cutoff, d = 1, lambda = |xi|^2.
    su2:   l = 0, 1/2, ..., cutoff (integers only when half_integers=False),
           d = 2l + 1, lambda = l(l + 1).
    """
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    points: list[DualPoint] = []
    if group == "torus":
        radius = int(cutoff)
        rng = range(-radius, radius + 1)
        for xi in product(rng, repeat=dim):
            lam = float(sum(c * c for c in xi))
            points.append(DualPoint(tuple(xi), 1, lam))
    else:
        step = 1 if not half_integers else 0.5
        twice_max = int(round(2 * cutoff))
        num = twice_max + 1 if half_integers else int(cutoff) + 1
        for j in range(num):
            l = j * step
            points.append(DualPoint((l,), int(round(2 * l + 1)), l * (l + 1.0)))
    points.sort(key=lambda p: (p.lam, p.label))
    return GroupDual(group, cutoff, points)


def _dual_shell_sums(dual: GroupDual, terms: np.ndarray) -> list[float]:
    shells: dict[int, list[float]] = {}
    for point, term in zip(dual.points, terms):
        key = int(math.floor(1.0 + point.lam))
        j = 0 if key <= 0 else (key.bit_length() - 1) // 2
        shells.setdefault(j, []).append(float(term))
    return [fsum(shells[j]) for j in sorted(shells)]


def series_diagnostics(dual: GroupDual, terms: np.ndarray) -> dict:
    """Geometric shell-ratio monitor over dyadic bracket shells."""
    shell_sums = _dual_shell_sums(dual, np.abs(np.asarray(terms)))
    ratios = []
    for prev, cur in zip(shell_sums, shell_sums[1:]):
        if prev == 0.0:
            ratios.append(0.0 if cur == 0.0 else math.inf)
        else:
            ratios.append(cur / prev)
    if fsum(shell_sums) == 0.0:
        return {"shell_sums": shell_sums, "tail_estimate": 0.0, "converged": True}
    if not ratios:
        return {"shell_sums": shell_sums, "tail_estimate": math.inf, "converged": False}
    rho = max(ratios[-4:]) if len(ratios) >= 4 else max(ratios)
    converged = rho <= 0.9 and len(ratios) >= 2
    tail = shell_sums[-1] * rho / (1.0 - rho) if rho < 1.0 else math.inf
    return {"shell_sums": shell_sums, "tail_estimate": tail, "converged": converged}


def heat_trace(dual: GroupDual, t: float) -> float:
    """sum over the dual of d^2 exp(-t lambda)."""
    if t <= 0:
        raise ValueError(f"heat trace needs t > 0, got {t}")
    return fsum(p.d * p.d * math.exp(-t * p.lam) for p in dual.points)


def heat_terms(dual: GroupDual, t: float) -> np.ndarray:
    return np.array([p.d * p.d * math.exp(-t * p.lam) for p in dual.points])


def _bracket_tail_integral(alpha: float, start: float) -> float:
    """integral_{start}^{inf} (1 + t^2)^{-alpha/2} dt for alpha > 1.

    Substituting t = 1/u then u = v^4 removes both the infinite limit and the
    endpoint singularity, after which fixed-order Gauss-Legendre is exact to
    rounding for the smooth integrand.
    """
    upper = (1.0 / start) ** 0.25
    nodes, weights = np.polynomial.legendre.leggauss(64)
    v = 0.5 * upper * (nodes + 1.0)
    scale = 0.5 * upper
    u = v**4
    integrand = 4.0 * v ** (4.0 * alpha - 5.0) * (1.0 + u * u) ** (-alpha / 2.0)
    return float(scale * fsum(weights * integrand))


def bessel_trace(dual: GroupDual, alpha: float, tail_correction: bool = False) -> float:
    """sum over the dual of d^2 <xi>^{-alpha}.

    Convergent only for alpha above the group dimension; below that a
    DivergenceWarning is raised and the raw partial sum is still returned.
    ``tail_correction`` (torus, dim 1) adds the midpoint integral of the
    omitted tail so modest cutoffs reach closed-form accuracy.
    """
    n = dual.group_dimension
    if alpha <= n:
        warnings.warn(
            f"bessel series with alpha = {alpha} diverges on a dual of dimension {n}; "
            "reporting the raw partial sum",
            DivergenceWarning,
            stacklevel=2,
        )
    value = fsum(p.d * p.d * (1.0 + p.lam) ** (-alpha / 2.0) for p in dual.points)
    if tail_correction:
        if dual.group != "torus" or n != 1:
            raise ValueError("tail correction is implemented for the torus with dim = 1")
        if alpha <= 1:
            raise ValueError("tail correction needs a convergent series (alpha > 1)")
        value += 2.0 * _bracket_tail_integral(alpha, float(int(dual.cutoff)) + 0.5)
    return value


def bessel_terms(dual: GroupDual, alpha: float) -> np.ndarray:
    return np.array([p.d * p.d * (1.0 + p.lam) ** (-alpha / 2.0) for p in dual.points])


def multiplier_trace(dual: GroupDual, a) -> complex:
    """sum d_xi Tr[a(xi)] for scalar-times-identity symbols: sum d^2 a(xi)."""
    return fsum_complex(
        np.array([p.d * p.d * complex(a(p)) for p in dual.points], dtype=np.complex128)
    )


def partial_sum_convergence(
    f: PeriodicFunction,
    besov: BesovParams,
    n_values,
    lattice: FrequencyLattice | None = None,
    block_weight: str = "abs",
) -> list[tuple[float, float]]:
    """Dyadic-norm error of the bracket-cutoff partial sums S_N f.

    S_N keeps the frequencies with <xi> <= N, the finite-rank truncations whose
    strong convergence underlies the approximation property.  For a
    trigonometric polynomial of degree D the error vanishes once N >= <D>.
    """
    if lattice is None:
        lattice = FrequencyLattice(f.dim, max_alias_free_radius(f.grid_size))
    c = forward_transform(f, lattice)
    sq = lattice.squared_norms().astype(np.float64)
    rows: list[tuple[float, float]] = []
    for n_cut in n_values:
        n_cut = float(n_cut)
        residual_idx = np.nonzero(1.0 + sq > n_cut * n_cut)[0]
        residual = partial_inverse(c, residual_idx, f.grid_size)
        rows.append((n_cut, besov_norm(residual, besov, lattice, block_weight)))
    return rows
