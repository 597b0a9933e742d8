"""Sampled analysis on the period-1 torus T^n, n = 1 or 2.

Conventions fixed here and used by the whole package:

* characters are ``e_xi(x) = exp(i 2 pi <x, xi>)`` with ``xi`` an integer
  vector (period-1 torus),
* grids are uniform with spacing ``1/M`` and lexicographic index order,
* frequency truncation is the max-norm box ``|xi|_inf <= N`` in lexicographic
  order, which keeps transforms separable and orderings reproducible,
* integrals are rectangle-rule averages, exact on band-limited integrands
  under the anti-aliasing margin ``M >= 2(2N+1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .sums import fsum, columnwise_fsum, rowwise_fsum

TWO_PI = 2.0 * math.pi


def min_grid_size(radius: int) -> int:
    """Smallest grid satisfying the anti-aliasing margin M >= 2(2N+1)."""
    return 2 * (2 * radius + 1)


def max_alias_free_radius(grid_size: int) -> int:
    """Largest lattice radius a grid of size M supports, inverse of min_grid_size."""
    return max((grid_size - 2) // 4, 0)


class FrequencyLattice:
    """Truncated integer lattice {xi in Z^dim : |xi|_inf <= radius}.

    Points are ordered lexicographically, coordinate values running from
    -radius to +radius, so the same (dim, radius) always yields the identical
    point sequence.  The origin is always present.
    """

    def __init__(self, dim: int, radius: int):
        if dim not in (1, 2):
            raise ValueError(f"lattice dim must be 1 or 2, got {dim}")
        if radius < 0:
            raise ValueError(f"lattice radius must be >= 0, got {radius}")
        self.dim = int(dim)
        self.radius = int(radius)
        rng = range(-self.radius, self.radius + 1)
        self.points = np.array(list(product(rng, repeat=self.dim)), dtype=np.int64)
        self.points.setflags(write=False)
        self._index = {tuple(p): i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FrequencyLattice)
            and self.dim == other.dim
            and self.radius == other.radius
        )

    def __repr__(self) -> str:
        return f"FrequencyLattice(dim={self.dim}, radius={self.radius})"

    def index_of(self, point) -> int:
        key = tuple(int(c) for c in np.atleast_1d(np.asarray(point)))
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"{key} is outside the lattice of radius {self.radius}") from None

    def __contains__(self, point) -> bool:
        key = tuple(int(c) for c in np.atleast_1d(np.asarray(point)))
        return key in self._index

    def squared_norms(self) -> np.ndarray:
        """|xi|^2 per point, exact integers."""
        return np.sum(self.points.astype(np.int64) ** 2, axis=1)

    def brackets(self) -> np.ndarray:
        """Japanese bracket <xi> = sqrt(1 + |xi|^2) per point."""
        return np.sqrt(1.0 + self.squared_norms().astype(np.float64))

    def euclidean_ball_mask(self, r: float) -> np.ndarray:
        """Filter predicate |xi|_2 <= r (Euclidean-ball truncation)."""
        return self.squared_norms() <= r * r


def japanese_bracket(xi) -> float:
    """<xi> = (1 + |xi|^2)^(1/2), Euclidean norm on the integer lattice."""
    arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    return float(math.sqrt(1.0 + float(np.dot(arr, arr))))


@dataclass
class PeriodicFunction:
    """Complex samples of f on the uniform grid x_i = i/M, lexicographic order."""

    dim: int
    grid_size: int
    values: np.ndarray

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.grid_size < 1:
            raise ValueError("grid_size must be positive")
        vals = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.grid_size**self.dim:
            raise ValueError(
                f"values has length {vals.size}, expected grid_size^dim = "
                f"{self.grid_size ** self.dim}"
            )
        self.values = vals

    def x_points(self) -> np.ndarray:
        """Grid points as an (M^dim, dim) float array."""
        idx = np.array(
            list(product(range(self.grid_size), repeat=self.dim)), dtype=np.float64
        )
        return idx / self.grid_size

    def __add__(self, other: "PeriodicFunction") -> "PeriodicFunction":
        self._check_compatible(other)
        return PeriodicFunction(self.dim, self.grid_size, self.values + other.values)

    def __sub__(self, other: "PeriodicFunction") -> "PeriodicFunction":
        self._check_compatible(other)
        return PeriodicFunction(self.dim, self.grid_size, self.values - other.values)

    def scaled(self, c: complex) -> "PeriodicFunction":
        return PeriodicFunction(self.dim, self.grid_size, c * self.values)

    def _check_compatible(self, other: "PeriodicFunction") -> None:
        if self.dim != other.dim or self.grid_size != other.grid_size:
            raise ValueError("functions live on different grids")


@dataclass
class FourierCoefficients:
    """Coefficients aligned to the canonical ordering of a FrequencyLattice."""

    lattice: FrequencyLattice
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128).reshape(-1)
        if arr.size != len(self.lattice):
            raise ValueError(
                f"{arr.size} coefficients for a lattice of {len(self.lattice)} points"
            )
        self.coeffs = arr


def _require_margin(grid_size: int, radius: int, what: str) -> None:
    need = min_grid_size(radius)
    if grid_size < need:
        raise ValueError(
            f"{what}: grid_size {grid_size} violates the anti-aliasing margin; "
            f"need at least 2(2N+1) = {need} for lattice radius {radius}"
        )


def forward_transform(f: PeriodicFunction, lattice: FrequencyLattice) -> FourierCoefficients:
    """Toroidal Fourier coefficients (1/M^dim) sum_i f(x_i) e^{-i2pi<x_i, xi>}.

    Exact (to rounding) for trigonometric polynomials of degree <= radius.
    """
    if f.dim != lattice.dim:
        raise ValueError(f"dimension mismatch: function dim {f.dim}, lattice dim {lattice.dim}")
    _require_margin(f.grid_size, lattice.radius, "forward_transform")
    x = f.x_points()
    phases = np.exp(-1j * TWO_PI * (x @ lattice.points.T.astype(np.float64)))
    terms = f.values[:, None] * phases
    coeffs = columnwise_fsum(terms) / (f.grid_size**f.dim)
    return FourierCoefficients(lattice, coeffs)


def inverse_transform(c: FourierCoefficients, grid_size: int) -> PeriodicFunction:
    """Synthesis f(x_i) = sum_xi e^{i2pi<x_i, xi>} c[xi] on an M-point grid."""
    _require_margin(grid_size, c.lattice.radius, "inverse_transform")
    f = PeriodicFunction(c.lattice.dim, grid_size, np.zeros(grid_size**c.lattice.dim))
    x = f.x_points()
    phases = np.exp(1j * TWO_PI * (x @ c.lattice.points.T.astype(np.float64)))
    f.values = rowwise_fsum(phases * c.coeffs[None, :])
    return f


def partial_inverse(
    c: FourierCoefficients, indices: np.ndarray, grid_size: int
) -> PeriodicFunction:
    """Inverse transform restricted to the given lattice indices."""
    _require_margin(grid_size, c.lattice.radius, "partial_inverse")
    dim = c.lattice.dim
    f = PeriodicFunction(dim, grid_size, np.zeros(grid_size**dim))
    idx = np.asarray(indices, dtype=np.int64)
    if idx.size == 0:
        return f
    x = f.x_points()
    pts = c.lattice.points[idx].astype(np.float64)
    phases = np.exp(1j * TWO_PI * (x @ pts.T))
    f.values = rowwise_fsum(phases * c.coeffs[idx][None, :])
    return f


def lp_norm(f: PeriodicFunction, p: float) -> float:
    """Rectangle-rule L^p norm on the probability-measure torus; p = inf is the grid sup."""
    if p != math.inf and p < 1:
        raise ValueError(f"p must satisfy p >= 1 or p = inf, got {p}")
    mags = np.abs(f.values)
    if p == math.inf:
        return float(mags.max())
    total = fsum(mags.astype(np.float64) ** p)
    return float((total / f.values.size) ** (1.0 / p))


def random_bandlimited(
    lattice: FrequencyLattice, grid_size: int, rng: np.random.Generator
) -> PeriodicFunction:
    """Random trigonometric polynomial supported on the lattice (test helper)."""
    coeffs = rng.standard_normal(len(lattice)) + 1j * rng.standard_normal(len(lattice))
    return inverse_transform(FourierCoefficients(lattice, coeffs), grid_size)
