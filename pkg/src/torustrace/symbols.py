"""Symbols a(x, xi) on T^n x Z^n and their finite calculus.

Two representations coexist:

* catalog symbols — separable closed forms ``u(x) * g(xi)`` whose difference
  quotients, x-derivatives and x-Fourier coefficients are all exact,
* sampled symbols — a complex table over grid x lattice; differences shrink
  the lattice, x-derivatives are spectral, x-Fourier coefficients come from
  rectangle-rule quadrature.

Forward differences are used throughout:
``(D_j a)(x, xi) = a(x, xi + e_j) - a(x, xi)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .harmonic import FrequencyLattice, TWO_PI
from .sums import fsum, fsum_complex

NEG_INFINITY_ORDER = -math.inf


def _as_multi_index(alpha, dim: int) -> tuple[int, ...]:
    if isinstance(alpha, (int, np.integer)):
        alpha = (int(alpha),) + (0,) * (dim - 1)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != dim:
        raise ValueError(f"multi-index {alpha} does not match dimension {dim}")
    if any(a < 0 for a in alpha):
        raise ValueError(f"multi-index entries must be nonnegative, got {alpha}")
    return alpha


# ---------------------------------------------------------------------------
# x-factors: the x_1-dependent part of a separable symbol.  Each knows its
# exact derivatives, Fourier coefficients, sup norm and bandwidth.
# ---------------------------------------------------------------------------


class XFactor:
    def values(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def derivative(self, order: int) -> "XFactor":
        raise NotImplementedError

    def fourier(self) -> dict[int, complex]:
        """Exact x-Fourier coefficients {eta_1: coefficient}."""
        raise NotImplementedError

    def sup_abs(self) -> float:
        raise NotImplementedError

    def bandwidth(self) -> int:
        return max((abs(k) for k in self.fourier()), default=0)


class UnitX(XFactor):
    def values(self, x):
        return np.ones(x.shape[0], dtype=np.complex128)

    def derivative(self, order):
        return self if order == 0 else ZeroX()

    def fourier(self):
        return {0: 1.0 + 0j}

    def sup_abs(self):
        return 1.0


class ZeroX(XFactor):
    def values(self, x):
        return np.zeros(x.shape[0], dtype=np.complex128)

    def derivative(self, order):
        return self

    def fourier(self):
        return {}

    def sup_abs(self):
        return 0.0


@dataclass
class CosineOffset(XFactor):
    """c + cos(2 pi x_1)."""

    c: float

    def values(self, x):
        return (self.c + np.cos(TWO_PI * x[:, 0])).astype(np.complex128)

    def derivative(self, order):
        if order == 0:
            return self
        return TrigShift((TWO_PI) ** order, order * math.pi / 2.0)

    def fourier(self):
        return {0: complex(self.c), 1: 0.5 + 0j, -1: 0.5 + 0j}

    def sup_abs(self):
        return max(abs(self.c + 1.0), abs(self.c - 1.0))


@dataclass
class TrigShift(XFactor):
    """amp * cos(2 pi x_1 + phase); closed under differentiation."""

    amp: float
    phase: float

    def values(self, x):
        return (self.amp * np.cos(TWO_PI * x[:, 0] + self.phase)).astype(np.complex128)

    def derivative(self, order):
        if order == 0:
            return self
        return TrigShift(self.amp * (TWO_PI) ** order, self.phase + order * math.pi / 2.0)

    def fourier(self):
        half = 0.5 * self.amp
        return {1: half * cmath.exp(1j * self.phase), -1: half * cmath.exp(-1j * self.phase)}

    def sup_abs(self):
        return abs(self.amp)


@dataclass
class CharacterX(XFactor):
    """scale * exp(i 2 pi k x_1)."""

    k: int = 1
    scale: complex = 1.0 + 0j

    def values(self, x):
        return self.scale * np.exp(1j * TWO_PI * self.k * x[:, 0])

    def derivative(self, order):
        if order == 0:
            return self
        return CharacterX(self.k, self.scale * (1j * TWO_PI * self.k) ** order)

    def fourier(self):
        return {self.k: complex(self.scale)}

    def sup_abs(self):
        return abs(self.scale)


# ---------------------------------------------------------------------------
# xi-factors: frequency dependence, evaluable at any integer point so that
# forward differences never run out of data on catalog symbols.
# ---------------------------------------------------------------------------


class XiFactor:
    def values(self, xi: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class UnitXi(XiFactor):
    def values(self, xi):
        return np.ones(xi.shape[0], dtype=np.complex128)


@dataclass
class BracketPower(XiFactor):
    """<xi>^m."""

    m: float

    def values(self, xi):
        sq = np.sum(np.asarray(xi, dtype=np.float64) ** 2, axis=1)
        return ((1.0 + sq) ** (self.m / 2.0)).astype(np.complex128)


@dataclass
class GaussianDecay(XiFactor):
    """exp(-t |xi|^2)."""

    t: float

    def values(self, xi):
        sq = np.sum(np.asarray(xi, dtype=np.float64) ** 2, axis=1)
        return np.exp(-self.t * sq).astype(np.complex128)


@dataclass
class DifferencedXi(XiFactor):
    """Iterated forward difference of a base factor, by binomial expansion."""

    base: XiFactor
    alpha: tuple[int, ...]

    def values(self, xi):
        xi = np.asarray(xi, dtype=np.int64)
        total = np.zeros(xi.shape[0], dtype=np.complex128)
        ranges = [range(a + 1) for a in self.alpha]
        for gamma in product(*ranges):
            sign = (-1) ** (sum(self.alpha) - sum(gamma))
            coef = sign * math.prod(math.comb(a, g) for a, g in zip(self.alpha, gamma))
            total = total + coef * self.base.values(xi + np.asarray(gamma, dtype=np.int64))
        return total


# ---------------------------------------------------------------------------
# Symbols
# ---------------------------------------------------------------------------


class Symbol:
    """Common interface: pointwise values, x-sup per frequency, x-Fourier data."""

    dim: int
    claimed_order: float | None
    claimed_rho: float
    claimed_delta: float

    def values(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        """Table a(x_k, xi_l) of shape (K, L)."""
        raise NotImplementedError

    def x_sup_abs(self, xi: np.ndarray, grid_size: int = 64) -> np.ndarray:
        raise NotImplementedError

    def x_bandwidth(self) -> int | None:
        """Largest |eta_1| carrying x-frequency content; None when unknown."""
        raise NotImplementedError

    def is_x_independent(self) -> bool:
        return self.x_bandwidth() == 0


class SeparableSymbol(Symbol):
    """a(x, xi) = u(x) g(xi) with exact closed-form factors."""

    def __init__(
        self,
        xfactor: XFactor,
        xifactor: XiFactor,
        dim: int = 1,
        claimed_order: float | None = 0.0,
        claimed_rho: float = 1.0,
        claimed_delta: float = 0.0,
    ):
        if dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {dim}")
        self.xfactor = xfactor
        self.xifactor = xifactor
        self.dim = dim
        self.claimed_order = claimed_order
        self.claimed_rho = claimed_rho
        self.claimed_delta = claimed_delta

    def values(self, x, xi):
        return np.outer(self.xfactor.values(np.asarray(x)), self.xifactor.values(xi))

    def x_sup_abs(self, xi, grid_size: int = 64):
        return self.xfactor.sup_abs() * np.abs(self.xifactor.values(xi))

    def x_bandwidth(self):
        return self.xfactor.bandwidth()

    def x_fourier(self, eta, xi: np.ndarray) -> np.ndarray:
        """Exact hat{a}(eta, xi) for all xi; eta is a single integer vector."""
        eta = np.atleast_1d(np.asarray(eta, dtype=np.int64))
        coeffs = self.xfactor.fourier()
        if all(c == 0 for c in eta[1:]) and int(eta[0]) in coeffs:
            return coeffs[int(eta[0])] * self.xifactor.values(xi)
        return np.zeros(np.asarray(xi).shape[0], dtype=np.complex128)


class SampledSymbol(Symbol):
    """Symbol given as a complex table over grid x lattice (x-major order)."""

    def __init__(
        self,
        dim: int,
        grid_size: int,
        lattice: FrequencyLattice,
        table: np.ndarray,
        claimed_order: float | None = None,
        claimed_rho: float = 1.0,
        claimed_delta: float = 0.0,
    ):
        if dim != lattice.dim:
            raise ValueError("sampled symbol dim does not match its lattice")
        table = np.asarray(table, dtype=np.complex128)
        expected = (grid_size**dim, len(lattice))
        if table.shape != expected:
            raise ValueError(f"table shape {table.shape}, expected {expected}")
        self.dim = dim
        self.grid_size = grid_size
        self.lattice = lattice
        self.table = table
        self.claimed_order = claimed_order
        self.claimed_rho = claimed_rho
        self.claimed_delta = claimed_delta

    def values(self, x, xi):
        xi = np.asarray(xi, dtype=np.int64)
        cols = [self.lattice.index_of(p) for p in np.atleast_2d(xi)]
        if np.asarray(x).shape[0] != self.table.shape[0]:
            raise ValueError("sampled symbols evaluate only on their native grid")
        return self.table[:, cols]

    def x_sup_abs(self, xi, grid_size: int = 64):
        xi = np.atleast_2d(np.asarray(xi, dtype=np.int64))
        cols = [self.lattice.index_of(p) for p in xi]
        return np.abs(self.table[:, cols]).max(axis=0)

    def x_bandwidth(self):
        return None

    def x_grid_points(self) -> np.ndarray:
        idx = np.array(
            list(product(range(self.grid_size), repeat=self.dim)), dtype=np.float64
        )
        return idx / self.grid_size

    def __add__(self, other: "SampledSymbol") -> "SampledSymbol":
        if (
            not isinstance(other, SampledSymbol)
            or self.grid_size != other.grid_size
            or self.lattice != other.lattice
        ):
            raise ValueError("can only add sampled symbols on identical grid and lattice")
        return SampledSymbol(
            self.dim, self.grid_size, self.lattice, self.table + other.table,
            claimed_order=self.claimed_order,
        )


# ---------------------------------------------------------------------------
# Catalog constructors
# ---------------------------------------------------------------------------


def bessel_symbol(m: float, dim: int = 1) -> SeparableSymbol:
    """Multiplier <xi>^m (m = -s gives the inverse Bessel potential of order s)."""
    return SeparableSymbol(UnitX(), BracketPower(m), dim, claimed_order=m)


def heat_symbol(t: float, dim: int = 1) -> SeparableSymbol:
    """Multiplier exp(-t |xi|^2); decays faster than any power."""
    if t <= 0:
        raise ValueError(f"heat symbol needs t > 0, got {t}")
    return SeparableSymbol(UnitX(), GaussianDecay(t), dim, claimed_order=NEG_INFINITY_ORDER)


def modulated_symbol(c: float, g: XiFactor, dim: int = 1,
                     order: float | None = None) -> SeparableSymbol:
    """(c + cos 2 pi x_1) * g(xi); order is g's order."""
    if order is None:
        if isinstance(g, BracketPower):
            order = g.m
        elif isinstance(g, GaussianDecay):
            order = NEG_INFINITY_ORDER
        elif isinstance(g, UnitXi):
            order = 0.0
    return SeparableSymbol(CosineOffset(c), g, dim, claimed_order=order)


def character_symbol(dim: int = 1, k: int = 1) -> SeparableSymbol:
    """exp(i 2 pi k x_1): pointwise modulation, frequency-independent."""
    return SeparableSymbol(CharacterX(k), UnitXi(), dim, claimed_order=0.0)


def multiplier_symbol(g: XiFactor, dim: int = 1, order: float | None = None) -> SeparableSymbol:
    """x-independent symbol g(xi)."""
    return SeparableSymbol(UnitX(), g, dim, claimed_order=order)


def sample_symbol(a: Symbol, grid_size: int, lattice: FrequencyLattice) -> SampledSymbol:
    """Tabulate any symbol into the sampled representation."""
    idx = np.array(list(product(range(grid_size), repeat=a.dim)), dtype=np.float64)
    table = a.values(idx / grid_size, lattice.points)
    return SampledSymbol(
        a.dim, grid_size, lattice, table,
        claimed_order=a.claimed_order,
        claimed_rho=a.claimed_rho,
        claimed_delta=a.claimed_delta,
    )


# ---------------------------------------------------------------------------
# Difference and derivative calculus
# ---------------------------------------------------------------------------


def difference_op(a: Symbol, alpha, zero_extend: bool = False) -> Symbol:
    """Iterated forward difference D^alpha in the frequency variable.

    By default sampled symbols shrink: the result lives on radius
    N - max(alpha) so every retained point still has its shifted neighbours
    inside the original table.  ``zero_extend=True`` keeps the full lattice and
    reads missing neighbours as 0 instead; that silently corrupts decay
    behaviour near the edge, so it is opt-in.
    """
    alpha = _as_multi_index(alpha, a.dim)
    if isinstance(a, SeparableSymbol):
        new_order = None
        if a.claimed_order is not None:
            new_order = a.claimed_order - a.claimed_rho * sum(alpha)
        return SeparableSymbol(
            a.xfactor, DifferencedXi(a.xifactor, alpha), a.dim,
            claimed_order=new_order, claimed_rho=a.claimed_rho,
            claimed_delta=a.claimed_delta,
        )
    if isinstance(a, SampledSymbol):
        if zero_extend:
            new_lat = a.lattice
        else:
            new_radius = a.lattice.radius - max(alpha)
            if new_radius < 0:
                raise ValueError(
                    f"difference margin exhausted: order {alpha} on lattice radius "
                    f"{a.lattice.radius}"
                )
            new_lat = FrequencyLattice(a.dim, new_radius)
        table = np.zeros((a.table.shape[0], len(new_lat)), dtype=np.complex128)
        ranges = [range(x + 1) for x in alpha]
        for gamma in product(*ranges):
            sign = (-1) ** (sum(alpha) - sum(gamma))
            coef = sign * math.prod(math.comb(x, g) for x, g in zip(alpha, gamma))
            shift = np.asarray(gamma, dtype=np.int64)
            for j, p in enumerate(new_lat.points):
                q = p + shift
                if q in a.lattice:
                    table[:, j] += coef * a.table[:, a.lattice.index_of(q)]
        new_order = None
        if a.claimed_order is not None:
            new_order = a.claimed_order - a.claimed_rho * sum(alpha)
        return SampledSymbol(
            a.dim, a.grid_size, new_lat, table,
            claimed_order=new_order, claimed_rho=a.claimed_rho,
            claimed_delta=a.claimed_delta,
        )
    raise TypeError(f"unsupported symbol type {type(a).__name__}")


def x_derivative(a: Symbol, beta) -> Symbol:
    """Partial derivative d^beta/dx^beta; exact for catalog symbols, spectral
    for sampled ones (band-limited assumption on the table)."""
    beta = _as_multi_index(beta, a.dim)
    if isinstance(a, SeparableSymbol):
        new_order = None
        if a.claimed_order is not None:
            new_order = a.claimed_order + a.claimed_delta * sum(beta)
        if any(b > 0 for b in beta[1:]):
            xf: XFactor = ZeroX()  # catalog x-factors depend on x_1 only
        else:
            xf = a.xfactor.derivative(beta[0])
        return SeparableSymbol(
            xf, a.xifactor, a.dim,
            claimed_order=new_order, claimed_rho=a.claimed_rho,
            claimed_delta=a.claimed_delta,
        )
    if isinstance(a, SampledSymbol):
        m = a.grid_size
        shape = (m,) * a.dim + (len(a.lattice),)
        cube = a.table.reshape(shape)
        freqs = np.fft.fftfreq(m, d=1.0 / m)  # integer wavenumbers
        spectrum = np.fft.fftn(cube, axes=tuple(range(a.dim)))
        for axis, b in enumerate(beta):
            if b == 0:
                continue
            mult = (1j * TWO_PI * freqs) ** b
            shape_mult = [1] * (a.dim + 1)
            shape_mult[axis] = m
            spectrum = spectrum * mult.reshape(shape_mult)
        table = np.fft.ifftn(spectrum, axes=tuple(range(a.dim))).reshape(a.table.shape)
        new_order = None
        if a.claimed_order is not None:
            new_order = a.claimed_order + a.claimed_delta * sum(beta)
        return SampledSymbol(
            a.dim, a.grid_size, a.lattice, table,
            claimed_order=new_order, claimed_rho=a.claimed_rho,
            claimed_delta=a.claimed_delta,
        )
    raise TypeError(f"unsupported symbol type {type(a).__name__}")


# ---------------------------------------------------------------------------
# x-Fourier coefficients of symbols
# ---------------------------------------------------------------------------


def symbol_fourier(a: Symbol, eta, xi) -> complex:
    """hat{a}(eta, xi) = integral over x of e^{-i2pi<x,eta>} a(x, xi).

    Catalog symbols use their exact coefficients (equal to the quadrature value
    up to rounding); sampled symbols integrate their table by the rectangle
    rule.
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=np.int64))
    xi = np.atleast_1d(np.asarray(xi, dtype=np.int64))
    if isinstance(a, SeparableSymbol):
        return complex(a.x_fourier(eta, xi.reshape(1, -1))[0])
    if isinstance(a, SampledSymbol):
        col = a.lattice.index_of(xi)
        x = a.x_grid_points()
        phases = np.exp(-1j * TWO_PI * (x @ eta.astype(np.float64)))
        return fsum_complex(phases * a.table[:, col]) / (a.grid_size**a.dim)
    raise TypeError(f"unsupported symbol type {type(a).__name__}")


def x_fourier_table(a: Symbol, etas: np.ndarray, lattice: FrequencyLattice) -> np.ndarray:
    """Table hat{a}(eta_r, xi_l) of shape (R, L) over explicit eta rows.

    For sampled symbols, eta outside the alias-free window |eta|_inf <= M//2 is
    outside the admissible difference range and reported as 0.
    """
    etas = np.atleast_2d(np.asarray(etas, dtype=np.int64))
    if isinstance(a, SeparableSymbol):
        out = np.zeros((etas.shape[0], len(lattice)), dtype=np.complex128)
        for r, eta in enumerate(etas):
            out[r] = a.x_fourier(eta, lattice.points)
        return out
    if isinstance(a, SampledSymbol):
        if lattice != a.lattice:
            raise ValueError(
                f"sampled symbol is tabulated on lattice radius {a.lattice.radius} "
                f"(dim {a.lattice.dim}), not the requested radius {lattice.radius} "
                f"(dim {lattice.dim})"
            )
        x = a.x_grid_points()
        out = np.zeros((etas.shape[0], len(lattice)), dtype=np.complex128)
        half = a.grid_size // 2
        scale = a.grid_size**a.dim
        for r, eta in enumerate(etas):
            if np.max(np.abs(eta)) > half:
                continue
            phases = np.exp(-1j * TWO_PI * (x @ eta.astype(np.float64)))
            terms = phases[:, None] * a.table
            for l in range(len(lattice)):
                out[r, l] = fsum_complex(terms[:, l]) / scale
        return out
    raise TypeError(f"unsupported symbol type {type(a).__name__}")


# ---------------------------------------------------------------------------
# Empirical order fit and Fourier decay constant
# ---------------------------------------------------------------------------


def estimate_order(
    a: Symbol, alpha, beta, lattice: FrequencyLattice
) -> tuple[float, float]:
    """Fit sup_x |D^alpha d^beta a(x, xi)| ~ C <xi>^m over lattice shells.

    Returns (m_hat, C_hat) from a log-log least-squares fit of shell-wise
    suprema against the bracket, excluding the flat region <xi> < 2.  The
    all-zero case reports order -inf.
    """
    if lattice.radius < 8:
        raise ValueError(f"estimate_order needs lattice radius >= 8, got {lattice.radius}")
    b = x_derivative(a, beta)
    b = difference_op(b, alpha)
    work_lattice = b.lattice if isinstance(b, SampledSymbol) else lattice
    pts = work_lattice.points
    sups = np.asarray(b.x_sup_abs(pts), dtype=np.float64)
    sq = np.sum(pts.astype(np.int64) ** 2, axis=1)
    shells: dict[int, tuple[float, float]] = {}
    for i in range(pts.shape[0]):
        s = math.isqrt(int(sq[i]))
        v = float(sups[i])
        if s not in shells or v > shells[s][1]:
            shells[s] = (math.sqrt(1.0 + float(sq[i])), v)
    xs, ys = [], []
    for s in sorted(shells):
        bracket, v = shells[s]
        if bracket < 2.0 or v <= 0.0:
            continue
        xs.append(math.log(bracket))
        ys.append(math.log(v))
    if not xs:
        return NEG_INFINITY_ORDER, 0.0
    if len(xs) == 1:
        return 0.0, math.exp(ys[0])
    n = len(xs)
    sx, sy = fsum(xs), fsum(ys)
    sxx = fsum(x * x for x in xs)
    sxy = fsum(x * y for x, y in zip(xs, ys))
    denom = n * sxx - sx * sx
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    return float(slope), float(math.exp(intercept))


def fourier_decay_constant(
    a: Symbol, k: int, m: float, delta: float, lattice: FrequencyLattice
) -> float:
    """Empirical constant sup |hat{a}(eta, xi)| <eta>^{2k} <xi>^{-(m + 2k delta)}.

    A finite, radius-stable value certifies the expected x-Fourier decay of a
    symbol of order m and x-roughness delta with 2k derivatives in x.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    table = np.abs(x_fourier_table(a, lattice.points, lattice))
    eta_w = lattice.brackets() ** (2 * k)
    xi_w = lattice.brackets() ** (-(m + 2 * k * delta))
    weighted = eta_w[:, None] * table * xi_w[None, :]
    return float(weighted.max())
