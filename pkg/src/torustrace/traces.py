"""Nuclear and spectral traces of truncated toroidal operators.

At every truncation radius the compression satisfies the trace identity
exactly: sum of eigenvalues = matrix trace = sum_xi hat{a}(0, xi).  Growing
the radius and watching the nuclear-trace increments gives an empirical tail;
non-summable symbols are not rejected, their divergence is surfaced in the
per-radius history.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .harmonic import FrequencyLattice
from .sums import fsum_complex
from .symbols import Symbol, x_fourier_table
from .quantize import eigenvalues, operator_matrix


@dataclass
class RadiusRecord:
    radius: int
    nuclear: complex
    spectral: complex
    abs_diff: float


@dataclass
class TraceReport:
    nuclear_trace: complex
    spectral_trace: complex | None
    eigenvalues: np.ndarray | None
    truncation_radius: int
    tail_estimate: float | None
    history: list[RadiusRecord] = field(default_factory=list)
    history_converged: bool | None = None


def nuclear_trace(a: Symbol, lattice: FrequencyLattice) -> complex:
    """sum_xi hat{a}(0, xi): a function of the symbol and the lattice only
    (no function-space parameters enter)."""
    zero = np.zeros((1, lattice.dim), dtype=np.int64)
    row = x_fourier_table(a, zero, lattice)[0]
    return fsum_complex(row)


def spectral_trace(
    a: Symbol, lattice: FrequencyLattice
) -> tuple[complex, np.ndarray]:
    """Eigenvalues of the compression and their sum, canonical order."""
    eigs = eigenvalues(operator_matrix(a, lattice))
    return fsum_complex(eigs), eigs


def _increments_converged(increments: list[float]) -> bool | None:
    if len(increments) < 2:
        return None
    for prev, cur in zip(increments, increments[1:]):
        if prev == 0.0:
            if cur > 0.0:
                return False
        elif cur > 0.9 * prev:
            return False
    return True


def lidskii_compare(
    a: Symbol, radii: list[int], include_eigenvalues: bool = False
) -> TraceReport:
    """Nuclear and spectral traces across increasing radii.

    Successive nuclear-trace increments serve as the empirical truncation
    tail; a history whose increments fail to shrink geometrically is flagged
    as non-convergent rather than rejected.
    """
    radii = [int(r) for r in radii]
    if not radii:
        raise ValueError("need at least one radius")
    if any(b <= s for s, b in zip(radii, radii[1:])):
        raise ValueError(f"radii must be strictly increasing, got {radii}")
    history: list[RadiusRecord] = []
    eigs_last = None
    for radius in radii:
        lattice = FrequencyLattice(a.dim, radius)
        nuc = nuclear_trace(a, lattice)
        spec, eigs = spectral_trace(a, lattice)
        eigs_last = eigs
        history.append(RadiusRecord(radius, nuc, spec, abs(nuc - spec)))
    increments = [
        abs(nxt.nuclear - cur.nuclear) for cur, nxt in zip(history, history[1:])
    ]
    tail = increments[-1] if increments else None
    return TraceReport(
        nuclear_trace=history[-1].nuclear,
        spectral_trace=history[-1].spectral,
        eigenvalues=eigs_last if include_eigenvalues else None,
        truncation_radius=radii[-1],
        tail_estimate=tail,
        history=history,
        history_converged=_increments_converged(increments),
    )


def tail_estimate(a: Symbol, lattice: FrequencyLattice, order_hint: float) -> float:
    """Integral-test bound on sum_{|xi| > N} sup_x |a(x, xi)|.

    The envelope constant is calibrated on the outermost lattice shell, so the
    bound is tight exactly when the symbol really follows C <xi>^{order_hint}.
    """
    n = lattice.dim
    if not order_hint < -n:
        raise ValueError(
            f"order_hint {order_hint} is not summable in dimension {n}; need < {-n}"
        )
    radius = lattice.radius
    if radius < 1:
        raise ValueError("tail_estimate needs lattice radius >= 1")
    boundary = np.abs(lattice.points).max(axis=1) == radius
    pts = lattice.points[boundary]
    sups = np.asarray(a.x_sup_abs(pts), dtype=np.float64)
    brackets = np.sqrt(1.0 + np.sum(pts.astype(np.float64) ** 2, axis=1))
    envelope = float((sups * brackets ** (-order_hint)).max()) if pts.size else 0.0
    h = order_hint
    if n == 1:
        return 2.0 * envelope * radius ** (h + 1) / (-h - 1)
    return 8.0 * envelope * radius ** (h + 2) / (-h - 2)
