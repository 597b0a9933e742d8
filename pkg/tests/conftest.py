import numpy as np
import pytest

from torustrace.harmonic import (
    FourierCoefficients,
    FrequencyLattice,
    inverse_transform,
    min_grid_size,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def character(k: int, radius: int | None = None, grid_size: int | None = None):
    """e^{i 2 pi k x} synthesized through the package's own inverse transform."""
    radius = radius if radius is not None else max(abs(k), 1)
    lattice = FrequencyLattice(1, radius)
    coeffs = np.zeros(len(lattice), dtype=complex)
    coeffs[lattice.index_of((k,))] = 1.0
    grid = grid_size or min_grid_size(radius)
    return inverse_transform(FourierCoefficients(lattice, coeffs), grid), lattice


def bandlimited(coeff_map: dict[int, complex], radius: int, grid_size: int | None = None):
    """Trig polynomial from an explicit coefficient map (1-d)."""
    lattice = FrequencyLattice(1, radius)
    coeffs = np.zeros(len(lattice), dtype=complex)
    for k, v in coeff_map.items():
        coeffs[lattice.index_of((k,))] = v
    grid = grid_size or min_grid_size(radius)
    return inverse_transform(FourierCoefficients(lattice, coeffs), grid), lattice
