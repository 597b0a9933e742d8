"""On-disk formats: periodic-function and sampled-symbol JSON files.

Complex numbers are stored as [re, im] pairs.  Function files carry the grid
in x-lexicographic order; symbol files are x-major, lattice-minor with the
lattice in its canonical ordering.
"""

from __future__ import annotations

import json

import numpy as np

from .harmonic import FrequencyLattice, PeriodicFunction
from .symbols import SampledSymbol


def _pairs_to_array(pairs, what: str) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{what}: values must be [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{what}: values must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _array_to_pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=np.complex128)]


def load_periodic_function(path: str) -> PeriodicFunction:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("dim", "grid_size", "values"):
        if key not in doc:
            raise ValueError(f"function file {path} is missing the {key!r} field")
    values = _pairs_to_array(doc["values"], f"function file {path}")
    return PeriodicFunction(int(doc["dim"]), int(doc["grid_size"]), values)


def save_periodic_function(f: PeriodicFunction, path: str) -> None:
    doc = {"dim": f.dim, "grid_size": f.grid_size, "values": _array_to_pairs(f.values)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_sampled_symbol(path: str) -> SampledSymbol:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("dim", "grid_size", "lattice_radius", "values"):
        if key not in doc:
            raise ValueError(f"symbol file {path} is missing the {key!r} field")
    dim = int(doc["dim"])
    grid_size = int(doc["grid_size"])
    lattice = FrequencyLattice(dim, int(doc["lattice_radius"]))
    flat = _pairs_to_array(doc["values"], f"symbol file {path}")
    expected = grid_size**dim * len(lattice)
    if flat.size != expected:
        raise ValueError(
            f"symbol file {path}: {flat.size} values, expected grid^dim * lattice = {expected}"
        )
    table = flat.reshape(grid_size**dim, len(lattice))
    kwargs = {}
    if "claimed_order" in doc and doc["claimed_order"] is not None:
        kwargs["claimed_order"] = float(doc["claimed_order"])
    if "claimed_rho" in doc:
        kwargs["claimed_rho"] = float(doc["claimed_rho"])
    if "claimed_delta" in doc:
        kwargs["claimed_delta"] = float(doc["claimed_delta"])
    return SampledSymbol(dim, grid_size, lattice, table, **kwargs)


def save_sampled_symbol(a: SampledSymbol, path: str) -> None:
    doc = {
        "dim": a.dim,
        "grid_size": a.grid_size,
        "lattice_radius": a.lattice.radius,
        "values": _array_to_pairs(a.table.reshape(-1)),
        "claimed_order": a.claimed_order,
        "claimed_rho": a.claimed_rho,
        "claimed_delta": a.claimed_delta,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
