"""Distances between nonnegative power spectra on a common uniform grid.

All distances are intensive (normalized by the number of grid points, i.e.
rectangle quadrature of the corresponding integral), so values do not grow
with grid resolution.  The Itakura-Saito divergence needs a strictly
positive floor because spectra may contain exact zeros; the floor clamps
both arguments.  The symmetric variant is the plain (unhalved) sum of the
two orientations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PowerSpectrumGrid",
    "dist_l1",
    "dist_l2",
    "dist_isd",
    "dist_sis",
]

DEFAULT_FLOOR_REL = 1e-12

_GRID_TOL = 1e-12


@dataclass(frozen=True)
class PowerSpectrumGrid:
    """Nonnegative power values on the uniform grid ``m/M``, ``m = 0 .. M-1``."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.shape != v.shape or g.ndim != 1 or g.size < 1:
            raise ValueError("grid and values must be equal-length 1-d sequences")
        m = g.size
        if np.max(np.abs(g - np.arange(m) / m)) > _GRID_TOL:
            raise ValueError("grid must be the uniform half-open grid m/M")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("power values must be finite and nonnegative")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.grid.size


def _common(s1: PowerSpectrumGrid, s2: PowerSpectrumGrid) -> tuple[np.ndarray, np.ndarray]:
    if len(s1) != len(s2) or np.max(np.abs(s1.grid - s2.grid)) > _GRID_TOL:
        raise ValueError("spectra are not on a common grid")
    return s1.values, s2.values


def dist_l1(s1: PowerSpectrumGrid, s2: PowerSpectrumGrid) -> float:
    """Mean absolute difference (rectangle quadrature of the L1 distance)."""
    v1, v2 = _common(s1, s2)
    return float(np.mean(np.abs(v1 - v2)))


def dist_l2(s1: PowerSpectrumGrid, s2: PowerSpectrumGrid) -> float:
    """Root mean squared difference (rectangle quadrature of the L2 distance)."""
    v1, v2 = _common(s1, s2)
    return float(np.sqrt(np.mean((v1 - v2) ** 2)))


def dist_isd(s1: PowerSpectrumGrid, s2: PowerSpectrumGrid, floor: float | None = None) -> float:
    """Itakura-Saito divergence ``mean(r - log r - 1)`` with ``r = s1/s2``.

    Asymmetric in its arguments.  Both spectra are clamped from below by
    ``floor`` (default ``1e-12 * max(s2)``) so exact zeros stay finite.
    """
    v1, v2 = _common(s1, s2)
    if floor is None:
        floor = DEFAULT_FLOOR_REL * float(np.max(v2))
    if not floor > 0:
        raise ValueError("floor must be strictly positive")
    r = np.maximum(v1, floor) / np.maximum(v2, floor)
    return float(np.mean(r - np.log(r) - 1.0))


def dist_sis(s1: PowerSpectrumGrid, s2: PowerSpectrumGrid, floor: float | None = None) -> float:
    """Symmetric Itakura-Saito distance: the sum of both orientations.

    The default floor is symmetric in the two spectra so that
    ``dist_sis(s1, s2) == dist_sis(s2, s1)`` exactly.
    """
    if floor is None:
        floor = DEFAULT_FLOOR_REL * float(max(np.max(s1.values), np.max(s2.values)))
    return dist_isd(s1, s2, floor) + dist_isd(s2, s1, floor)
