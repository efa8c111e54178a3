"""Fourier operators and the domain types they act on.

Normalization convention, fixed once for the whole package:

* ``F_P`` (the square transform behind :func:`dft`) carries the symmetric
  factor ``P**-0.5``, i.e. ``F_P[p, q] = P**-0.5 * exp(-2j*pi*p*q/P)``.
  It is unitary and symmetric (``F_P.T == F_P``).
* The synthesis matrix ``W[n, p] = P**-0.5 * exp(+2j*pi*p*n/P)`` consists of
  the first ``N`` rows of the inverse transform, so ``W @ F_P == [I_N  0]``
  and the adjoint satisfies ``W.conj().T @ y == dft(zero_pad(y, P))``.
* Continuous-frequency synthesis integrates ``a(nu) * exp(+2j*pi*nu*n)`` over
  ``[0, 1)`` and its adjoint evaluates ``sum_n z_n * exp(-2j*pi*nu*n)``; on
  the grid ``nu_p = p/P`` the adjoint equals ``sqrt(P)`` times the discrete
  one.

Every other module relies on these factors; do not change them in isolation.
Frequency grids are half-open, ``[0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TimeSeries",
    "SpectrumDF",
    "SpectrumCF",
    "as_samples",
    "as_frequency_grid",
    "uniform_grid",
    "dft",
    "idft",
    "zero_pad",
    "synthesis_df",
    "adjoint_synthesis_df",
    "adjoint_synthesis_cf",
]


@dataclass(frozen=True)
class TimeSeries:
    """Complex observed samples ``y_n`` for ``n = 0 .. N-1``."""

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1 or samples.size < 1:
            raise ValueError("TimeSeries needs a 1-d sequence with N >= 1")
        if not np.all(np.isfinite(samples.view(float))):
            raise ValueError("TimeSeries samples must be finite")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class SpectrumDF:
    """Complex amplitudes ``a_p`` on the discrete grid ``nu_p = p/P``."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("SpectrumDF needs a 1-d sequence with P >= 1")
        object.__setattr__(self, "amps", amps)

    @property
    def grid_size(self) -> int:
        return self.amps.size

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.grid_size) / self.grid_size


@dataclass(frozen=True)
class SpectrumCF:
    """Samples of a continuous-frequency amplitude spectrum ``a(nu)``."""

    grid: np.ndarray
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        grid = as_frequency_grid(self.grid)
        values = np.asarray(self.values, dtype=complex)
        if values.shape != grid.shape:
            raise ValueError("grid and values must have equal length")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


def as_samples(y) -> np.ndarray:
    """Coerce a TimeSeries, SpectrumDF or array-like to a 1-d complex array."""
    if isinstance(y, TimeSeries):
        return y.samples
    if isinstance(y, SpectrumDF):
        return y.amps
    v = np.asarray(y, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("expected a non-empty 1-d sequence")
    return v


def as_frequency_grid(grid) -> np.ndarray:
    """Validate a frequency grid: real values, strictly increasing, in [0, 1)."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 1:
        raise ValueError("frequency grid must be a non-empty 1-d sequence")
    if np.any(g < 0.0) or np.any(g >= 1.0):
        raise ValueError("frequencies must lie in [0, 1)")
    if g.size > 1 and np.any(np.diff(g) <= 0):
        raise ValueError("frequency grid must be strictly increasing")
    return g


def uniform_grid(m: int) -> np.ndarray:
    """The uniform half-open grid ``p/m`` for ``p = 0 .. m-1``."""
    if m < 1:
        raise ValueError("grid size must be >= 1")
    return np.arange(m) / m


def dft(v) -> np.ndarray:
    """Unitary discrete Fourier transform ``F_P @ v``.

    ``F_P[p, q] = P**-0.5 * exp(-2j*pi*p*q/P)``; unitary and symmetric.
    """
    v = as_samples(v)
    return np.fft.fft(v) / np.sqrt(v.size)


def idft(v) -> np.ndarray:
    """Inverse (adjoint) of :func:`dft`, ``F_P.conj().T @ v``."""
    v = as_samples(v)
    return np.fft.ifft(v) * np.sqrt(v.size)


def zero_pad(y, p: int) -> np.ndarray:
    """Extend ``y`` with zeros up to length ``p`` (``p >= N``)."""
    v = as_samples(y)
    if p < v.size:
        raise ValueError(f"pad length {p} is smaller than the series length {v.size}")
    out = np.zeros(p, dtype=complex)
    out[: v.size] = v
    return out


def synthesis_df(a, n: int) -> TimeSeries:
    """Apply the truncated inverse transform ``W`` to discrete amplitudes.

    ``W[n, p] = P**-0.5 * exp(+2j*pi*p*n/P)`` for ``n = 0 .. N-1``; this is
    the first ``N`` rows of the inverse of :func:`dft`, so the result equals
    the head of ``idft(a)``.
    """
    amps = as_samples(a)
    if n > amps.size:
        raise ValueError(f"cannot synthesize {n} samples from {amps.size} amplitudes")
    if n < 1:
        raise ValueError("need at least one output sample")
    return TimeSeries(idft(amps)[:n])


def adjoint_synthesis_df(y, p: int) -> SpectrumDF:
    """Adjoint of :func:`synthesis_df`: ``W.conj().T @ y = dft(zero_pad(y, p))``."""
    return SpectrumDF(dft(zero_pad(y, p)))


def adjoint_synthesis_cf(z, grid) -> SpectrumCF:
    """Adjoint of the continuous-frequency synthesis operator.

    Evaluates ``a(nu) = sum_n z_n * exp(-2j*pi*nu*n)`` on the given grid.
    On ``nu_p = p/P`` this equals ``sqrt(P)`` times the discrete adjoint.
    """
    v = as_samples(z)
    g = as_frequency_grid(grid)
    phases = np.exp(-2j * np.pi * np.outer(g, np.arange(v.size)))
    return SpectrumCF(g, phases @ v)
