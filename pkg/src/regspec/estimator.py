"""Closed-form regularized least-squares periodogram estimators.

Every estimator here minimizes a quadratic data-fit + penalty criterion and
has a closed form: a (possibly windowed) Fourier transform of the data.  The
discrete-frequency solutions shrink the zero-padded transform bin by bin; the
continuous-frequency solutions taper the data sample by sample.  A dense
normal-equation solver (:func:`rls_oracle_df`) is provided purely to verify
the closed forms at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import (
    SpectrumCF,
    SpectrumDF,
    adjoint_synthesis_cf,
    as_frequency_grid,
    as_samples,
    dft,
    zero_pad,
)
from .penalty import PenaltySpec, Window, sobolev_eigenvalues, window_from_eigenvalues

__all__ = [
    "EstimationResult",
    "usual_periodogram_df",
    "usual_periodogram_cf",
    "windowed_periodogram_df",
    "windowed_periodogram_cf",
    "rls_oracle_df",
    "power_spectrum",
]

# The dense oracle is for verification only; keep it at desk scale.
ORACLE_MAX_P = 64

DEFAULT_PAD_FACTOR = 8


@dataclass(frozen=True)
class EstimationResult:
    """A spectrum estimate together with the window that produced it.

    ``empirical_power`` is computed from the spectrum itself (sum of squared
    moduli for discrete frequencies, rectangle quadrature for continuous
    ones); it equals ``sum(omega_n**2 * |y_n|**2)`` for every estimate.
    """

    spectrum: SpectrumDF | SpectrumCF
    window: Window
    lam: float
    empirical_power: float

    @property
    def n_samples(self) -> int:
        return len(self.window)


def _spectral_power(spectrum: SpectrumDF | SpectrumCF) -> float:
    if isinstance(spectrum, SpectrumDF):
        return float(np.sum(np.abs(spectrum.amps) ** 2))
    # Rectangle quadrature of the squared modulus; exact for uniform grids
    # with at least as many points as data samples (the integrand is a
    # trigonometric polynomial).
    return float(np.mean(np.abs(spectrum.values) ** 2))


def usual_periodogram_df(y, p: int, lam: float) -> SpectrumDF:
    """Separable-penalty solution: ``(1 + lam)**-1 * dft(zero_pad(y, p))``.

    ``lam = 0`` is accepted; the criterion degenerates but its minimizer does
    not (it solves the interpolation problem with minimum power).
    """
    if lam < 0:
        raise ValueError("regularization parameter must be >= 0")
    return SpectrumDF(dft(zero_pad(y, p)) / (1.0 + lam))


def usual_periodogram_cf(y, lam: float, grid) -> SpectrumCF:
    """Continuous-frequency counterpart of :func:`usual_periodogram_df`.

    ``a_hat(nu) = (1 + lam)**-1 * sum_n y_n exp(-2j*pi*nu*n)`` on the grid;
    equals ``sqrt(P)`` times the discrete solution on ``nu_p = p/P``.
    """
    if lam < 0:
        raise ValueError("regularization parameter must be >= 0")
    base = adjoint_synthesis_cf(y, grid)
    return SpectrumCF(base.grid, base.values / (1.0 + lam))


def windowed_periodogram_df(y, p: int, lam: float, penalty: PenaltySpec) -> EstimationResult:
    """Smoothing-penalty solution on the discrete frequency grid.

    The zero-padded data vector is shrunk entrywise by
    ``w_k = 1 / (1 + lam * e_k)`` before transforming, where ``e`` are the
    penalty eigenvalues; entries beyond the data length are zero, so only the
    first ``N`` eigenvalues matter.
    """
    if lam < 0:
        raise ValueError("regularization parameter must be >= 0")
    v = as_samples(y)
    evals = penalty.eigenvalues(p)
    window = window_from_eigenvalues(evals, lam, v.size)
    shrunk = zero_pad(window.coeffs * v, p)
    spectrum = SpectrumDF(dft(shrunk))
    return EstimationResult(spectrum, window, lam, _spectral_power(spectrum))


def windowed_periodogram_cf(y, lam: float, alphas, grid) -> EstimationResult:
    """Smoothing-penalty solution in continuous frequency: a windowed FT.

    ``a_hat(nu) = sum_n omega_n y_n exp(-2j*pi*nu*n)`` with
    ``omega_n = 1 / (1 + lam * eps_n)`` and ``eps_n`` the derivative-penalty
    eigenvalues of ``alphas``.
    """
    if lam < 0:
        raise ValueError("regularization parameter must be >= 0")
    v = as_samples(y)
    a = np.asarray(alphas, dtype=float)
    if not np.any(a > 0):
        raise ValueError("degenerate penalty: all derivative weights are zero")
    evals = sobolev_eigenvalues(a, np.arange(v.size))
    window = window_from_eigenvalues(evals, lam, v.size)
    spectrum = adjoint_synthesis_cf(window.coeffs * v, grid)
    power = float(np.sum(window.coeffs**2 * np.abs(v) ** 2))
    return EstimationResult(spectrum, window, lam, power)


def rls_oracle_df(y, p: int, lam: float, penalty: PenaltySpec) -> SpectrumDF:
    """Dense normal-equation solve of the penalized criterion.

    Builds the synthesis matrix and the full circulant penalty explicitly and
    solves ``(W^H W + lam * Pi) a = W^H y``.  Verification only: ``p`` is
    capped at ``ORACLE_MAX_P`` and ``lam = 0`` is rejected whenever the
    normal matrix is singular (``p > N``).
    """
    v = as_samples(y)
    if p > ORACLE_MAX_P:
        raise ValueError(f"oracle is restricted to p <= {ORACLE_MAX_P}")
    if p < v.size:
        raise ValueError("pad length smaller than the series length")
    if lam <= 0 and p > v.size:
        raise ValueError("singular normal matrix: lam = 0 with p > N")
    if lam < 0:
        raise ValueError("regularization parameter must be >= 0")
    n = v.size
    grid_p = np.arange(p)
    w = np.exp(2j * np.pi * np.outer(np.arange(n), grid_p) / p) / np.sqrt(p)
    f = np.exp(-2j * np.pi * np.outer(grid_p, grid_p) / p) / np.sqrt(p)
    pi_mat = f @ np.diag(penalty.eigenvalues(p)).astype(complex) @ f.conj().T
    normal = w.conj().T @ w + lam * pi_mat
    rhs = w.conj().T @ v
    return SpectrumDF(np.linalg.solve(normal, rhs))


def power_spectrum(result, normalization: str = "raw", n_samples: int | None = None) -> np.ndarray:
    """Squared modulus of an estimate, optionally per data sample.

    ``raw`` returns ``|a_hat|**2``; ``per_sample`` divides by the number of
    data samples, the scaling under which the plain periodogram is comparable
    to a power spectral density.  Accepts an :class:`EstimationResult` or a
    bare spectrum (then ``n_samples`` is required for ``per_sample``).
    """
    if isinstance(result, EstimationResult):
        spectrum = result.spectrum
        n_samples = result.n_samples
    else:
        spectrum = result
    values = spectrum.amps if isinstance(spectrum, SpectrumDF) else spectrum.values
    power = np.abs(values) ** 2
    if normalization == "raw":
        return power
    if normalization == "per_sample":
        if n_samples is None:
            raise ValueError("per_sample normalization needs n_samples")
        return power / n_samples
    raise ValueError(f"unknown normalization {normalization!r}")


def default_pad(n: int) -> int:
    """Default zero-padded evaluation size (plot resolution)."""
    return DEFAULT_PAD_FACTOR * n


def evaluation_grid(n: int, m: int | None = None) -> np.ndarray:
    """Uniform evaluation grid of ``m`` points (default ``8 * n``)."""
    m = m or default_pad(n)
    return as_frequency_grid(np.arange(m) / m)
