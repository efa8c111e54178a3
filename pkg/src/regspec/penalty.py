"""Penalty descriptions and the eigenvalue sequences / windows they induce.

A quadratic smoothing penalty enters every estimator only through a
nonnegative eigenvalue sequence: ``eps_p`` for derivative (Sobolev) penalties
on continuous spectra, ``e_p`` for circulant penalties on discretized ones.
The induced data window is ``omega_n = 1 / (1 + lam * e_n)``, so ``lam = 0``
gives the all-ones window and larger eigenvalues taper harder.

Classic window families (hamming, hanning, triangular) are not defined by a
penalty anywhere; we embed them by choosing the one-sided reference lag
window ``wbar_n`` on ``n = 0 .. N-1`` with ``wbar_0 = 1`` and inverting the
window formula at ``lam = 1``, i.e. ``e_n = 1/wbar_n - 1``.  Scaling ``lam``
then sweeps each family through sharper or flatter versions of itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import dft

__all__ = [
    "HERMITIAN_TOL",
    "WINDOW_NAMES",
    "NormalizationUndefinedError",
    "PenaltySpec",
    "Window",
    "sobolev_eigenvalues",
    "circulant_eigenvalues",
    "window_from_eigenvalues",
    "named_window_eigenvalues",
    "normalize_penalty",
    "window_bank",
]

# Absolute tolerance for Hermitian / positivity checks; exceeds the roundoff
# of an O(P^2) transform at desk scale (P <= 4096).
HERMITIAN_TOL = 1e-10

WINDOW_NAMES = ("cauchy", "inv_cosine", "hamming", "hanning", "triangular")


class NormalizationUndefinedError(ValueError):
    """Raised when a penalty with a zero eigenvalue cannot be normalized."""


@dataclass(frozen=True)
class Window:
    """Real taper coefficients ``omega_n`` for ``n = 0 .. N-1``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("Window needs a non-empty 1-d coefficient sequence")
        object.__setattr__(self, "coeffs", c)

    def __len__(self) -> int:
        return self.coeffs.size


class PenaltySpec:
    """A penalty in one of three interchangeable forms.

    Use the constructors :meth:`sobolev`, :meth:`circulant_row` or
    :meth:`tabulated`; :meth:`eigenvalues` realizes the sequence on demand.
    """

    def __init__(self, variant: str, payload: np.ndarray):
        if variant not in ("sobolev", "circulant_row", "tabulated"):
            raise ValueError(f"unknown penalty variant {variant!r}")
        self.variant = variant
        self.payload = payload

    @classmethod
    def sobolev(cls, alphas) -> "PenaltySpec":
        """Derivative-weight coefficients ``alpha_0 .. alpha_Q``."""
        a = np.asarray(alphas, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise ValueError("need at least alpha_0")
        if np.any(a < 0):
            raise ValueError("derivative weights must be nonnegative")
        if not np.any(a > 0):
            raise ValueError("degenerate penalty: all derivative weights are zero")
        return cls("sobolev", a)

    @classmethod
    def circulant_row(cls, row) -> "PenaltySpec":
        """First row of a Hermitian circulant penalty matrix."""
        r = np.asarray(row, dtype=complex)
        if r.ndim != 1 or r.size < 1:
            raise ValueError("need a non-empty first row")
        return cls("circulant_row", r)

    @classmethod
    def tabulated(cls, evals) -> "PenaltySpec":
        """Eigenvalues given directly."""
        e = np.asarray(evals, dtype=float)
        if e.ndim != 1 or e.size < 1:
            raise ValueError("need at least one eigenvalue")
        if np.any(e < 0):
            raise ValueError("tabulated eigenvalues must be nonnegative")
        return cls("tabulated", e)

    def eigenvalues(self, p: int) -> np.ndarray:
        """Realize the eigenvalue sequence on indices ``0 .. p-1``."""
        if self.variant == "sobolev":
            return sobolev_eigenvalues(self.payload, np.arange(p))
        if self.variant == "circulant_row":
            if self.payload.size != p:
                raise ValueError(
                    f"circulant row has length {self.payload.size}, expected {p}"
                )
            return circulant_eigenvalues(self.payload)
        if self.payload.size < p:
            raise ValueError(f"only {self.payload.size} tabulated eigenvalues, need {p}")
        return self.payload[:p].copy()


def sobolev_eigenvalues(alphas, indices) -> np.ndarray:
    """Eigenvalues ``eps_p = sum_q alpha_q * (2*pi*p)**(2q)``.

    Even in ``p``, so negative indices are allowed and give ``eps_{-p} = eps_p``.
    """
    a = np.asarray(alphas, dtype=float)
    if np.any(a < 0):
        raise ValueError("derivative weights must be nonnegative")
    p = np.asarray(indices, dtype=float)
    x = (2.0 * np.pi * p) ** 2
    # Horner evaluation in x = (2 pi p)^2.
    out = np.zeros_like(x)
    for coeff in a[::-1]:
        out = out * x + coeff
    return out


def circulant_eigenvalues(row) -> np.ndarray:
    """Eigenvalues of the Hermitian circulant with the given first row.

    These are the unnormalized DFT of the row, ``sqrt(P) * dft(row)``.  The
    result must be real (Hermitian matrix) and nonnegative (valid penalty);
    violations beyond ``HERMITIAN_TOL`` raise.
    """
    r = np.asarray(row, dtype=complex)
    e = np.sqrt(r.size) * dft(r)
    if np.max(np.abs(e.imag)) > HERMITIAN_TOL:
        raise ValueError("row does not define a Hermitian circulant matrix")
    e = e.real
    if np.min(e) < -HERMITIAN_TOL:
        raise ValueError("indefinite penalty: negative circulant eigenvalue")
    return np.maximum(e, 0.0)


def window_from_eigenvalues(evals, lam: float, n: int) -> Window:
    """Window ``omega_k = 1 / (1 + lam * e_k)`` truncated to ``k < n``.

    Only the first ``n`` eigenvalues ever matter for estimation from ``n``
    samples, so longer sequences are accepted and truncated.
    """
    if lam < 0:
        raise ValueError("regularization parameter must be >= 0")
    e = np.asarray(evals, dtype=float)
    if e.ndim != 1 or e.size < n:
        raise ValueError(f"need at least {n} eigenvalues, got {e.size}")
    if np.any(e[:n] < 0):
        raise ValueError("eigenvalues must be nonnegative")
    return Window(1.0 / (1.0 + lam * e[:n]))


def named_window_eigenvalues(name: str, n: int, p: int | None = None) -> np.ndarray:
    """Eigenvalue sequence of a named window family, length ``n``.

    cauchy
        ``e_k = (2*pi*k)**2``, the pure first-derivative penalty.
    inv_cosine
        ``e_k = 1 - cos(2*pi*k/p)``, the circular first-difference penalty on
        a ``p``-point grid (``p >= n`` required; default ``p = 2*n`` so the
        taper decreases over the whole index range).
    hamming / hanning / triangular
        ``e_k = 1/wbar_k - 1`` for the one-sided reference lag window
        ``wbar``, so ``lam = 1`` reproduces ``wbar`` exactly.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    k = np.arange(n, dtype=float)
    if name == "cauchy":
        return (2.0 * np.pi * k) ** 2
    if name == "inv_cosine":
        if p is None:
            p = 2 * n
        if p < n:
            raise ValueError("inv_cosine needs p >= n")
        return 1.0 - np.cos(2.0 * np.pi * k / p)
    if name == "hamming":
        ref = 0.54 + 0.46 * np.cos(np.pi * k / n)
    elif name == "hanning":
        ref = 0.5 * (1.0 + np.cos(np.pi * k / n))
    elif name == "triangular":
        ref = 1.0 - k / n
    else:
        raise ValueError(f"unknown window name {name!r}")
    return 1.0 / ref - 1.0


def normalize_penalty(evals) -> tuple[np.ndarray, float]:
    """Scale eigenvalues so the circulant inverse has unit diagonal.

    The diagonal of the inverse penalty matrix is ``mean(1/e_p)``; scaling
    every eigenvalue by ``c = mean(1/e_p)`` makes it one.  Returns the scaled
    sequence and ``c`` so callers can fold the scale into ``lam``.

    Raises
    ------
    NormalizationUndefinedError
        If any eigenvalue is zero (the penalty matrix is not invertible).
    """
    e = np.asarray(evals, dtype=float)
    if np.any(e < 0):
        raise ValueError("eigenvalues must be nonnegative")
    if np.any(e == 0):
        raise NormalizationUndefinedError(
            "penalty has a zero eigenvalue; its inverse does not exist"
        )
    scale = float(np.mean(1.0 / e))
    return e * scale, scale


def window_bank(n: int, p: int | None = None, names=WINDOW_NAMES) -> dict[str, np.ndarray]:
    """Named eigenvalue sequences for the selection procedure, keyed by name."""
    return {name: named_window_eigenvalues(name, n, p) for name in names}
