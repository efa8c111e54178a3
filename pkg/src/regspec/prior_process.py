"""The Gaussian prior over spectra: kernel, conditioning, increments, sampling.

The prior is a zero-mean circular Gaussian process on the frequency circle
whose correlation kernel has Fourier coefficients ``1 / (a0 + 4 pi^2 a1 p^2)``
(zero- plus first-derivative penalization).  The kernel has the closed form

    gamma(nu) = cosh(alpha * (|nu| - 1/2)) / (2 * alpha' * sinh(alpha / 2)),

with ``alpha = sqrt(a0/a1)`` and ``alpha' = sqrt(a0*a1)``.  Conditioning on
the seam value turns the process into a Markov chain; letting ``a0 -> 0``
turns centered values into a complex Brownian bridge.

Factor conventions used throughout: the process is complex circular, so the
variance of a complex increment is twice the variance of each of its real
and imaginary parts.  All closed forms here are for the complex quantities;
halve them for per-component statements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import SpectrumCF, SpectrumDF, as_frequency_grid, as_samples, dft

__all__ = [
    "SobolevKernelParams",
    "PriorModel",
    "kernel_series",
    "kernel_closed",
    "series_terms_for_tolerance",
    "conditional_cov",
    "increment_cov",
    "posterior_window",
    "posterior_mean_oracle",
    "sample_prior_df",
]

# Agreement demanded between the two conditional-covariance formulas,
# relative to the kernel scale gamma(0).
CONDITIONAL_AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class SobolevKernelParams:
    """Weights of the zero- and first-derivative penalty, both > 0."""

    alpha0: float
    alpha1: float

    def __post_init__(self):
        if not (self.alpha0 > 0 and self.alpha1 > 0):
            raise ValueError("both derivative weights must be strictly positive")

    @property
    def alpha(self) -> float:
        return float(np.sqrt(self.alpha0 / self.alpha1))

    @property
    def alpha_prime(self) -> float:
        return float(np.sqrt(self.alpha0 * self.alpha1))

    def fourier_coefficient(self, p) -> np.ndarray:
        """Kernel Fourier coefficients ``1 / (a0 + 4 pi^2 a1 p^2)``."""
        p = np.asarray(p, dtype=float)
        return 1.0 / (self.alpha0 + 4.0 * np.pi**2 * self.alpha1 * p**2)


def kernel_series(nu, params: SobolevKernelParams, terms: int):
    """Symmetric partial sum of the kernel's Fourier series.

    Sums ``exp(-2j*pi*nu*p) / (a0 + 4 pi^2 a1 p^2)`` over ``|p| <= terms``;
    real by symmetry, so the cosine form is evaluated.  The truncation error
    is bounded by ``1 / (2 pi^2 a1 terms)``; see
    :func:`series_terms_for_tolerance`.
    """
    if terms < 1:
        raise ValueError("need at least one term")
    nu_arr = np.atleast_1d(np.asarray(nu, dtype=float))
    out = np.full(nu_arr.shape, 1.0 / params.alpha0)
    # Chunked so large term counts do not materialize a huge outer product.
    chunk = max(1, int(2**22 / max(nu_arr.size, 1)))
    for start in range(1, terms + 1, chunk):
        p = np.arange(start, min(start + chunk, terms + 1), dtype=float)
        coeff = params.fourier_coefficient(p)
        out += 2.0 * np.cos(2.0 * np.pi * np.outer(nu_arr, p)) @ coeff
    return out if np.ndim(nu) else float(out[0])


def series_terms_for_tolerance(params: SobolevKernelParams, tol: float) -> int:
    """Term count making the series tail bound ``1/(2 pi^2 a1 T)`` <= tol."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return int(np.ceil(1.0 / (2.0 * np.pi**2 * params.alpha1 * tol)))


def kernel_closed(nu, params: SobolevKernelParams):
    """Closed form of the correlation kernel on ``nu`` in [-1, 1].

    Evaluated in the overflow-safe scaled form
    ``(exp(x - a/2) + exp(-x - a/2)) / (2 a' (1 - exp(-a)))`` with
    ``x = a (|nu| - 1/2)``, valid for every ``alpha > 0`` (both exponents are
    nonpositive and ``expm1`` keeps the denominator accurate for small
    ``alpha``).
    """
    nu_arr = np.asarray(nu, dtype=float)
    if np.any(np.abs(nu_arr) > 1.0 + 1e-12):
        raise ValueError("kernel argument must lie in [-1, 1]")
    a = params.alpha
    x = a * (np.abs(nu_arr) - 0.5)
    denom = 2.0 * params.alpha_prime * (-np.expm1(-a))
    out = (np.exp(x - a / 2.0) + np.exp(-x - a / 2.0)) / denom
    return out if np.ndim(nu) else float(out)


def conditional_cov(nu: float, nu_prime: float, params: SobolevKernelParams) -> tuple[float, float]:
    """Covariance of the seam-conditioned process, by both formulas.

    Requires ``0 <= nu_prime <= nu <= 1``.  Returns the pair

    * ``gamma(nu - nu') - gamma(nu) * gamma(nu') / gamma(0)`` (direct
      Gaussian conditioning), and
    * ``sinh(a nu') * sinh(a (1 - nu)) / (a' * sinh a)`` (the product form
      exhibiting the Markov factorization),

    and raises if they disagree beyond ``CONDITIONAL_AGREEMENT_TOL`` relative
    to the kernel scale.
    """
    if not (0.0 <= nu_prime <= nu <= 1.0):
        raise ValueError("need 0 <= nu_prime <= nu <= 1")
    g0 = kernel_closed(0.0, params)
    direct = kernel_closed(nu - nu_prime, params) - kernel_closed(nu, params) * kernel_closed(
        nu_prime, params
    ) / g0
    a = params.alpha
    # sinh(a nu') sinh(a (1 - nu)) / (a' sinh a), scaled by exp(-a) top and
    # bottom so large alpha cannot overflow.
    def scaled_sinh(t: float) -> float:  # sinh(a t) * exp(-a t)
        return -0.5 * np.expm1(-2.0 * a * t)

    product = (
        scaled_sinh(nu_prime)
        * scaled_sinh(1.0 - nu)
        * np.exp(a * (nu_prime + (1.0 - nu) - 1.0))
        / (params.alpha_prime * scaled_sinh(1.0))
    )
    tol = CONDITIONAL_AGREEMENT_TOL * max(1.0, g0)
    if abs(direct - product) > tol:
        raise AssertionError(
            f"conditional covariance formulas disagree: {direct!r} vs {product!r}"
        )
    return float(direct), float(product)


def increment_cov(
    nu1: float,
    nu2: float,
    nu1p: float,
    nu2p: float,
    params: SobolevKernelParams,
    mode: str = "general",
) -> np.ndarray:
    """Covariance of the two complex increments over disjoint ordered intervals.

    ``mode="general"`` evaluates, from the kernel, the exact covariance of
    ``[a(nu2) - a(nu1), a(nu2') - a(nu1')]``:

    * diagonal ``r = 2 * (gamma(0) - gamma(tau))`` with ``tau`` the interval
      length (complex variance; each real component carries half),
    * off-diagonal ``rho = gamma(nu2 - nu2') + gamma(nu1 - nu1')
      - gamma(nu1 - nu2') - gamma(nu2 - nu1')``.

    ``mode="limit"`` returns the printed small-``alpha0`` matrix
    ``[[tau (1-tau), 2 tau tau'], [2 tau tau', tau' (1-tau')]] / (2 a1)``.
    Note the general formula's actual ``alpha0 -> 0`` limit is ``tau (1-tau)
    / a1`` on the diagonal (twice the printed value, i.e. the complex rather
    than per-component variance) and ``-tau tau' / a1`` off it (negative, as
    for any bridge over disjoint intervals).
    """
    if not (0.0 <= nu1 < nu2 < nu1p < nu2p <= 1.0):
        raise ValueError("need 0 <= nu1 < nu2 < nu1' < nu2' <= 1")
    tau = nu2 - nu1
    tau_p = nu2p - nu1p
    if mode == "limit":
        off = 2.0 * tau * tau_p / (2.0 * params.alpha1)
        return np.array(
            [
                [tau * (1.0 - tau) / (2.0 * params.alpha1), off],
                [off, tau_p * (1.0 - tau_p) / (2.0 * params.alpha1)],
            ]
        )
    if mode != "general":
        raise ValueError(f"unknown mode {mode!r}")

    def g(t: float) -> float:
        return kernel_closed(t, params)

    r1 = 2.0 * (g(0.0) - g(tau))
    r2 = 2.0 * (g(0.0) - g(tau_p))
    rho = g(nu2 - nu2p) + g(nu1 - nu1p) - g(nu1 - nu2p) - g(nu2 - nu1p)
    return np.array([[r1, rho], [rho, r2]])


class PriorModel:
    """Prior correlation Fourier coefficients plus the two power levels.

    ``coeffs[p]`` holds the (unnormalized) kernel coefficients
    ``gamma_hat(p)`` for ``p = 0 .. len(coeffs)-1``; ``r_a`` is the prior
    power, ``r_b`` the noise power, and ``lam = r_b / r_a``.  The posterior
    weight of data sample ``n`` is ``coeffs[n] / (coeffs[n] + r_b)``, i.e.
    ``1 / (1 + lam / c_hat(n))`` for the normalized coefficients
    ``c_hat = coeffs / r_a``.
    """

    def __init__(self, coeffs, r_a: float, r_b: float):
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("need a non-empty coefficient sequence")
        if np.any(c <= 0) or not np.all(np.isfinite(c)):
            raise ValueError("kernel Fourier coefficients must be positive and finite")
        if not (r_a > 0 and r_b > 0):
            raise ValueError("both power levels must be strictly positive")
        self.coeffs = c
        self.r_a = float(r_a)
        self.r_b = float(r_b)

    @property
    def lam(self) -> float:
        return self.r_b / self.r_a

    @classmethod
    def from_sobolev(
        cls, params: SobolevKernelParams, r_a: float, r_b: float, n_coeffs: int
    ) -> "PriorModel":
        """Prior whose normalized coefficients are the inverse penalty eigenvalues."""
        coeffs = r_a * params.fourier_coefficient(np.arange(n_coeffs))
        return cls(coeffs, r_a, r_b)


def posterior_window(prior: PriorModel, n: int) -> np.ndarray:
    """Posterior-mean data weights ``omega_k = coeffs[k] / (coeffs[k] + r_b)``."""
    if prior.coeffs.size < n:
        raise ValueError(f"prior holds {prior.coeffs.size} coefficients, need {n}")
    c = prior.coeffs[:n]
    return c / (c + prior.r_b)


def posterior_mean_oracle(y, prior: PriorModel, grid) -> SpectrumCF:
    """Posterior mean by dense Gaussian conditioning (verification path).

    Builds the cross-covariance ``R_{a0,y}[n] = gamma_hat(n) exp(-2j pi nu0 n)``
    and the data covariance ``R_y = diag(gamma_hat(n) + r_b)`` explicitly as
    a full matrix, then evaluates ``R_{a0,y} R_y^{-1} y`` per grid point.
    Intended for desk-scale checks (N <= 64) against the windowed-transform
    closed form.
    """
    v = as_samples(y)
    n = v.size
    if n > 64:
        raise ValueError("dense conditioning oracle is restricted to N <= 64")
    if prior.coeffs.size < n:
        raise ValueError(f"prior holds {prior.coeffs.size} coefficients, need {n}")
    g = as_frequency_grid(grid)
    r_y = np.diag(prior.coeffs[:n] + prior.r_b).astype(complex)
    solved = np.linalg.solve(r_y, v)
    cross = prior.coeffs[:n] * np.exp(-2j * np.pi * np.outer(g, np.arange(n)))
    return SpectrumCF(g, cross @ solved)


def sample_prior_df(evals, r_a: float, p: int, seed) -> SpectrumDF:
    """Draw discrete amplitudes from the circulant Gaussian prior.

    The covariance is ``r_a * F diag(1/e) F^H``; the draw is ``dft(z)`` with
    independent ``z_p`` circular Gaussian of variance ``r_a / e_p`` (real and
    imaginary parts of variance half that each, drawn in index order from a
    ``numpy`` generator seeded with ``seed``).
    """
    e = np.asarray(evals, dtype=float)
    if e.size < p:
        raise ValueError(f"need {p} eigenvalues, got {e.size}")
    if np.any(e[:p] <= 0):
        raise ValueError("improper prior: zero eigenvalue cannot be sampled")
    if r_a <= 0:
        raise ValueError("prior power must be strictly positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((p, 2))
    z = (g[:, 0] + 1j * g[:, 1]) * np.sqrt(r_a / (2.0 * e[:p]))
    return SpectrumDF(dft(z))
