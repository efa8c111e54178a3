"""Regularized least-squares periodograms with likelihood-based selection.

Spectrum estimates arise as closed-form minimizers of quadratic data-fit +
penalty criteria: separable penalties give the usual (zero-padded)
periodogram, smoothing penalties give windowed transforms, and the Gaussian
reading of the same criteria supplies a marginal likelihood for selecting
the regularization weight and the window shape without supervision.
"""

from .estimator import (
    EstimationResult,
    power_spectrum,
    rls_oracle_df,
    usual_periodogram_cf,
    usual_periodogram_df,
    windowed_periodogram_cf,
    windowed_periodogram_df,
)
from .fourier import (
    SpectrumCF,
    SpectrumDF,
    TimeSeries,
    adjoint_synthesis_cf,
    adjoint_synthesis_df,
    dft,
    idft,
    synthesis_df,
    uniform_grid,
    zero_pad,
)
from .likelihood import (
    AlphaGridFit,
    DegenerateDataError,
    FitReport,
    Hyperparams,
    cll_full,
    concentrated_cll,
    fit_alpha_grid,
    fit_lambda,
    select_window,
    sigma_y_diag,
)
from .metrics import PowerSpectrumGrid, dist_isd, dist_l1, dist_l2, dist_sis
from .penalty import (
    NormalizationUndefinedError,
    PenaltySpec,
    Window,
    WINDOW_NAMES,
    circulant_eigenvalues,
    named_window_eigenvalues,
    normalize_penalty,
    sobolev_eigenvalues,
    window_bank,
    window_from_eigenvalues,
)
from .prior_process import (
    PriorModel,
    SobolevKernelParams,
    conditional_cov,
    increment_cov,
    kernel_closed,
    kernel_series,
    posterior_mean_oracle,
    posterior_window,
    sample_prior_df,
)
from .simulate import (
    ExperimentReport,
    SimConfig,
    gen_signal,
    run_experiment,
    sample_autocovariance,
    true_spectrum,
    window_selection_histogram,
)

__version__ = "0.1.0"
