"""Sparse penalized PCA with an entropy-smoothed L1 penalty.

The heavy lifting lives in the compiled `_core` extension; this package
re-exports its public surface.
"""

from ._core import (
    DataError,
    NumericalError,
    PenalizedEigenpair,
    __version__,
    compute_grm,
    deflate,
    gradient,
    objective,
    rayleigh,
    silhouette_mean,
    smooth_abs,
    smooth_abs_grad,
    smooth_l1,
    solve_leading,
    solve_top_k,
    ss_between,
    ss_within,
    synth_mixture,
)

__all__ = [
    "DataError",
    "NumericalError",
    "PenalizedEigenpair",
    "__version__",
    "compute_grm",
    "deflate",
    "gradient",
    "objective",
    "rayleigh",
    "silhouette_mean",
    "smooth_abs",
    "smooth_abs_grad",
    "smooth_l1",
    "solve_leading",
    "solve_top_k",
    "ss_between",
    "ss_within",
    "synth_mixture",
]
