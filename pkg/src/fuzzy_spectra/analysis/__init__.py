"""Theorem checks, sweeps and reports built on the operator modules."""

from .density import DensityMetrics, SpectralMap, build_spectral_map, density_metrics
from .localization import (
    LocalizedState,
    dispersion,
    madore_comparison,
    madore_operators,
    most_localized,
    rotate_operators,
)
from .report import K_RULES, KRule, VerificationReport, explicit_rule, get_k_rule
from .spectra import (
    circle_spectrum,
    interlacing_check,
    madore_spectrum,
    near_toeplitz_spectrum,
    norm_chain,
    parity_check,
    sphere_block_spectrum,
    sphere_spectrum,
    toeplitz_reference,
    union_residual,
)
from .suite import CHECKS, CheckOptions, run_all, run_check
from .theorems import top_eig_monotonicity_circle, top_eig_monotonicity_sphere

__all__ = [
    "CHECKS",
    "CheckOptions",
    "DensityMetrics",
    "KRule",
    "K_RULES",
    "LocalizedState",
    "SpectralMap",
    "VerificationReport",
    "build_spectral_map",
    "circle_spectrum",
    "density_metrics",
    "dispersion",
    "explicit_rule",
    "get_k_rule",
    "interlacing_check",
    "madore_comparison",
    "madore_operators",
    "madore_spectrum",
    "most_localized",
    "near_toeplitz_spectrum",
    "norm_chain",
    "parity_check",
    "rotate_operators",
    "run_all",
    "run_check",
    "sphere_block_spectrum",
    "sphere_spectrum",
    "toeplitz_reference",
    "top_eig_monotonicity_circle",
    "top_eig_monotonicity_sphere",
    "union_residual",
]
