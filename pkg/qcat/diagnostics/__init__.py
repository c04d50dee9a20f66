from qcat.diagnostics.equidist import (
    DiagonalSplit,
    EquidistReport,
    ModeEntry,
    diagonal_split,
    equidist_report,
    matrix_element,
    mode_bound,
    mode_coefficients,
)
from qcat.diagnostics.fitting import RateFit, RateModel, rate_fit
from qcat.diagnostics.wigner import (
    ScarContrast,
    WignerGrid,
    default_cutoff,
    default_smoothing,
    scar_contrast,
    smoothed_wigner,
)

__all__ = (
    "DiagonalSplit",
    "EquidistReport",
    "ModeEntry",
    "RateFit",
    "RateModel",
    "ScarContrast",
    "WignerGrid",
    "default_cutoff",
    "default_smoothing",
    "diagonal_split",
    "equidist_report",
    "matrix_element",
    "mode_bound",
    "mode_coefficients",
    "rate_fit",
    "scar_contrast",
    "smoothed_wigner",
)
