"""Distributions of random distances associated with unit rhombuses.

Four endpoint configurations are covered: both points in one rhombus,
points in two rhombuses sharing a side, and points in two rhombuses along
the long or the short diagonal of a 2x2 rhombic block.
"""

from .distributions import PiecewiseDistribution, cdf, pdf, quantile, support
from .geometry import AdjacencyCase, Point2, RhombusPose, lattice_poses, sample_point
from .moments import MomentsRecord, expectation, mean_within_closed_form, moments, raw_moment, variance
from .polyfit import FitResult, eval_fit, fit_pdf
from .sampling import SampleBatch, empirical_cdf, ks_statistic, sample_distances
from .validation import ValidationReport, check_cdf_pdf, check_normalization, check_recursion

__all__ = [
    "AdjacencyCase", "Point2", "RhombusPose", "lattice_poses", "sample_point",
    "PiecewiseDistribution", "pdf", "cdf", "quantile", "support",
    "MomentsRecord", "moments", "raw_moment", "variance", "mean_within_closed_form", "expectation",
    "SampleBatch", "sample_distances", "empirical_cdf", "ks_statistic",
    "ValidationReport", "check_recursion", "check_normalization", "check_cdf_pdf",
    "FitResult", "fit_pdf", "eval_fit",
]
