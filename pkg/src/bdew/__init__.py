"""Bivariate discrete exponentiated Weibull distribution toolkit."""

from .bivariate import BdewParams, PairPoint
from .edw import EdwParams, make_special
from .fit import FitConfig, FitResult, ModelFamily, fit_mle, partition_sample
from .series import SeriesControl

__all__ = [
    "BdewParams",
    "EdwParams",
    "FitConfig",
    "FitResult",
    "ModelFamily",
    "PairPoint",
    "SeriesControl",
    "fit_mle",
    "make_special",
    "partition_sample",
]

__version__ = "0.1.0"
