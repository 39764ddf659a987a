"""Inequality indices of gamma mixtures and exact finite-sample biases of their estimators."""

from .bias import BiasReport, bias_report, brute_force_expectation, expected_value
from .errors import (CompositionLimitError, DomainError, IneqBiasError, MixingProportionError,
                     ParameterError, QuadratureError)
from .indices import IndexReport, index_report
from .mixture import MixtureParams, Sample, canonicalize
from .montecarlo import MCReport, run_mc
from .quadrature import QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "BiasReport",
    "CompositionLimitError",
    "DomainError",
    "IndexReport",
    "IneqBiasError",
    "MCReport",
    "MixingProportionError",
    "MixtureParams",
    "ParameterError",
    "QuadratureConfig",
    "QuadratureError",
    "Sample",
    "bias_report",
    "brute_force_expectation",
    "canonicalize",
    "expected_value",
    "index_report",
    "run_mc",
]
