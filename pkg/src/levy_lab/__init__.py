"""Sampling and densities for alpha-stable and classical tempered stable (CTS)
laws, plus Levy-process skeletons on uniform time grids."""

from . import cts, errors, params, rng, stable_density, stable_sampler, trajectory, validation
from .errors import (AlphaMismatch, EmptyInput, InsufficientTail, LevyLabError, OutOfDomain,
                     OutOfRange, QuadratureFailure, RejectionBudgetExceeded, Unsupported)
from .params import CtsTriplet, StableLevyTriplet, StableParams, levy_to_stable, stable_to_levy
from .rng import DEFAULT_SEED, RngStream

__version__ = "0.1.0"

__all__ = [
    "AlphaMismatch",
    "CtsTriplet",
    "DEFAULT_SEED",
    "EmptyInput",
    "InsufficientTail",
    "LevyLabError",
    "OutOfDomain",
    "OutOfRange",
    "QuadratureFailure",
    "RejectionBudgetExceeded",
    "RngStream",
    "StableLevyTriplet",
    "StableParams",
    "Unsupported",
    "cts",
    "errors",
    "levy_to_stable",
    "params",
    "rng",
    "stable_density",
    "stable_sampler",
    "stable_to_levy",
    "trajectory",
    "validation",
]
