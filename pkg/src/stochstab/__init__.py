"""Stochastic stability of planar linear systems with parametric white noise."""

from .criteria import StabilityReport, Verdict, analyze
from .errors import StochStabError
from .model import (
    Calculus,
    NoisePattern,
    StabilityNotion,
    SystemSpec,
    as_ito,
    classify_noise_pattern,
    dual_transform,
    routh_hurwitz,
    stratonovich_to_ito,
)

__version__ = "0.1.0"

__all__ = [
    "Calculus", "NoisePattern", "StabilityNotion", "StabilityReport", "StochStabError",
    "SystemSpec", "Verdict", "analyze", "as_ito", "classify_noise_pattern",
    "dual_transform", "routh_hurwitz", "stratonovich_to_ito",
]
