"""Interconversion of completely monotone relaxation moduli and Bernstein creep functions."""

from .duality import (
    creep_to_relaxation,
    rational_reciprocal,
    relaxation_to_creep,
    roundtrip_check,
)
from .models import (
    INF,
    CbfRep,
    CreepModel,
    LimitReport,
    RelaxationModel,
    StieltjesRep,
    bernstein_check,
    cm_check,
    eval_creep,
    eval_relaxation,
    laplace_creep,
    laplace_relaxation,
    limits_report,
)
from .numerics import (
    convolution_oracle,
    duality_residual,
    gaver_stehfest,
    numeric_dual,
    stress_response,
)
from .spectra import DiscreteSpectrum, moment_sum, normalize

__all__ = [
    "INF",
    "CbfRep",
    "CreepModel",
    "DiscreteSpectrum",
    "LimitReport",
    "RelaxationModel",
    "StieltjesRep",
    "bernstein_check",
    "cm_check",
    "convolution_oracle",
    "creep_to_relaxation",
    "duality_residual",
    "eval_creep",
    "eval_relaxation",
    "gaver_stehfest",
    "laplace_creep",
    "laplace_relaxation",
    "limits_report",
    "moment_sum",
    "normalize",
    "numeric_dual",
    "rational_reciprocal",
    "relaxation_to_creep",
    "roundtrip_check",
    "stress_response",
]
