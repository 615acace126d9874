"""Momenta on the circle with complex potentials and Hardy inequalities for complex magnetic fields."""

import os as _os

# MAGHARDEN_THREADS caps BLAS/OpenMP threads; effective only before numpy loads
if _os.environ.get("MAGHARDEN_THREADS"):
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["MAGHARDEN_THREADS"])

from .circle import CirclePotential
from .errors import (
    FluxConditionFailed,
    HypothesisViolated,
    MagHardenError,
    NotConverged,
    NotQuasiSelfAdjoint,
    ResolutionWarning,
    SupportExceedsR,
    TrivialField,
)
from .field2d import ComplexField2D

__version__ = "0.1.0"

__all__ = [
    "CirclePotential",
    "ComplexField2D",
    "FluxConditionFailed",
    "HypothesisViolated",
    "MagHardenError",
    "NotConverged",
    "NotQuasiSelfAdjoint",
    "ResolutionWarning",
    "SupportExceedsR",
    "TrivialField",
]
