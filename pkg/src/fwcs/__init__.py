"""Fox-Wright functions and the coherent states built on them."""

from .errors import (
    DivergenceError,
    DomainError,
    FWCSError,
    ParameterError,
    QuadratureError,
    SingularDeformationError,
    TruncationError,
    UnsupportedContourError,
)
from .foxwright import FWParams, convergence_class, fw_derivative, fw_eval, fw_eval_scaled
from .measure import measure_constant, measure_spec, unity_constant, weight_moment_closed
from .states import bg_coefficients, kp_coefficients, normalization, overlap, structure_constant
from .statistics import mandel_q
from .thermal import ThermalSpec, husimi_q, partition_function

__version__ = "0.1.0"

__all__ = [
    "FWCSError",
    "ParameterError",
    "DomainError",
    "DivergenceError",
    "TruncationError",
    "SingularDeformationError",
    "UnsupportedContourError",
    "QuadratureError",
    "FWParams",
    "convergence_class",
    "fw_eval",
    "fw_eval_scaled",
    "fw_derivative",
    "structure_constant",
    "normalization",
    "bg_coefficients",
    "kp_coefficients",
    "overlap",
    "measure_spec",
    "measure_constant",
    "unity_constant",
    "weight_moment_closed",
    "mandel_q",
    "ThermalSpec",
    "partition_function",
    "husimi_q",
]
