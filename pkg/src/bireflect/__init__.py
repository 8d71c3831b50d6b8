"""Continuation of biharmonic functions across real-analytic curves by reflection."""

from .curves import Circle, ImplicitAlgebraic, LineY0, parse_curve, reflect_point
from .goursat import BiharmonicField
from .kernels import KernelSeries
from .quadrature import QuadratureSpec
from .reflection import (
    ContinuationResult,
    continue_circle_navier,
    continue_clamped_circle,
    continue_clamped_general,
    continue_general,
    continue_line,
    green_representation,
    khat,
)
from .testgen import BoundaryCase, closed_form_family, collocation_family

__version__ = "0.1.0"

__all__ = [
    "Circle", "ImplicitAlgebraic", "LineY0", "parse_curve", "reflect_point",
    "BiharmonicField", "KernelSeries", "QuadratureSpec",
    "ContinuationResult", "continue_circle_navier", "continue_clamped_circle", "continue_clamped_general",
    "continue_general", "continue_line", "green_representation", "khat",
    "BoundaryCase", "closed_form_family", "collocation_family",
]
