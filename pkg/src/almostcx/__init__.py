"""Exact exterior calculus on almost complex manifolds with invariant frames."""
from .scalar import Scalar, I, ONE, ZERO
from .algebra import (
    CoframeIndex, Form, VectorField, VectorForm, antihol, conjugate, hol, interior,
    project, wedge,
)
from .frame import FrameSpec, Part, d_component, exterior_d, nijenhuis, validate_frame

__all__ = [
    "Scalar", "I", "ONE", "ZERO", "CoframeIndex", "Form", "VectorField", "VectorForm",
    "antihol", "conjugate", "hol", "interior", "project", "wedge", "FrameSpec", "Part",
    "d_component", "exterior_d", "nijenhuis", "validate_frame",
]
