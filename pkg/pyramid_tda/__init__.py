"""Levelsets, extended and zigzag persistence over GF(2), with the pyramid and strip correspondences."""
from .complex import SimplicialComplex, VertexFunction, build_complex
from .errors import TDAError
from .persistence import EPInterval, EPType, Flavor, GradedBarcode, Interval

__version__ = "0.1.0"

__all__ = [
    "EPInterval",
    "EPType",
    "Flavor",
    "GradedBarcode",
    "Interval",
    "SimplicialComplex",
    "TDAError",
    "VertexFunction",
    "build_complex",
]
