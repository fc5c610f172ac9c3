"""Restricted-orientation kernels of simple polygons under rotation."""
from .errors import (
    DisconnectedKernel,
    GenerationFailed,
    HullsIntersect,
    InvalidPolygon,
    NotOrthogonal,
    PointOutside,
    RotoKernelError,
    TiedExtremities,
)
from .geom_core import SimplePolygon
from .ortho import kernel_at_theta, optimize
from .rotation_intervals import nonempty_intervals
from .steady_kernel import kernel_at

__version__ = "0.1.0"

__all__ = [
    "DisconnectedKernel",
    "GenerationFailed",
    "HullsIntersect",
    "InvalidPolygon",
    "NotOrthogonal",
    "PointOutside",
    "RotoKernelError",
    "SimplePolygon",
    "TiedExtremities",
    "kernel_at",
    "kernel_at_theta",
    "nonempty_intervals",
    "optimize",
]
