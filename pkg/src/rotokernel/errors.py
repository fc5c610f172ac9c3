class RotoKernelError(Exception):
    """Base class for all errors raised by the package."""


class InvalidPolygon(RotoKernelError, ValueError):
    pass


class DegenerateIntersection(RotoKernelError, ValueError):
    pass


class HullsIntersect(RotoKernelError):
    pass


class DisconnectedKernel(RotoKernelError):
    """A clip that should yield one connected kernel yielded several pieces."""

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components or []


class NotOrthogonal(RotoKernelError, ValueError):
    pass


class TiedExtremities(RotoKernelError):
    """Two innermost extremities of one kind share a coordinate."""

    def __init__(self, message, label=None, edges=None):
        super().__init__(message)
        self.label = label
        self.edges = edges


class PointOutside(RotoKernelError, ValueError):
    pass


class GenerationFailed(RotoKernelError):
    pass
