"""Exception hierarchy shared by every nsbem module."""


class NsbemError(Exception):
    """Base class for all errors raised by nsbem."""


class MeshParseError(NsbemError):
    """A mesh file could not be parsed."""


class MeshTopologyError(NsbemError):
    """A mesh is open, non-orientable or otherwise not a valid closed surface."""


class UnsupportedElementError(NsbemError):
    """A mesh file contains an element type other than the 6-node triangle."""


class GeometryError(NsbemError):
    """Generator parameters describe an invalid or self-intersecting shape."""


class DegenerateFrameError(NsbemError):
    """A node frame cannot be formed (adjacent normals cancel or rank loss)."""


class QuadratureError(NsbemError):
    """Unsupported rule request or adaptive subdivision beyond the depth limit."""


class KernelDomainError(NsbemError, ValueError):
    """A Green's function was evaluated at coincident points."""


class SingularMatrixError(NsbemError):
    """A dense system has a pivot below the singularity threshold."""


class PointOnSurfaceError(NsbemError, ValueError):
    """A field-evaluation point lies on the boundary surface."""


class ConfigError(NsbemError):
    """A run configuration failed validation."""


class SeriesConvergenceError(NsbemError):
    """An analytical series did not converge within its term budget."""
