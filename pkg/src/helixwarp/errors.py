"""Exception types shared across the toolkit."""


class HelixwarpError(Exception):
    """Base class for all toolkit errors."""


class DomainError(HelixwarpError):
    """A point or parameter lies outside the valid evaluation domain."""


class AxisTouchError(HelixwarpError):
    """A curve reached the symmetry axis (r below the axis guard)."""


class UnilateralViolationError(HelixwarpError):
    """Axial velocity became non-positive where a z-parameterization needs v_z > 0."""


class StagnationError(HelixwarpError):
    """Speed vanished where an arc-length parameterization needs |u| > 0."""


class InvertibilityError(HelixwarpError):
    """A tabulated radial map lost strict monotonicity in the inlet radius."""


class ChartDomainError(HelixwarpError):
    """Moving-frame chart evaluated at or beyond its curvature singularity."""


class PreconditionError(HelixwarpError):
    """An operation's stated precondition does not hold for the given inputs."""


class ConfigError(HelixwarpError):
    """Run configuration is missing, malformed, or contains unknown keys."""


class EmptyWindowError(HelixwarpError):
    """An operation that needs a non-empty flux window was given an empty one."""
