"""
Exception types raised by the rate_regions package.
"""


class RateRegionError(Exception):
    """Base class for every error raised by this package."""


class LatticeError(RateRegionError, ValueError):
    """Invalid receiver set or set family."""


class MessageSpecError(RateRegionError, ValueError):
    """Invalid message specification or message set expansion."""


class AssignmentError(RateRegionError, ValueError):
    """Invalid auxiliary component assignment."""


class UnassignedAuxiliaryError(AssignmentError):
    """An atom mentions an auxiliary index the assignment does not cover."""


class ConfigError(RateRegionError, ValueError):
    """Malformed network configuration."""


class PolyhedronError(RateRegionError, ValueError):
    """Inconsistent polyhedron input (dimensions, variables, formats)."""


class GuardExceededError(RateRegionError):
    """An enumeration would exceed its configured size guard."""


class UnboundedPolyhedronError(RateRegionError):
    """A bounded polyhedron was required but the input is unbounded."""
