"""
Error types for the two-phase quantum walk tools.

All of them are ValueError subclasses so callers that only care about
"bad input" can keep catching ValueError.
"""


class NormalizationError(ValueError):
    """Initial state does not satisfy |alpha|^2 + |beta|^2 = 1."""


class OutOfBranchError(ValueError):
    """Kernel evaluated on the oscillatory arc |sin theta| < 1/sqrt(2)."""


class PoleError(ValueError):
    """Generating function evaluated at one of its singular points."""


class BranchAbsentError(ValueError):
    """Requested singular branch does not exist for the given sigma."""


class ConfigError(ValueError):
    """Command-line or environment configuration could not be parsed."""
