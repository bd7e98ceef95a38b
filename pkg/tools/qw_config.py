"""
Shared tolerances and logging setup for the quantum walk tools.

The default complex-equality tolerance can be overridden with the QW_TOL
environment variable; the CLI --tol flag overrides both.
"""

import logging
import math
import os
from typing import Optional

from qw_errors import ConfigError

DEFAULT_TOLERANCE = 1e-12
NORMALIZATION_TOLERANCE = 1e-9
RENORMALIZE_TOLERANCE = 1e-6
BRANCH_TOLERANCE = 1e-12

TOLERANCE_ENV_VAR = "QW_TOL"
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def resolve_tolerance(override: Optional[float] = None) -> float:
    """Pick the active tolerance: explicit override, then QW_TOL, then the default."""
    if override is not None:
        tol = float(override)
        source = "--tol"
    else:
        raw = os.getenv(TOLERANCE_ENV_VAR)
        if raw is None or raw.strip() == "":
            return DEFAULT_TOLERANCE
        try:
            tol = float(raw)
        except ValueError as exc:
            raise ConfigError(f"{TOLERANCE_ENV_VAR}={raw!r} is not a number") from exc
        source = TOLERANCE_ENV_VAR

    if not math.isfinite(tol) or tol <= 0:
        raise ConfigError(f"tolerance from {source} must be a positive finite number, got {tol}")
    logger.debug("Using tolerance %g from %s", tol, source)
    return tol


def configure_logging(level: str = "WARNING") -> None:
    """Configure root logging once for a CLI run."""
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        raise ConfigError(f"unknown log level: {level}")
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
