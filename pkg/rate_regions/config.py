"""
Package-wide settings: enumeration guards, bundled paths and logging setup.
"""

import os
import logging

# Path to the base directory
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Bundled example networks
CONFIG_DIR = os.path.join(BASE_DIR, "configs")

# Largest K the bitmask encoding accepts
MAX_RECEIVERS = 16

# Largest ground family whose down-sets are enumerated
DOWN_SET_GUARD = 20

# Vertex enumeration limits
VERTEX_DIMENSION_GUARD = 8
VERTEX_ROW_GUARD = 64
VERTEX_COMBINATION_GUARD = 250_000

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"


def setup_logging(verbosity: int = 0):
    """
    Configure root logging for command-line use.

    Args:
        verbosity: 0 for warnings only, 1 for info, 2 or more for debug
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("rate_regions").setLevel(level)
