"""
Configuration settings for the tree cover-time estimator.
Numeric defaults and resource caps, overridable through a .env file or TREECOVER_* variables.
"""
import logging
import os
from fractions import Fraction
from pathlib import Path

from dotenv import load_dotenv

# Base directory
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / ".env")


def _env(name, default, cast=str):
    """Read TREECOVER_<name> from the environment, falling back to the default."""
    raw = os.getenv(f"TREECOVER_{name}")
    if raw is None or raw.strip() == "":
        return default
    return cast(raw.strip())


# Results paths
RESULTS_DIR = BASE_DIR / "results"
VALIDATION_REPORT = RESULTS_DIR / "validation_report.json"
VALIDATION_TABLE = RESULTS_DIR / "validation_table.csv"

# Truncation parameters
DEFAULT_EPSILON = _env("DEFAULT_EPSILON", Fraction(1, 1000), Fraction)
TAIL_BLOCK_FACTOR = _env("TAIL_BLOCK_FACTOR", 4, int)  # block = factor * size^2
MIN_BLOCKS = 3  # smallest block count with delta < 1/2
MAX_TRUNCATION_N = _env("MAX_TRUNCATION_N", 2 ** 22, int)

# Arithmetic backends
RATIONAL_WORK_LIMIT = _env("RATIONAL_WORK_LIMIT", 2 * 10 ** 6, int)  # nodes * N^2
VECTOR_BLOCK_CELLS = _env("VECTOR_BLOCK_CELLS", 2 ** 22, int)
ROUNDING_SLACK_FACTOR = 64
DEFAULT_PRECISION_BITS = _env("PRECISION_BITS", 96, int)
DECIMAL_DIGITS = _env("DECIMAL_DIGITS", 24, int)
BACKENDS = ("auto", "rational", "float", "numpy")

# Weighted chains
SUBDIVISION_SCALE_CAP = _env("SUBDIVISION_SCALE_CAP", 10 ** 6, int)
STEP_UNITS = ("chain", "subdivided")

# Exact solvers
EXACT_STATE_CAP = _env("EXACT_STATE_CAP", 12, int)  # vertices
HITTING_ORACLE_CAP = _env("HITTING_ORACLE_CAP", 10, int)

# Monte-Carlo
MC_BLOCK_SIZE = _env("MC_BLOCK_SIZE", 4096, int)
MC_DEFAULT_SAMPLES = _env("MC_SAMPLES", 100_000, int)
MC_DEFAULT_SEED = _env("MC_SEED", 42, int)
MC_Z_99 = 2.5758293035489004

# Concurrency
DEFAULT_JOBS = _env("JOBS", 1, int)

# Estimator modes
MODES = ("cover-return", "cover", "subset", "weighted")

# Logging
LOG_LEVEL = _env("LOG_LEVEL", "WARNING")
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(level=None):
    """
    Install a single stderr handler on the package loggers.

    Args:
        level: Level name or number; defaults to LOG_LEVEL
    """
    root = logging.getLogger("src")
    level = LOG_LEVEL if level is None else level
    root.setLevel(level.upper() if isinstance(level, str) else level)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    return root
