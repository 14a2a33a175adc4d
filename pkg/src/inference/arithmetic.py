"""
Arithmetic Backends
Exact rationals, mpmath floating point with a fixed bit precision, or
vectorized numpy float64 with log-space kernel rows.
"""
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from mpmath.ctx_mp import MPContext

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DEFAULT_PRECISION_BITS, RATIONAL_WORK_LIMIT
from src.exceptions import ConfigurationError


class RationalArithmetic:
    """Exact arithmetic over fractions.Fraction."""

    name = "rational"
    exact = True
    vectorized = False
    unit_roundoff = 0

    def convert(self, value):
        return Fraction(value)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)


class FloatArithmetic:
    """
    Floating point with a private mpmath context, so the precision of one
    backend never leaks into another running in a different thread.
    """

    name = "float"
    exact = False
    vectorized = False

    def __init__(self, bits=DEFAULT_PRECISION_BITS):
        if bits < 16:
            raise ConfigurationError(f"precision must be at least 16 bits, got {bits}")
        self.bits = bits
        self.ctx = MPContext()
        self.ctx.prec = bits
        self.unit_roundoff = Fraction(1, 2 ** bits)

    def convert(self, value):
        if isinstance(value, Fraction):
            return self.ctx.mpf(value.numerator) / self.ctx.mpf(value.denominator)
        return self.ctx.mpf(value)

    @property
    def zero(self):
        return self.ctx.mpf(0)

    @property
    def one(self):
        return self.ctx.mpf(1)

    def nstr(self, value, digits):
        return self.ctx.nstr(value, digits, strip_zeros=True)


class NumpyArithmetic:
    """
    IEEE double precision. Profiles hold plain Python floats; the profile and
    last-vertex propagation run as numpy array code (see vectorized.py).
    """

    name = "numpy"
    exact = False
    vectorized = True
    unit_roundoff = Fraction(1, 2 ** 53)

    def convert(self, value):
        return float(value)

    @property
    def zero(self):
        return 0.0

    @property
    def one(self):
        return 1.0

    def nstr(self, value, digits):
        return np.format_float_positional(float(value), precision=min(digits, 17),
                                          unique=True, trim="-")


def make_backend(name, work=0, bits=DEFAULT_PRECISION_BITS):
    """
    Resolve a backend name.

    Args:
        name: "rational", "float", "numpy" or "auto"
        work: Propagation work (nodes * N^2) used by "auto"
        bits: Precision of the mpmath float backend

    Returns:
        Backend instance; "auto" is rational up to RATIONAL_WORK_LIMIT, numpy above
    """
    if name == "auto":
        name = "rational" if work <= RATIONAL_WORK_LIMIT else "numpy"
    if name == "rational":
        return RationalArithmetic()
    if name == "float":
        return FloatArithmetic(bits)
    if name == "numpy":
        return NumpyArithmetic()
    raise ConfigurationError(f"unknown backend {name!r}")
