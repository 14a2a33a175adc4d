"""
Report Serialization
Exact decimal strings for rationals, JSON and aligned text output.
"""
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import DECIMAL_DIGITS

REPORT_KEYS = ("mode", "n", "start", "estimate", "lower", "upper", "trunc_n",
               "delta_apriori", "delta_empirical", "backend", "wallclock_ms",
               "exact", "certified", "estimate_fraction", "lower_fraction", "upper_fraction")


def fraction_to_decimal(value, digits=DECIMAL_DIGITS, rounding="nearest"):
    """
    Decimal string of a rational with at most `digits` fractional digits.

    Args:
        value: Fraction or int
        digits: Fractional digits kept before trailing zeros are stripped
        rounding: "down" (toward -inf), "up" (toward +inf) or "nearest"
    """
    scaled = Fraction(value) * 10 ** digits
    if rounding == "down":
        q = math.floor(scaled)
    elif rounding == "up":
        q = math.ceil(scaled)
    else:
        q = math.floor(scaled + Fraction(1, 2))
    sign = "-" if q < 0 else ""
    whole, part = divmod(abs(q), 10 ** digits)
    tail = str(part).rjust(digits, "0").rstrip("0") if digits else ""
    return f"{sign}{whole}.{tail}" if tail else f"{sign}{whole}"


def format_number(value, backend=None, rounding="nearest", digits=DECIMAL_DIGITS):
    """Decimal string for a backend value (Fraction or mpmath number)."""
    if value is None:
        return None
    if isinstance(value, (Fraction, int)):
        return fraction_to_decimal(value, digits, rounding)
    if backend is not None and hasattr(backend, "nstr"):
        return backend.nstr(value, digits)
    return repr(float(value))


def exact_fraction(value):
    """"p/q" (or an integer) for rationals, None for floating values."""
    if isinstance(value, (Fraction, int)):
        return str(Fraction(value))
    return None


def report_payload(report, backend=None, omit_timing=False):
    """
    Ordered dict of the JSON report fields.

    Rational lower/upper endpoints are rounded outward so the printed
    interval still contains the exact one. The *_fraction fields carry the
    exact "p/q" values on exact backends and are null otherwise.
    """
    wallclock = None if omit_timing or report.wallclock_ms is None else round(report.wallclock_ms, 3)
    return {
        "mode": report.mode,
        "n": report.n,
        "start": report.start,
        "estimate": format_number(report.estimate, backend),
        "lower": format_number(report.lower, backend, rounding="down"),
        "upper": format_number(report.upper, backend, rounding="up"),
        "trunc_n": report.trunc_n,
        "delta_apriori": format_number(report.delta_apriori, backend),
        "delta_empirical": format_number(report.delta_empirical, backend),
        "backend": report.backend,
        "wallclock_ms": wallclock,
        "exact": report.exact,
        "certified": report.certified,
        "estimate_fraction": exact_fraction(report.estimate),
        "lower_fraction": exact_fraction(report.lower),
        "upper_fraction": exact_fraction(report.upper),
    }


def dump_json(payload):
    return json.dumps(payload, indent=2, ensure_ascii=False)


def dump_text(payload):
    width = max((len(k) for k in payload), default=0)
    lines = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            inner = max((len(str(k)) for k in value), default=0)
            lines.extend(f"  {str(k):<{inner}s}  {v}" for k, v in value.items())
        else:
            lines.append(f"{key:<{width}s}  {'null' if value is None else value}")
    return "\n".join(lines)


def render(payload, output="json"):
    return dump_json(payload) if output == "json" else dump_text(payload)
