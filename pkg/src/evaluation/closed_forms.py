"""
Closed-Form References
Known exact cover times for paths started at an endpoint and stars started at the center.
"""
import sys
from fractions import Fraction
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from src.exceptions import ConfigurationError

FAMILIES = {"path": "endpoint", "star": "center"}
MEASURES = ("cover-return", "cover")


def harmonic(k):
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def closed_form_reference(family, n, start_role=None, measure="cover-return"):
    """
    Exact reference value.

    path from an endpoint: 2(n-1)^2 with return, (n-1)^2 without;
    star from the center: 2(n-1) H_(n-1) with return, one less without.

    Args:
        family: "path" or "star"
        n: Vertex count (n >= 2)
        start_role: "endpoint" for paths, "center" for stars
        measure: "cover-return" or "cover"
    """
    if family not in FAMILIES:
        raise ConfigurationError(f"unsupported family {family!r}")
    role = FAMILIES[family] if start_role is None else start_role
    if role != FAMILIES[family]:
        raise ConfigurationError(f"unsupported start role {role!r} for a {family}")
    if measure not in MEASURES:
        raise ConfigurationError(f"unsupported measure {measure!r}")
    if n < 2:
        raise ConfigurationError(f"closed forms need n >= 2, got {n}")
    if family == "path":
        value = Fraction(2 * (n - 1) ** 2)
        return value if measure == "cover-return" else value / 2
    value = 2 * (n - 1) * harmonic(n - 1)
    return value if measure == "cover-return" else value - 1
