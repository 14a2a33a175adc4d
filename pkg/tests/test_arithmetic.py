"""
Arithmetic backends and the automatic backend choice.
"""
from fractions import Fraction

import pytest

from src.exceptions import ConfigurationError
from src.inference.arithmetic import (
    FloatArithmetic, NumpyArithmetic, RationalArithmetic, make_backend,
)

INTERFACE = ("name", "exact", "vectorized", "unit_roundoff", "convert", "zero", "one")


@pytest.mark.parametrize("backend", [RationalArithmetic(), FloatArithmetic(64), NumpyArithmetic()])
def test_backends_share_one_interface(backend):
    public = {name for name in dir(backend) if not name.startswith("_")}
    assert set(INTERFACE) <= public
    assert public - set(INTERFACE) <= {"bits", "ctx", "nstr"}
    assert backend.one - backend.zero == 1
    assert float(backend.convert(Fraction(1, 4))) == 0.25


def test_numpy_values_are_plain_floats():
    backend = NumpyArithmetic()
    assert type(backend.convert(Fraction(1, 3))) is float
    assert backend.nstr(0.5, 24) == "0.5"
    assert backend.nstr(8.0, 24) == "8"
    assert backend.unit_roundoff == Fraction(1, 2 ** 53)


def test_auto_choice_follows_work():
    assert make_backend("auto", work=0).name == "rational"
    assert make_backend("auto", work=2 * 10 ** 6).name == "rational"
    assert make_backend("auto", work=2 * 10 ** 6 + 1).name == "numpy"
    assert make_backend("float", bits=80).bits == 80


def test_invalid_backends():
    with pytest.raises(ConfigurationError):
        make_backend("decimal")
    with pytest.raises(ConfigurationError):
        FloatArithmetic(8)
