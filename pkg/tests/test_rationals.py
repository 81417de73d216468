from fractions import Fraction

import pytest

from measurecycles import decimal_string, format_rational, parse_rational


def test_parse_accepts_ints_and_fraction_strings():
    assert parse_rational(3) == Fraction(3)
    assert parse_rational("3") == Fraction(3)
    assert parse_rational("-7/2") == Fraction(-7, 2)
    assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)


def test_parse_rejects_floats_and_garbage():
    with pytest.raises(ValueError):
        parse_rational(0.5)
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ValueError):
        parse_rational(True)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("")


def test_format_roundtrip():
    for text in ["0", "5", "-3", "1/2", "-22/7"]:
        assert format_rational(parse_rational(text)) == text


def test_decimal_string_twenty_significant_digits():
    assert decimal_string(Fraction(1, 2)) == "0.5"
    assert decimal_string(Fraction(1, 3)) == "0.33333333333333333333"
    assert decimal_string(Fraction(2, 3)) == "0.66666666666666666667"
    assert decimal_string(Fraction(0)) == "0"


def test_decimal_string_round_half_even():
    # 20 significant digits: the 21st digit decides, ties go to even
    value = Fraction(100000000000000000005, 10**21)  # 0.100000000000000000005
    assert decimal_string(value) == "0.10000000000000000000"
    value = Fraction(100000000000000000015, 10**21)
    assert decimal_string(value) == "0.10000000000000000002"
