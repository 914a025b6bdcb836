import pytest
from hypothesis import given, strategies as st

from nwgame.bits import (
    all_bitstrings,
    bits_to_hex,
    bits_to_int,
    check_bits,
    hex_to_bits,
    int_to_bits,
    parity,
)


def test_int_bits_round_trip_small():
    assert int_to_bits(5, 4) == "0101"
    assert bits_to_int("0101") == 5
    assert int_to_bits(0, 0) == ""
    assert bits_to_int("") == 0


def test_index_zero_is_most_significant():
    assert int_to_bits(8, 4) == "1000"


def test_int_to_bits_rejects_overflow_and_negatives():
    with pytest.raises(ValueError):
        int_to_bits(16, 4)
    with pytest.raises(ValueError):
        int_to_bits(-1, 4)


@given(st.integers(min_value=0, max_value=12), st.data())
def test_round_trip_property(width, data):
    value = data.draw(st.integers(min_value=0, max_value=(1 << width) - 1))
    bits = int_to_bits(value, width)
    assert len(bits) == width
    assert bits_to_int(bits) == value
    assert hex_to_bits(bits_to_hex(bits), width) == bits


def test_hex_is_fixed_width():
    assert bits_to_hex("00001") == "01"
    assert bits_to_hex("0000") == "0"
    assert bits_to_hex("100000000") == "100"


def test_all_bitstrings_order_and_count():
    strings = list(all_bitstrings(3))
    assert strings == sorted(strings)
    assert len(strings) == 8
    assert strings[0] == "000" and strings[-1] == "111"
    assert list(all_bitstrings(0)) == [""]


def test_check_bits_rejects_bad_alphabet_and_width():
    assert check_bits("0101", 4) == "0101"
    with pytest.raises(ValueError):
        check_bits("0102", 4)
    with pytest.raises(ValueError):
        check_bits("010", 4)


def test_parity():
    assert parity("0110") == 0
    assert parity("0111") == 1
    assert parity("") == 0
