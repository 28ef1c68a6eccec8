import random

import pytest

from rfidsim.errors import FramingError
from rfidsim.singulation import TagId, decode_with_check, encode_with_check


def flip(codeword, i):
    bit = "1" if codeword[i] == "0" else "0"
    return codeword[:i] + bit + codeword[i + 1:]


def test_codeword_length_is_width_plus_eight():
    assert len(encode_with_check(TagId(9806, 16))) == 24
    assert len(encode_with_check(TagId(5, 4))) == 12
    assert len(encode_with_check(TagId(0, 1))) == 9


def test_roundtrip_exhaustive_width_4():
    for value in range(16):
        tag = TagId(value, 4)
        assert decode_with_check(encode_with_check(tag), 4) == tag


def test_roundtrip_random_width_16():
    rng = random.Random(1)
    for value in rng.sample(range(1 << 16), 200):
        tag = TagId(value, 16)
        assert decode_with_check(encode_with_check(tag), 16) == tag


def test_every_single_bit_flip_detected_exhaustively():
    # all 4-bit tags x all 12 codeword positions
    for value in range(16):
        codeword = encode_with_check(TagId(value, 4))
        for i in range(len(codeword)):
            assert decode_with_check(flip(codeword, i), 4) is None


def test_single_bit_flips_detected_width_16():
    rng = random.Random(2)
    for value in rng.sample(range(1 << 16), 50):
        codeword = encode_with_check(TagId(value, 16))
        for i in range(len(codeword)):
            assert decode_with_check(flip(codeword, i), 16) is None


def test_wrong_length_is_framing_error_not_check_failure():
    codeword = encode_with_check(TagId(9, 4))
    with pytest.raises(FramingError):
        decode_with_check(codeword, 5)
    with pytest.raises(FramingError):
        decode_with_check(codeword + "0", 4)
    with pytest.raises(FramingError):
        decode_with_check(codeword[:-1], 4)


def test_non_binary_codeword_rejected():
    with pytest.raises(ValueError):
        decode_with_check("0101x1010101", 4)
