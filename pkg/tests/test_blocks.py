import numpy as np
import pytest
from hypothesis import given, strategies as st

from kexshard.core.blocks import (
    BlockSpec,
    as_rows,
    block_ints,
    blocks,
    counter_add,
    counter_rows,
    fold_xor,
    int_to_bytes,
    bytes_to_int,
    rows_to_u64,
    u64_to_rows,
    xor_blocks,
)
from kexshard.errors import ContractViolation, CounterOverflow


@pytest.mark.parametrize("a,b,out", [(0x2F, 0x84, 0xAB), (0x5C, 0x5C, 0x00), (0x5C, 0x00, 0x5C)])
def test_xor_examples(a, b, out):
    assert xor_blocks(a, b, 8) == out


@pytest.mark.parametrize("iv,i,out", [(0x20, 1, 0x21), (0x20, 0, 0x20), (0xFF, 1, 0xFE)])
def test_counter_add_uses_xor(iv, i, out):
    assert counter_add(iv, i, 8) == out


def test_counter_add_integer_mode():
    assert counter_add(0xFF, 1, 8, mode="add") == 0x00
    assert counter_add(0x20, 3, 8, mode="add") == 0x23


def test_counter_add_rejects_out_of_range():
    with pytest.raises(CounterOverflow):
        counter_add(0, 256, 8)
    with pytest.raises(ContractViolation):
        counter_add(0x100, 0, 8)


@given(st.integers(0, 2**128 - 1), st.integers(0, 2**64))
def test_counter_add_is_linear(iv, i):
    assert counter_add(iv, i, 128) == counter_add(iv, 0, 128) ^ i


@given(st.integers(1, 128).flatmap(lambda b: st.tuples(st.just(b), st.integers(0, 2**b - 1))))
def test_int_bytes_round_trip(case):
    bits, x = case
    assert bytes_to_int(int_to_bytes(x, bits), bits) == x


@pytest.mark.parametrize("bits", [8, 12, 64, 128])
def test_counter_rows_match_scalar(bits):
    iv = (0x9E3779B97F4A7C15F39CC0605CEDC834 >> (128 - bits))
    rows = counter_rows(iv, 5, 40, bits)
    assert block_ints(rows) == [counter_add(iv, 5 + k, bits) for k in range(40)]


def test_u64_round_trip():
    rows = blocks([0, 1, 0xABC, 0xFFF], 12)
    assert block_ints(u64_to_rows(rows_to_u64(rows), 12)) == [0, 1, 0xABC, 0xFFF]


def test_fold_xor():
    rows = blocks([0x11, 0x22, 0x96], 8)
    assert block_ints(fold_xor(rows)[None, :]) == [0xA5]


def test_as_rows_zero_fills_partial_block():
    assert as_rows(bytes(32), 128).shape == (2, 16)
    rows = as_rows(b"\x01" * 17, 128)
    assert rows.shape == (2, 16)
    assert rows[1, 0] == 1 and not rows[1, 1:].any()
    with pytest.raises(ContractViolation):
        as_rows(bytes(4), 12)


def test_block_spec_bounds():
    assert BlockSpec(12).nbytes == 2
    with pytest.raises(ContractViolation):
        BlockSpec(0)
    with pytest.raises(ContractViolation):
        BlockSpec(129)


def test_blocks_rejects_wide_values():
    with pytest.raises(ContractViolation):
        blocks([0x100], 8)
    assert blocks([], 8).shape == (0, 1)
    assert np.array_equal(blocks([0xAB], 8), np.array([[0xAB]], dtype=np.uint8))
