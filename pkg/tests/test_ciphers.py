import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kexshard.core.blocks import blocks, block_ints
from kexshard.core.ciphers import (
    Aes128Cipher,
    Aes256WideCipher,
    FixedPermutationCipher,
    ToyCipher,
    ToyPermutation,
    ToyWideCipher,
    XorTestCipher,
    XorWideTestCipher,
    build_toy_permutation,
    linear_toy_permutation,
)
from kexshard.errors import ContractViolation, SizeLimitError

# FIPS-197 appendix C vectors
AES128_KEY = 0x000102030405060708090A0B0C0D0E0F
AES256_KEY = 0x000102030405060708090A0B0C0D0E0F101112131415161718191A1B1C1D1E1F
AES_PT = 0x00112233445566778899AABBCCDDEEFF


def test_aes128_known_answer():
    aes = Aes128Cipher()
    assert aes.encrypt(AES128_KEY, AES_PT) == 0x69C4E0D86A7B0430D8CDB78070B4C55A
    assert aes.decrypt(AES128_KEY, 0x69C4E0D86A7B0430D8CDB78070B4C55A) == AES_PT


def test_aes256_wide_known_answer():
    wide = Aes256WideCipher()
    key = (AES256_KEY >> 128, AES256_KEY & ((1 << 128) - 1))
    assert wide.encrypt(key, AES_PT) == 0x8EA2B7CA516745BFEAFC49904B496089


def test_aes256_counter_xor_matches_block_calls():
    wide = Aes256WideCipher()
    key = (0x0F, 0x20)
    rows = np.zeros((5, 16), dtype=np.uint8)
    stream = block_ints(wide.counter_xor(key, rows, first=1))
    assert stream == [wide.encrypt(key, j) for j in range(1, 6)]


@given(st.integers(0, 2**128 - 1), st.lists(st.integers(0, 2**128 - 1), max_size=8))
@settings(max_examples=50)
def test_aes_round_trip_random(key, values):
    aes = Aes128Cipher()
    rows = blocks(values, 128)
    assert block_ints(aes.decrypt_rows(key, aes.encrypt_rows(key, rows))) == values


def test_aes_empty_rows():
    assert Aes128Cipher().encrypt_rows(1, np.zeros((0, 16), dtype=np.uint8)).shape == (0, 16)


@pytest.mark.parametrize("bits", [1, 4, 8, 10, 12])
def test_toy_permutation_bijective(bits):
    perm = build_toy_permutation(bits, seed=7)
    domain = np.arange(1 << bits)
    assert np.array_equal(np.sort(perm.forward), domain)
    assert np.array_equal(perm.invert(perm(domain)), domain)


def test_toy_permutation_deterministic():
    a, b = build_toy_permutation(10, 3), build_toy_permutation(10, 3)
    assert np.array_equal(a.forward, b.forward)
    assert not np.array_equal(a.forward, build_toy_permutation(10, 4).forward)


def test_toy_permutation_tables_read_only():
    perm = build_toy_permutation(8, 1)
    with pytest.raises(ValueError):
        perm.forward[0] = 1


def test_toy_permutation_size_limit():
    with pytest.raises(SizeLimitError):
        build_toy_permutation(21, 0)


def test_from_table_rejects_non_permutation():
    with pytest.raises(ContractViolation):
        ToyPermutation.from_table([0, 0, 1, 2], 2)


def test_linear_permutation():
    perm = linear_toy_permutation(8, 0x5A)
    assert perm(0x00) == 0x5A and perm(0x5A) == 0


@pytest.mark.parametrize("bits", [8, 12])
def test_toy_cipher_exhaustive(bits):
    cipher = ToyCipher(bits, family_seed=1)
    domain = np.arange(1 << bits)
    for key in (0, 1, (1 << bits) - 1):
        ct = cipher.encrypt_ints(key, domain)
        assert len(set(ct.tolist())) == 1 << bits
        assert np.array_equal(cipher.decrypt_ints(key, ct), domain)
    assert not np.array_equal(cipher.encrypt_ints(0, domain), cipher.encrypt_ints(1, domain))


def test_toy_cipher_rows_match_ints():
    cipher = ToyCipher(12, 5)
    values = [0, 1, 0x7FF, 0xFFF]
    assert block_ints(cipher.encrypt_rows(9, blocks(values, 12))) == [cipher.encrypt(9, v) for v in values]


def test_xor_test_cipher():
    cipher = XorTestCipher(8)
    assert cipher.encrypt(0x0F, 0x21) == 0x2E
    assert cipher.decrypt(0x0F, 0x2E) == 0x21


def test_fixed_permutation_ignores_key():
    perm = build_toy_permutation(8, 2)
    cipher = FixedPermutationCipher(perm)
    assert cipher.encrypt(0, 5) == cipher.encrypt(99, 5) == int(perm(5))
    assert cipher.decrypt(1, cipher.encrypt(1, 5)) == 5


@pytest.mark.parametrize("wide", [XorWideTestCipher(8), ToyWideCipher(8, 3)])
def test_wide_ciphers_round_trip(wide):
    key = (0x0F, 0x20)
    domain = list(range(256))
    ct = block_ints(wide.encrypt_rows(key, blocks(domain, 8)))
    assert sorted(ct) == domain
    assert block_ints(wide.decrypt_rows(key, blocks(ct, 8))) == domain


def test_xor_wide_test_cipher():
    assert XorWideTestCipher(8).encrypt((0x0F, 0x20), 0x01) == 0x2E
