import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kexshard.core.blocks import as_rows
from kexshard.core.ciphers import ToyCipher, XorTestCipher, XorWideTestCipher
from kexshard.core.oracles import CounterModeOracle, SpongeOracle
from kexshard.core.rng import DeterministicRng
from kexshard.errors import ContractViolation, CorruptShareSet, IncompleteShareSet, SizeLimitError
from kexshard.schemes import (
    Bastion,
    CtrNaive,
    FragmentationPolicy,
    RivestAon,
    RivestAont,
    Rossake,
    SchemeId,
    Ssake,
    Ssms,
    assemble_rows,
    expected_stored_blocks,
    expected_xor_ops,
    fragment_rows,
    make_scheme,
    rossake_reconstruct,
    ssake_reconstruct,
    ssake_share,
)

POLICIES = list(FragmentationPolicy)


def _key(sid, bits=128):
    return None if sid in (SchemeId.SSMS, SchemeId.RIVEST_AONT) else (0x0123456789ABCDEF0FEDCBA987654321 >> (128 - bits))


def test_ssake_worked_example(scripted):
    cipher = XorTestCipher(8)
    result = ssake_share(cipher, 0x0F, bytes([0xAA, 0x02]), 2, scripted([0x20, 0x13]))
    s1, s2 = result.shares
    assert (s1.iv_share, s1.fragment) == (0x13, b"\xab")
    assert (s2.iv_share, s2.fragment) == (0x33, b"\xab")
    assert ssake_reconstruct(cipher, 0x0F, result.shares) == bytes([0xAA, 0x02])
    assert sum(s.stored_bytes for s in result.shares) == 3 + 1


def test_ssake_single_share(scripted):
    result = ssake_share(XorTestCipher(8), 0x0F, bytes([0xAA, 0x02]), 1, scripted([0x20]))
    (share,) = result.shares
    assert share.iv_share == 0x20 and share.fragment == b"\xab\xab"


def test_rossake_worked_example(scripted):
    ro = CounterModeOracle(XorWideTestCipher(8))
    result = Rossake(ro, 0x0F).share(bytes([0xAA, 0x02]), 2, scripted([0x20, 0x13]))
    s1, s2 = result.shares
    assert (s1.iv_share, s1.fragment) == (0x13, b"\x84")
    assert (s2.iv_share, s2.fragment) == (0x33, b"\x2f")
    assert rossake_reconstruct(ro, 0x0F, result.shares) == bytes([0xAA, 0x02])


def test_bastion_worked_example(scripted):
    # key 0 and IV 0x01 under the xor cipher make the ciphertext [1, 2, 3, 4]
    scheme = Bastion(XorTestCipher(8), 0x00)
    result = scheme.share(bytes([0x02, 0x00, 0x06]), 2, scripted([0x01]))
    assert [s.fragment for s in result.shares] == [b"\x05\x06", b"\x07\x00"]
    assert scheme.reconstruct(result.shares) == bytes([0x02, 0x00, 0x06])
    assert sum(s.stored_bytes for s in result.shares) == 4


def test_bastion_odd_length_padded_and_flagged():
    scheme = make_scheme(SchemeId.BASTION, 128, key=5)
    result = scheme.share(bytes(16 * 2), 3, DeterministicRng(0))  # c = 3 would be odd
    assert all(s.even_padded for s in result.shares)
    assert result.ciphertext_blocks % 2 == 0
    assert scheme.reconstruct(result.shares) == bytes(32)
    even = scheme.share(bytes(16 * 3), 2, DeterministicRng(0))
    assert not any(s.even_padded for s in even.shares)


def test_ssms_needs_no_key():
    scheme = Ssms(ToyCipher(8, 1))
    data = bytes(range(40))
    result = scheme.share(data, 3, DeterministicRng(1))
    assert Ssms(ToyCipher(8, 1)).reconstruct(result.shares) == data


def test_ctr_naive_first_share_carries_encrypted_iv():
    cipher = XorTestCipher(8)
    scheme = CtrNaive(cipher, 0x0F)
    result = scheme.share(bytes([0xAA, 0x02]), 3, DeterministicRng(0))
    iv = result.secrets.iv
    assert result.shares[0].fragment[0] == cipher.encrypt(0x0F, iv)


@pytest.mark.parametrize("scheme", [RivestAont(ToyCipher(8, 3)), RivestAon(ToyCipher(8, 3), 0x44)], ids=repr)
def test_rivest_round_trip_and_passes(scheme):
    data = bytes(range(50))
    result = scheme.share(data, 4, DeterministicRng(2))
    assert scheme.reconstruct(result.shares) == data
    assert result.counters.passes == (3 if isinstance(scheme, RivestAon) else 2)


def test_missing_share_reported():
    scheme = make_scheme(SchemeId.SSAKE, 128, key=1)
    shares = scheme.share(bytes(100), 4, DeterministicRng(0)).shares
    with pytest.raises(IncompleteShareSet) as info:
        scheme.reconstruct(shares[:1] + shares[2:])
    assert info.value.missing == [2]


def test_missing_iv_share_is_corrupt():
    scheme = make_scheme(SchemeId.ROSSAKE_BC, 128, key=1)
    shares = scheme.share(bytes(100), 2, DeterministicRng(0)).shares
    broken = [dataclasses.replace(shares[0], iv_share=None), shares[1]]
    with pytest.raises(CorruptShareSet):
        scheme.reconstruct(broken)


def test_mixed_sets_rejected():
    scheme = make_scheme(SchemeId.SSAKE, 128, key=1)
    a = scheme.share(bytes(100), 2, DeterministicRng(0)).shares
    b = scheme.share(bytes(200), 2, DeterministicRng(1)).shares
    with pytest.raises(CorruptShareSet):
        scheme.reconstruct([a[0], b[1]])
    with pytest.raises(CorruptShareSet):
        make_scheme(SchemeId.BASTION, 128, key=1).reconstruct(a)


def test_tampering_goes_unnoticed_but_changes_output():
    scheme = make_scheme(SchemeId.SSAKE, 128, key=1)
    data = bytes(range(64))
    shares = scheme.share(data, 2, DeterministicRng(0)).shares
    frag = bytearray(shares[1].fragment)
    frag[0] ^= 1
    out = scheme.reconstruct([shares[0], dataclasses.replace(shares[1], fragment=bytes(frag))])
    assert len(out) == len(data) and out != data


def test_share_count_limits():
    scheme = make_scheme(SchemeId.SSAKE, 128, key=1)
    with pytest.raises(ContractViolation):
        scheme.share(b"x", 0, DeterministicRng(0))
    with pytest.raises(SizeLimitError):
        scheme.share(b"x", 256, DeterministicRng(0))


@pytest.mark.parametrize("sid", list(SchemeId))
@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("m", [0, 1, 4, 9, 16])
def test_accounting_matches_formulas(sid, n, m):
    scheme = make_scheme(sid, 128, key=_key(sid), outer_key=7)
    result = scheme.share(bytes(16 * m), n, DeterministicRng(m))
    c = result.ciphertext_blocks
    stored = sum(s.stored_bytes for s in result.shares)
    assert stored == 16 * expected_stored_blocks(sid, c, n)
    assert result.counters.xor_block_ops == expected_xor_ops(sid, c, n)
    assert c >= m + 1


def test_storage_table():
    c, n = 10, 4
    table = {
        SchemeId.CTR_NAIVE: c, SchemeId.BASTION: c, SchemeId.SSMS: c + n,
        SchemeId.RIVEST_AONT: c + 1, SchemeId.RIVEST_AON: c + 1,
        SchemeId.SSAKE: c + n - 1, SchemeId.ROSSAKE_BC: c + n - 1, SchemeId.ROSSAKE_SPONGE: c + n - 1,
    }
    for sid, blocks in table.items():
        assert expected_stored_blocks(sid, c, n) == blocks


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_chain_cheaper_than_half_bastion(n):
    for c in range(2 * n, 200, 2):
        assert expected_xor_ops(SchemeId.SSAKE, c, n) < expected_xor_ops(SchemeId.BASTION, c, n) / 2 + n


@given(st.integers(0, 40), st.integers(1, 9), st.sampled_from(POLICIES), st.integers(0, 2**32))
def test_fragment_partition(m, n, policy, seed):
    rows = DeterministicRng(seed).blocks(m * n, 128)
    frags = fragment_rows(rows, n, policy)
    back = assemble_rows([as_rows(f, 128) for f in frags], policy)
    assert np.array_equal(back, rows)


@pytest.mark.parametrize("sid", list(SchemeId))
@pytest.mark.parametrize("policy", POLICIES)
def test_fragments_reassemble_to_transform(sid, policy):
    scheme = make_scheme(sid, 128, key=_key(sid), outer_key=9)
    rows = as_rows(DeterministicRng(4).bytes(16 * 13), 128)
    result = scheme.share_blocks(rows, 3, DeterministicRng(5), policy)
    payload, _ = scheme.layout(13, 3)
    expected = scheme.transform(rows, result.secrets, None, payload)
    got = assemble_rows([s.fragment_rows() for s in result.shares], policy)
    assert np.array_equal(got, expected)


@given(sid=st.sampled_from(list(SchemeId)), bits=st.sampled_from([8, 16, 128]),
       data=st.binary(max_size=300), n=st.integers(1, 8), policy=st.sampled_from(POLICIES),
       seed=st.integers(0, 2**32))
@settings(max_examples=150, deadline=None)
def test_round_trip_property(sid, bits, data, n, policy, seed):
    scheme = make_scheme(sid, bits, key=_key(sid, bits), outer_key=3 % (1 << bits))
    result = scheme.share(data, n, DeterministicRng(seed), policy)
    assert scheme.reconstruct(list(reversed(result.shares))) == data


def test_sponge_backend_round_trip():
    scheme = Rossake(SpongeOracle(128), 11, SchemeId.ROSSAKE_SPONGE)
    data = DeterministicRng(0).bytes(5000)
    assert scheme.reconstruct(scheme.share(data, 5, DeterministicRng(1)).shares) == data


def test_slug_parsing():
    assert SchemeId.parse("rossake-bc") is SchemeId.ROSSAKE_BC
    assert SchemeId.parse("SSAKE") is SchemeId.SSAKE
    with pytest.raises(ValueError):
        SchemeId.parse("nope")
