"""Share and reconstruct for every supported scheme.

All schemes follow the same pipeline:

1. cut the plaintext into zero-filled blocks and pad the block count so the
   output splits evenly into ``n`` fragments;
2. draw the per-message secrets (IV, and a message key where the scheme has
   one) from the caller's RNG, IV first;
3. apply the scheme's transform to get the dispersed block vector;
4. split it into ``n`` fragments and, for schemes that share a secret block,
   attach one additive share of that block to each fragment.

Shares carry no integrity protection: tampering yields wrong plaintext, not
an error.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import NamedTuple, Sequence

import numpy as np

from kexshard.core.blocks import (
    as_rows,
    check_block,
    counter_rows,
    int_to_bytes,
    nbytes_for,
    word_view,
)
from kexshard.core.ciphers import BlockCipher
from kexshard.core.counters import OpCounters, timed
from kexshard.core.oracles import RandomOracleStream
from kexshard.ctr import ctr_decrypt_rows, ctr_encrypt_rows
from kexshard.errors import ContractViolation, CorruptShareSet, IncompleteShareSet, SizeLimitError
from kexshard.pss import pss_reconstruct, pss_split
from kexshard.transforms import bastion_transform, ssake_chain, ssake_unchain

MAX_SHARES = 255


class SchemeId(IntEnum):
    CTR_NAIVE = 0
    SSMS = 1
    SSAKE = 2
    ROSSAKE_BC = 3
    ROSSAKE_SPONGE = 4
    BASTION = 5
    RIVEST_AONT = 6
    RIVEST_AON = 7

    @property
    def slug(self) -> str:
        return self.name.lower().replace("_", "-")

    @classmethod
    def parse(cls, text: str) -> "SchemeId":
        key = text.strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            raise ContractViolation(f"unknown scheme {text!r}; choose from {[s.slug for s in cls]}") from None


class FragmentationPolicy(Enum):
    CONTIGUOUS = "contiguous"
    INTERLEAVED = "interleaved"


@dataclass(frozen=True)
class Share:
    scheme: SchemeId
    index: int
    n: int
    iv_share: int | None
    fragment: bytes = field(repr=False)
    plaintext_len: int
    block_bits: int
    interleaved: bool = False
    even_padded: bool = False

    @property
    def block_bytes(self) -> int:
        return nbytes_for(self.block_bits)

    @property
    def fragment_blocks(self) -> int:
        return len(self.fragment) // self.block_bytes

    @property
    def stored_bytes(self) -> int:
        """Payload held by the site: fragment plus the share block, headers excluded."""
        return len(self.fragment) + (self.block_bytes if self.iv_share is not None else 0)

    def fragment_rows(self) -> np.ndarray:
        return np.frombuffer(self.fragment, dtype=np.uint8).reshape(-1, self.block_bytes)


@dataclass(frozen=True)
class Secrets:
    """Per-message randomness.  Exposed for analysis and tests only."""

    iv: int
    message_key: int | None = None


class SharingResult(NamedTuple):
    shares: list[Share]
    counters: OpCounters
    secrets: Secrets
    ciphertext_blocks: int


# -- fragment helpers --------------------------------------------------------

def fragment_rows(rows: np.ndarray, n: int, policy: FragmentationPolicy) -> list[bytes]:
    if rows.shape[0] % n:
        raise ContractViolation(f"{rows.shape[0]} blocks do not split into {n} equal fragments")
    if policy is FragmentationPolicy.INTERLEAVED:
        return [rows[i::n].tobytes() for i in range(n)]
    k = rows.shape[0] // n
    return [rows[i * k:(i + 1) * k].tobytes() for i in range(n)]


def assemble_rows(fragments: Sequence[np.ndarray], policy: FragmentationPolicy) -> np.ndarray:
    n = len(fragments)
    if policy is FragmentationPolicy.INTERLEAVED:
        k, nb = fragments[0].shape
        out = np.empty((k * n, nb), dtype=np.uint8)
        for i, f in enumerate(fragments):
            out[i::n] = f
        return out
    return np.concatenate(fragments, axis=0) if n > 1 else fragments[0]


def _round_up(x: int, m: int) -> int:
    return -(-x // m) * m


def _zero_extend(rows: np.ndarray, count: int) -> np.ndarray:
    if rows.shape[0] == count:
        return rows
    out = np.zeros((count, rows.shape[1]), dtype=np.uint8)
    out[:rows.shape[0]] = rows
    return out


def _xor_into(dst: np.ndarray, src: np.ndarray) -> np.ndarray:
    w = word_view(dst)
    np.bitwise_xor(w, word_view(np.ascontiguousarray(src)), out=w)
    return dst


# -- the common pipeline -------------------------------------------------------

class Scheme:
    scheme_id: SchemeId
    bits: int
    has_iv_share: bool = False

    # Subclasses provide layout / draw_secrets / transform / invert.

    def layout(self, m: int, n: int) -> tuple[int, bool]:
        """Padded payload block count for ``m`` plaintext blocks, and whether
        extra blocks beyond the minimal multiple were needed for even length."""
        raise NotImplementedError

    def draw_secrets(self, rng) -> Secrets:
        return Secrets(iv=rng.block(self.bits))

    def transform(self, rows: np.ndarray, secrets: Secrets, counters: OpCounters | None = None,
                  payload: int | None = None) -> np.ndarray:
        """Dispersed block vector for plaintext ``rows`` zero-extended to ``payload`` blocks."""
        raise NotImplementedError

    def invert(self, dispersed: np.ndarray, shared: int | None, counters: OpCounters | None = None) -> np.ndarray:
        raise NotImplementedError

    def shared_secret(self, secrets: Secrets) -> int | None:
        return None

    def exposed_key(self, secrets: Secrets):
        """The key an adversary learns under key exposure."""
        return getattr(self, "key", None)

    def ciphertext_blocks(self, payload: int) -> int:
        """Block count of the underlying ciphertext (the |C| of the storage totals)."""
        return payload + 1

    # public API

    def pad_plaintext(self, rows: np.ndarray, n: int) -> tuple[np.ndarray, bool]:
        p, even = self.layout(rows.shape[0], n)
        return _zero_extend(rows, p), even

    def share_blocks(self, rows: np.ndarray, n: int, rng, policy: FragmentationPolicy = FragmentationPolicy.CONTIGUOUS,
                     plaintext_len: int | None = None) -> SharingResult:
        if not 1 <= n <= MAX_SHARES:
            raise (ContractViolation if n < 1 else SizeLimitError)(f"share count must be in 1..{MAX_SHARES}, got {n}")
        if rows.ndim != 2 or rows.shape[1] != nbytes_for(self.bits):
            raise ContractViolation(f"plaintext blocks must be {nbytes_for(self.bits)} bytes wide")
        counters = OpCounters()
        payload, even = self.layout(rows.shape[0], n)
        secrets = self.draw_secrets(rng)
        dispersed = self.transform(rows, secrets, counters, payload)
        shared = self.shared_secret(secrets)
        with counters.timed("pss"):
            iv_shares = list(pss_split(shared, n, rng, self.bits, counters)) if self.has_iv_share else [None] * n
        plen = rows.shape[0] * nbytes_for(self.bits) if plaintext_len is None else plaintext_len
        with counters.timed("fragment"):
            frags = fragment_rows(dispersed, n, policy)
        shares = [
            Share(self.scheme_id, i + 1, n, iv_shares[i], frags[i], plen, self.bits,
                  interleaved=policy is FragmentationPolicy.INTERLEAVED, even_padded=even)
            for i in range(n)
        ]
        return SharingResult(shares, counters, secrets, self.ciphertext_blocks(payload))

    def share(self, plaintext: bytes, n: int, rng, policy: FragmentationPolicy = FragmentationPolicy.CONTIGUOUS) -> SharingResult:
        rows = as_rows(plaintext, self.bits)
        return self.share_blocks(rows, n, rng, policy, plaintext_len=len(plaintext))

    def validate(self, shares: Sequence[Share]) -> list[Share]:
        """Check a share set for completeness and consistency; return it sorted by index."""
        if not shares:
            raise IncompleteShareSet([], "no shares supplied")
        first = shares[0]
        n = first.n
        meta = (first.scheme, first.n, first.plaintext_len, first.block_bits, first.interleaved,
                first.even_padded, len(first.fragment))
        by_index: dict[int, Share] = {}
        for s in shares:
            if (s.scheme, s.n, s.plaintext_len, s.block_bits, s.interleaved, s.even_padded, len(s.fragment)) != meta:
                raise CorruptShareSet(f"share {s.index} disagrees with share {first.index} on set metadata")
            if not 1 <= s.index <= n:
                raise CorruptShareSet(f"share index {s.index} outside 1..{n}")
            if s.index in by_index and by_index[s.index] != s:
                raise CorruptShareSet(f"two different shares claim index {s.index}")
            by_index[s.index] = s
        if first.scheme != self.scheme_id:
            raise CorruptShareSet(f"shares belong to {first.scheme.name}, not {self.scheme_id.name}")
        if first.block_bits != self.bits:
            raise CorruptShareSet(f"shares use {first.block_bits}-bit blocks, scheme uses {self.bits}")
        missing = [i for i in range(1, n + 1) if i not in by_index]
        if missing:
            raise IncompleteShareSet(missing)
        ordered = [by_index[i] for i in range(1, n + 1)]
        for s in ordered:
            if (s.iv_share is not None) != self.has_iv_share:
                raise CorruptShareSet(f"share {s.index} {'lacks' if self.has_iv_share else 'carries'} a share block")
            if s.iv_share is not None:
                try:
                    check_block(s.iv_share, self.bits)
                except ContractViolation as exc:
                    raise CorruptShareSet(str(exc)) from None
        if len(first.fragment) % first.block_bytes:
            raise CorruptShareSet("fragment length is not a whole number of blocks")
        return ordered

    def reconstruct_blocks(self, shares: Sequence[Share], counters: OpCounters | None = None) -> np.ndarray:
        ordered = self.validate(shares)
        policy = FragmentationPolicy.INTERLEAVED if ordered[0].interleaved else FragmentationPolicy.CONTIGUOUS
        dispersed = assemble_rows([s.fragment_rows() for s in ordered], policy)
        shared = pss_reconstruct([s.iv_share for s in ordered], self.bits, counters) if self.has_iv_share else None
        return self.invert(dispersed, shared, counters)

    def reconstruct(self, shares: Sequence[Share], counters: OpCounters | None = None) -> bytes:
        rows = self.reconstruct_blocks(shares, counters)
        plen = shares[0].plaintext_len
        if plen > rows.size:
            raise CorruptShareSet(f"declared length {plen} exceeds the {rows.size} recovered bytes")
        return rows.tobytes()[:plen]


class _CtrBased(Scheme):
    def __init__(self, cipher: BlockCipher, key: int | None = None):
        self.cipher = cipher
        self.bits = cipher.bits
        if key is not None:
            check_block(key, self.bits)
        self.key = key

    def _keystream(self, key: int, iv: int, start: int, count: int, counters: OpCounters | None) -> np.ndarray:
        if counters is not None:
            counters.cipher_block_calls += count
        return self.cipher.encrypt_rows(key, counter_rows(iv, start, count, self.bits))

    def __repr__(self):
        return f"{type(self).__name__}({self.cipher!r})"


class Ssake(_CtrBased):
    """CTR encrypt, chain neighbours, share the IV."""

    scheme_id = SchemeId.SSAKE
    has_iv_share = True

    def layout(self, m, n):
        return max(n, _round_up(m, n)), False

    def shared_secret(self, secrets):
        return secrets.iv

    def transform(self, rows, secrets, counters=None, payload=None):
        with timed(counters, "encrypt"):
            c = ctr_encrypt_rows(self.cipher, self.key, secrets.iv, rows, counters, payload=payload)
        with timed(counters, "transform"):
            return ssake_chain(c, counters)

    def invert(self, dispersed, shared, counters=None):
        c0 = self.cipher.encrypt_rows(self.key, counter_rows(shared, 0, 1, self.bits))
        c = ssake_unchain(c0[0], dispersed, counters)
        pad = self._keystream(self.key, shared, 1, dispersed.shape[0], counters)
        return _xor_into(c[1:], pad)


class Rossake(Scheme):
    """One-time pad from an oracle keyed by (K, IV); share the IV."""

    has_iv_share = True

    def __init__(self, ro: RandomOracleStream, key: int, scheme_id: SchemeId = SchemeId.ROSSAKE_BC):
        if scheme_id not in (SchemeId.ROSSAKE_BC, SchemeId.ROSSAKE_SPONGE):
            raise ContractViolation(f"{scheme_id.name} is not an oracle-pad scheme")
        self.ro = ro
        self.bits = ro.bits
        self.key = check_block(key, self.bits)
        self.scheme_id = scheme_id

    def layout(self, m, n):
        return max(n, _round_up(m, n)), False

    def shared_secret(self, secrets):
        return secrets.iv

    def transform(self, rows, secrets, counters=None, payload=None):
        if payload is not None:
            rows = _zero_extend(rows, payload)
        if counters is not None:
            counters.ro_blocks_generated += rows.shape[0]
            counters.passes += 1
        with timed(counters, "encrypt"):
            return self.ro.mask((self.key, secrets.iv), rows)

    def invert(self, dispersed, shared, counters=None):
        if counters is not None:
            counters.ro_blocks_generated += dispersed.shape[0]
        return self.ro.mask((self.key, shared), dispersed)

    def __repr__(self):
        return f"Rossake({self.ro!r}, scheme_id={self.scheme_id.name})"


class Bastion(_CtrBased):
    """CTR encrypt (with the encrypted IV block) then XOR every block with all others."""

    scheme_id = SchemeId.BASTION

    def layout(self, m, n):
        c = _round_up(m + 1, n)
        if c % 2:
            # only reachable with odd n; adding n keeps divisibility
            return c + n - 1, True
        return c - 1, False

    def transform(self, rows, secrets, counters=None, payload=None):
        with timed(counters, "encrypt"):
            c = ctr_encrypt_rows(self.cipher, self.key, secrets.iv, rows, counters, payload=payload)
        with timed(counters, "transform"):
            return bastion_transform(c, counters)

    def invert(self, dispersed, shared, counters=None):
        return ctr_decrypt_rows(self.cipher, self.key, bastion_transform(dispersed, counters), counters)


class CtrNaive(_CtrBased):
    """Plain CTR ciphertext cut into fragments; nothing mixes the key in."""

    scheme_id = SchemeId.CTR_NAIVE

    def layout(self, m, n):
        return _round_up(m + 1, n) - 1, False

    def transform(self, rows, secrets, counters=None, payload=None):
        with timed(counters, "encrypt"):
            return ctr_encrypt_rows(self.cipher, self.key, secrets.iv, rows, counters, payload=payload)

    def invert(self, dispersed, shared, counters=None):
        return ctr_decrypt_rows(self.cipher, self.key, dispersed, counters)


class Ssms(_CtrBased):
    """Fresh message key per call, CTR encrypt, share the message key."""

    scheme_id = SchemeId.SSMS
    has_iv_share = True

    def __init__(self, cipher: BlockCipher):
        super().__init__(cipher, None)

    def layout(self, m, n):
        return _round_up(m + 1, n) - 1, False

    def draw_secrets(self, rng):
        k1 = rng.block(self.bits)
        return Secrets(iv=rng.block(self.bits), message_key=k1)

    def shared_secret(self, secrets):
        return secrets.message_key

    def exposed_key(self, secrets):
        return secrets.message_key

    def transform(self, rows, secrets, counters=None, payload=None):
        with timed(counters, "encrypt"):
            return ctr_encrypt_rows(self.cipher, secrets.message_key, secrets.iv, rows, counters, payload=payload)

    def invert(self, dispersed, shared, counters=None):
        return ctr_decrypt_rows(self.cipher, shared, dispersed, counters)


def block_digest(rows: np.ndarray, bits: int) -> int:
    """One-block digest of a block vector: SHAKE128 output cut to one block."""
    nb = nbytes_for(bits)
    raw = hashlib.shake_128(np.ascontiguousarray(rows).tobytes()).digest(nb)
    return int.from_bytes(raw, "big") & ((1 << bits) - 1)


class RivestAont(_CtrBased):
    """CTR under a fresh inner key, then append ``digest(C) XOR K1``."""

    scheme_id = SchemeId.RIVEST_AONT

    def __init__(self, cipher: BlockCipher):
        super().__init__(cipher, None)

    def layout(self, m, n):
        return _round_up(m + 2, n) - 2, False

    def draw_secrets(self, rng):
        k1 = rng.block(self.bits)
        return Secrets(iv=rng.block(self.bits), message_key=k1)

    def exposed_key(self, secrets):
        return secrets.message_key

    def transform(self, rows, secrets, counters=None, payload=None):
        with timed(counters, "encrypt"):
            c = ctr_encrypt_rows(self.cipher, secrets.message_key, secrets.iv, rows, counters, payload=payload)
        with timed(counters, "transform"):
            out = np.empty((c.shape[0] + 1, c.shape[1]), dtype=np.uint8)
            out[:-1] = c
            digest = block_digest(c, self.bits)
            out[-1] = np.frombuffer(int_to_bytes(digest ^ secrets.message_key, self.bits), dtype=np.uint8)
        if counters is not None:
            counters.xor_block_ops += 1
            counters.passes += 1
        return out

    def invert(self, dispersed, shared, counters=None):
        c = dispersed[:-1]
        k1 = block_digest(c, self.bits) ^ int.from_bytes(dispersed[-1].tobytes(), "big")
        if counters is not None:
            counters.xor_block_ops += 1
            counters.passes += 1
        return ctr_decrypt_rows(self.cipher, k1, c, counters)


class RivestAon(RivestAont):
    """The transform above, re-encrypted in CTR under a long-term outer key.

    The outer pass reuses the first transformed block as its counter base
    and leaves that block in place, so storage stays ``|C| + |K|``.
    """

    scheme_id = SchemeId.RIVEST_AON

    def __init__(self, cipher: BlockCipher, outer_key: int):
        super().__init__(cipher)
        self.key = check_block(outer_key, self.bits)

    def exposed_key(self, secrets):
        return self.key

    def _outer(self, rows, counters):
        base = int.from_bytes(rows[0].tobytes(), "big")
        pad = self._keystream(self.key, base, 1, rows.shape[0] - 1, counters)
        if counters is not None:
            counters.passes += 1
        return _xor_into(rows[1:], pad)

    def transform(self, rows, secrets, counters=None, payload=None):
        out = super().transform(rows, secrets, counters, payload)
        with timed(counters, "encrypt"):
            self._outer(out, counters)
        return out

    def invert(self, dispersed, shared, counters=None):
        inner = np.array(dispersed, copy=True)
        self._outer(inner, counters)
        return super().invert(inner, shared, counters)


# -- construction helpers ----------------------------------------------------------

def make_scheme(scheme_id: SchemeId | str, bits: int = 128, key: int | None = None,
                outer_key: int | None = None, family_seed: int = 0) -> Scheme:
    """Build a scheme on the standard backends for ``bits``.

    At 128 bits: AES-128 block cipher, AES-256 for the wide cipher.  At toy
    widths (<= 20 bits): seeded table permutations.  Keys default to zero,
    which is only sensible for exposed-key experiments.
    """
    from kexshard.core.ciphers import Aes128Cipher, Aes256WideCipher, ToyCipher, ToyWideCipher
    from kexshard.core.oracles import CounterModeOracle, SpongeOracle

    if isinstance(scheme_id, str):
        scheme_id = SchemeId.parse(scheme_id)
    if bits == 128:
        cipher, wide = Aes128Cipher(), Aes256WideCipher()
    else:
        cipher, wide = ToyCipher(bits, family_seed), ToyWideCipher(bits, family_seed)
    key = 0 if key is None else key
    if scheme_id is SchemeId.SSAKE:
        return Ssake(cipher, key)
    if scheme_id is SchemeId.ROSSAKE_BC:
        return Rossake(CounterModeOracle(wide), key, SchemeId.ROSSAKE_BC)
    if scheme_id is SchemeId.ROSSAKE_SPONGE:
        return Rossake(SpongeOracle(bits), key, SchemeId.ROSSAKE_SPONGE)
    if scheme_id is SchemeId.BASTION:
        return Bastion(cipher, key)
    if scheme_id is SchemeId.CTR_NAIVE:
        return CtrNaive(cipher, key)
    if scheme_id is SchemeId.SSMS:
        return Ssms(cipher)
    if scheme_id is SchemeId.RIVEST_AONT:
        return RivestAont(cipher)
    return RivestAon(cipher, key if outer_key is None else outer_key)


def expected_stored_blocks(scheme_id: SchemeId, c: int, n: int) -> int:
    """Storage totals in blocks, with ``c`` the ciphertext block count."""
    if scheme_id in (SchemeId.CTR_NAIVE, SchemeId.BASTION):
        return c
    if scheme_id is SchemeId.SSMS:
        return c + n
    if scheme_id in (SchemeId.RIVEST_AONT, SchemeId.RIVEST_AON):
        return c + 1
    return c + n - 1


def expected_xor_ops(scheme_id: SchemeId, c: int, n: int) -> int:
    return {
        SchemeId.SSAKE: c + n - 2,
        SchemeId.BASTION: 2 * c - 1,
        SchemeId.ROSSAKE_BC: n - 1,
        SchemeId.ROSSAKE_SPONGE: n - 1,
        SchemeId.CTR_NAIVE: 0,
        SchemeId.SSMS: n - 1,
        SchemeId.RIVEST_AONT: 1,
        SchemeId.RIVEST_AON: 1,
    }[scheme_id]


# Function-style entry points mirroring the per-scheme operations.

def ssake_share(cipher, key, plaintext, n, rng, policy=FragmentationPolicy.CONTIGUOUS):
    return Ssake(cipher, key).share(plaintext, n, rng, policy)


def ssake_reconstruct(cipher, key, shares):
    return Ssake(cipher, key).reconstruct(shares)


def rossake_share(ro, key, plaintext, n, rng, policy=FragmentationPolicy.CONTIGUOUS, scheme_id=SchemeId.ROSSAKE_BC):
    return Rossake(ro, key, scheme_id).share(plaintext, n, rng, policy)


def rossake_reconstruct(ro, key, shares):
    scheme_id = shares[0].scheme if shares else SchemeId.ROSSAKE_BC
    return Rossake(ro, key, scheme_id).reconstruct(shares)


def bastion_share(cipher, key, plaintext, n, rng, policy=FragmentationPolicy.CONTIGUOUS):
    return Bastion(cipher, key).share(plaintext, n, rng, policy)


def ssms_share(cipher, plaintext, n, rng, policy=FragmentationPolicy.CONTIGUOUS):
    return Ssms(cipher).share(plaintext, n, rng, policy)


def ctr_naive_share(cipher, key, plaintext, n, rng, policy=FragmentationPolicy.CONTIGUOUS):
    return CtrNaive(cipher, key).share(plaintext, n, rng, policy)


def rivest_aont_share(cipher, plaintext, n, rng, policy=FragmentationPolicy.CONTIGUOUS):
    return RivestAont(cipher).share(plaintext, n, rng, policy)


def rivest_aon_share(cipher, outer_key, plaintext, n, rng, policy=FragmentationPolicy.CONTIGUOUS):
    return RivestAon(cipher, outer_key).share(plaintext, n, rng, policy)


__all__ = [
    "Bastion",
    "CtrNaive",
    "FragmentationPolicy",
    "MAX_SHARES",
    "RivestAon",
    "RivestAont",
    "Rossake",
    "Scheme",
    "SchemeId",
    "Secrets",
    "Share",
    "SharingResult",
    "Ssake",
    "Ssms",
    "assemble_rows",
    "bastion_share",
    "block_digest",
    "ctr_naive_share",
    "expected_stored_blocks",
    "expected_xor_ops",
    "fragment_rows",
    "make_scheme",
    "rivest_aon_share",
    "rivest_aont_share",
    "rossake_reconstruct",
    "rossake_share",
    "ssake_reconstruct",
    "ssake_share",
    "ssms_share",
]
