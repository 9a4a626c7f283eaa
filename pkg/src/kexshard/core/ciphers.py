"""Keyed permutations on blocks.

``BlockCipher`` takes a one-block key, ``WideBlockCipher`` a two-block key
``(key, iv)``.  Production backends are AES-128 and AES-256 through OpenSSL;
the toy backends realize the ideal-cipher model with seeded lookup tables so
that brute-force oracles stay feasible.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from kexshard.core.blocks import (
    check_block,
    counter_rows,
    int_to_bytes,
    nbytes_for,
    rows_to_u64,
    u64_to_rows,
    word_view,
)
from kexshard.errors import ContractViolation, SizeLimitError

TOY_MAX_BITS = 20

WideKey = tuple  # (key_half, iv_half), both blocks


@dataclass(frozen=True, eq=False)
class ToyPermutation:
    bits: int
    seed: int
    forward: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)

    def __call__(self, x):
        return self.forward[x]

    def invert(self, y):
        return self.inverse[y]

    @classmethod
    def from_table(cls, forward, bits: int, seed: int = -1) -> "ToyPermutation":
        forward = np.asarray(forward, dtype=np.int64)
        size = 1 << bits
        if forward.shape != (size,) or not np.array_equal(np.sort(forward), np.arange(size)):
            raise ContractViolation("table is not a permutation of the block space")
        inverse = np.empty_like(forward)
        inverse[forward] = np.arange(size, dtype=np.int64)
        forward.setflags(write=False)
        inverse.setflags(write=False)
        return cls(bits, seed, forward, inverse)


def build_toy_permutation(bits: int, seed: int) -> ToyPermutation:
    if bits > TOY_MAX_BITS:
        raise SizeLimitError(f"toy permutations are limited to {TOY_MAX_BITS} bits, got {bits}")
    if bits < 1:
        raise ContractViolation("toy permutation needs at least one bit")
    gen = np.random.Generator(np.random.Philox(seed))
    forward = gen.permutation(1 << bits).astype(np.int64)
    inverse = np.empty_like(forward)
    inverse[forward] = np.arange(1 << bits, dtype=np.int64)
    forward.setflags(write=False)
    inverse.setflags(write=False)
    return ToyPermutation(bits, seed, forward, inverse)


def linear_toy_permutation(bits: int, mask: int) -> ToyPermutation:
    """x -> x XOR mask: a permutation with no nonlinearity (negative control)."""
    check_block(mask, bits)
    return ToyPermutation.from_table(np.arange(1 << bits) ^ mask, bits, seed=-1)


def _derive_seed(*parts: int) -> int:
    h = hashlib.blake2b(digest_size=8, person=b"kexshard-toy")
    for p in parts:
        h.update(int(p).to_bytes(32, "big", signed=True))
    return int.from_bytes(h.digest(), "big")


class _LruTables:
    def __init__(self, maxsize: int):
        self.maxsize = maxsize
        self._d: OrderedDict = OrderedDict()

    def get(self, key, build):
        try:
            self._d.move_to_end(key)
            return self._d[key]
        except KeyError:
            value = build()
            self._d[key] = value
            if len(self._d) > self.maxsize:
                self._d.popitem(last=False)
            return value


# -- one-block keys ---------------------------------------------------------

class BlockCipher(ABC):
    bits: int

    @abstractmethod
    def encrypt_rows(self, key: int, rows: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def decrypt_rows(self, key: int, rows: np.ndarray) -> np.ndarray: ...

    def encrypt(self, key: int, x: int) -> int:
        return int.from_bytes(self.encrypt_rows(key, _one(x, self.bits)).tobytes(), "big")

    def decrypt(self, key: int, y: int) -> int:
        return int.from_bytes(self.decrypt_rows(key, _one(y, self.bits)).tobytes(), "big")

    def keystream(self, key: int, iv: int, start: int, count: int, mode: str = "xor") -> np.ndarray:
        return self.encrypt_rows(key, counter_rows(iv, start, count, self.bits, mode))


def _one(x: int, bits: int) -> np.ndarray:
    return np.frombuffer(int_to_bytes(x, bits), dtype=np.uint8).reshape(1, -1)


def _openssl(algo, mode, rows: np.ndarray, encrypt: bool) -> np.ndarray:
    if rows.size == 0:
        return np.zeros(rows.shape, dtype=np.uint8)
    c = Cipher(algo, mode)
    ctx = c.encryptor() if encrypt else c.decryptor()
    src = np.ascontiguousarray(rows)
    out = bytearray(src.nbytes + 15)
    n = ctx.update_into(memoryview(src).cast("B"), out)
    ctx.finalize()
    return np.frombuffer(out, dtype=np.uint8, count=n).reshape(rows.shape)


class Aes128Cipher(BlockCipher):
    bits = 128

    def encrypt_rows(self, key, rows):
        return _openssl(algorithms.AES(int_to_bytes(key, 128)), modes.ECB(), rows, True)

    def decrypt_rows(self, key, rows):
        return _openssl(algorithms.AES(int_to_bytes(key, 128)), modes.ECB(), rows, False)

    def __repr__(self):
        return "Aes128Cipher()"


class XorTestCipher(BlockCipher):
    """encrypt(K, x) = x XOR K.  Linear; only for worked examples and controls."""

    def __init__(self, bits: int):
        self.bits = bits

    def encrypt_rows(self, key, rows):
        k = np.frombuffer(int_to_bytes(key, self.bits), dtype=np.uint8)
        return np.bitwise_xor(rows, k)

    decrypt_rows = encrypt_rows

    def __repr__(self):
        return f"XorTestCipher(bits={self.bits})"


class ToyCipher(BlockCipher):
    """Keyed family of seeded table permutations (ideal cipher at desk scale)."""

    def __init__(self, bits: int, family_seed: int = 0, cache: int = 64):
        if bits > TOY_MAX_BITS:
            raise SizeLimitError(f"toy ciphers are limited to {TOY_MAX_BITS} bits, got {bits}")
        self.bits = bits
        self.family_seed = family_seed
        self._tables = _LruTables(cache)

    def permutation(self, key: int) -> ToyPermutation:
        check_block(key, self.bits)
        return self._tables.get(key, lambda: build_toy_permutation(self.bits, _derive_seed(self.family_seed, key)))

    def encrypt_ints(self, key: int, x: np.ndarray) -> np.ndarray:
        return self.permutation(key).forward[x]

    def decrypt_ints(self, key: int, y: np.ndarray) -> np.ndarray:
        return self.permutation(key).inverse[y]

    def encrypt(self, key, x):
        return int(self.permutation(key).forward[check_block(x, self.bits)])

    def decrypt(self, key, y):
        return int(self.permutation(key).inverse[check_block(y, self.bits)])

    def encrypt_rows(self, key, rows):
        vals = rows_to_u64(rows).astype(np.int64)
        return u64_to_rows(self.permutation(key).forward[vals].astype(np.uint64), self.bits)

    def decrypt_rows(self, key, rows):
        vals = rows_to_u64(rows).astype(np.int64)
        return u64_to_rows(self.permutation(key).inverse[vals].astype(np.uint64), self.bits)

    def __repr__(self):
        return f"ToyCipher(bits={self.bits}, family_seed={self.family_seed})"


class FixedPermutationCipher(BlockCipher):
    """Ignores the key and applies one given permutation (used for controls)."""

    def __init__(self, perm: ToyPermutation):
        self.perm = perm
        self.bits = perm.bits

    def encrypt_ints(self, key, x):
        return self.perm.forward[x]

    def decrypt_ints(self, key, y):
        return self.perm.inverse[y]

    def encrypt(self, key, x):
        return int(self.perm.forward[check_block(x, self.bits)])

    def decrypt(self, key, y):
        return int(self.perm.inverse[check_block(y, self.bits)])

    def encrypt_rows(self, key, rows):
        return u64_to_rows(self.perm.forward[rows_to_u64(rows).astype(np.int64)].astype(np.uint64), self.bits)

    def decrypt_rows(self, key, rows):
        return u64_to_rows(self.perm.inverse[rows_to_u64(rows).astype(np.int64)].astype(np.uint64), self.bits)


# -- two-block keys ---------------------------------------------------------

class WideBlockCipher(ABC):
    bits: int

    @abstractmethod
    def encrypt_rows(self, key: WideKey, rows: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def decrypt_rows(self, key: WideKey, rows: np.ndarray) -> np.ndarray: ...

    def encrypt(self, key: WideKey, x: int) -> int:
        return int.from_bytes(self.encrypt_rows(key, _one(x, self.bits)).tobytes(), "big")

    def decrypt(self, key: WideKey, y: int) -> int:
        return int.from_bytes(self.decrypt_rows(key, _one(y, self.bits)).tobytes(), "big")

    def counter_xor(self, key: WideKey, rows: np.ndarray, first: int = 1) -> np.ndarray:
        """``rows[j] XOR encrypt(key, bin(first + j))``."""
        pad = self.encrypt_rows(key, counter_rows(0, first, rows.shape[0], self.bits))
        return np.bitwise_xor(rows, pad)


def _wide_bytes(key: WideKey, bits: int) -> bytes:
    k, iv = key
    return int_to_bytes(k, bits) + int_to_bytes(iv, bits)


class Aes256WideCipher(WideBlockCipher):
    bits = 128

    def encrypt_rows(self, key, rows):
        return _openssl(algorithms.AES(_wide_bytes(key, 128)), modes.ECB(), rows, True)

    def decrypt_rows(self, key, rows):
        return _openssl(algorithms.AES(_wide_bytes(key, 128)), modes.ECB(), rows, False)

    def counter_xor(self, key, rows, first=1):
        # OpenSSL CTR increments the whole 128-bit block big-endian; from a
        # zero base that is exactly bin(first), bin(first+1), ...
        if rows.shape[0] == 0:
            return rows.copy()
        nonce = int_to_bytes(first, 128)
        return _openssl(algorithms.AES(_wide_bytes(key, 128)), modes.CTR(nonce), rows, True)

    def __repr__(self):
        return "Aes256WideCipher()"


class XorWideTestCipher(WideBlockCipher):
    """encrypt((K, IV), x) = x XOR K XOR IV."""

    def __init__(self, bits: int):
        self.bits = bits

    def encrypt_rows(self, key, rows):
        k, iv = key
        m = np.frombuffer(int_to_bytes(check_block(k, self.bits) ^ check_block(iv, self.bits), self.bits), dtype=np.uint8)
        return np.bitwise_xor(rows, m)

    decrypt_rows = encrypt_rows

    def __repr__(self):
        return f"XorWideTestCipher(bits={self.bits})"


class ToyWideCipher(WideBlockCipher):
    """A fresh seeded table permutation for every two-block key."""

    def __init__(self, bits: int, family_seed: int = 0, cache: int = 16):
        if bits > TOY_MAX_BITS:
            raise SizeLimitError(f"toy ciphers are limited to {TOY_MAX_BITS} bits, got {bits}")
        self.bits = bits
        self.family_seed = family_seed
        self._tables = _LruTables(cache)

    def permutation(self, key: WideKey) -> ToyPermutation:
        k, iv = key
        check_block(k, self.bits)
        check_block(iv, self.bits)
        return self._tables.get((k, iv), lambda: build_toy_permutation(
            self.bits, _derive_seed(self.family_seed, 2, k, iv)))

    def encrypt_rows(self, key, rows):
        vals = rows_to_u64(rows).astype(np.int64)
        return u64_to_rows(self.permutation(key).forward[vals].astype(np.uint64), self.bits)

    def decrypt_rows(self, key, rows):
        vals = rows_to_u64(rows).astype(np.int64)
        return u64_to_rows(self.permutation(key).inverse[vals].astype(np.uint64), self.bits)

    def __repr__(self):
        return f"ToyWideCipher(bits={self.bits}, family_seed={self.family_seed})"


def xor_rows_inplace(dst: np.ndarray, src: np.ndarray) -> None:
    np.bitwise_xor(word_view(dst), word_view(src), out=word_view(dst))


__all__ = [
    "Aes128Cipher",
    "Aes256WideCipher",
    "BlockCipher",
    "FixedPermutationCipher",
    "TOY_MAX_BITS",
    "ToyCipher",
    "ToyPermutation",
    "ToyWideCipher",
    "WideBlockCipher",
    "WideKey",
    "XorTestCipher",
    "XorWideTestCipher",
    "build_toy_permutation",
    "linear_toy_permutation",
    "nbytes_for",
    "xor_rows_inplace",
]
