"""Arbitrary-output oracles keyed by a two-block seed ``(key, iv)``.

Output block ``j`` (1-indexed) only depends on the seed and ``j``, so every
backend is deterministic and prefix-consistent.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod

import numpy as np

from kexshard.core.blocks import check_block, counter_rows, int_to_bytes, mask_rows, nbytes_for
from kexshard.core.ciphers import WideBlockCipher, WideKey
from kexshard.core.keccak import KeccakXof
from kexshard.errors import ContractViolation, CounterOverflow


class RandomOracleStream(ABC):
    bits: int

    @abstractmethod
    def generate(self, seed: WideKey, count: int) -> np.ndarray:
        """The first ``count`` output blocks as a ``(count, nbytes)`` array."""

    def mask(self, seed: WideKey, rows: np.ndarray) -> np.ndarray:
        """``rows XOR generate(seed, len(rows))``."""
        return np.bitwise_xor(rows, self.generate(seed, rows.shape[0]))

    def generate_ints(self, seed: WideKey, count: int) -> list[int]:
        return [int.from_bytes(r.tobytes(), "big") for r in self.generate(seed, count)]


class CounterModeOracle(RandomOracleStream):
    """Block ``j`` is ``wide.encrypt(seed, bin(j))``."""

    def __init__(self, wide: WideBlockCipher):
        self.wide = wide
        self.bits = wide.bits

    def generate(self, seed, count):
        if count < 0:
            raise ContractViolation("count must be non-negative")
        if count >= (1 << self.bits):
            raise CounterOverflow(f"{count} oracle blocks exceed the {self.bits}-bit counter space")
        return self.wide.encrypt_rows(seed, counter_rows(0, 1, count, self.bits))

    def mask(self, seed, rows):
        if rows.shape[0] >= (1 << self.bits):
            raise CounterOverflow(f"{rows.shape[0]} oracle blocks exceed the {self.bits}-bit counter space")
        return self.wide.counter_xor(seed, rows, first=1)

    def __repr__(self):
        return f"CounterModeOracle({self.wide!r})"


class SpongeOracle(RandomOracleStream):
    """XOF over ``bytes(key) || bytes(iv)``, output cut into blocks.

    The default XOF is SHAKE128; any object with a ``digest(data, length)``
    method (such as :class:`KeccakXof`) may be supplied instead.
    """

    def __init__(self, bits: int = 128, xof=None):
        self.bits = bits
        self.xof = xof

    def _seed_bytes(self, seed: WideKey) -> bytes:
        k, iv = seed
        return int_to_bytes(check_block(k, self.bits), self.bits) + int_to_bytes(check_block(iv, self.bits), self.bits)

    def generate(self, seed, count):
        if count < 0:
            raise ContractViolation("count must be non-negative")
        nb = nbytes_for(self.bits)
        data = self._seed_bytes(seed)
        if self.xof is None:
            raw = hashlib.shake_128(data).digest(count * nb)
        else:
            raw = self.xof.digest(data, count * nb)
        rows = np.frombuffer(bytearray(raw), dtype=np.uint8).reshape(count, nb)
        return mask_rows(rows, self.bits)

    def __repr__(self):
        return f"SpongeOracle(bits={self.bits}, xof={self.xof!r})"


def lake_keyak_sponge(bits: int = 128) -> SpongeOracle:
    return SpongeOracle(bits, KeccakXof(capacity_bits=128, rounds=24, suffix=0x1F))
