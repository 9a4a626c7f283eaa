"""Seeded, splittable random source used by every randomized operation."""

from __future__ import annotations

import secrets

import numpy as np

from kexshard.core.blocks import mask_rows, nbytes_for


class DeterministicRng:
    """Philox counter-based generator with explicit 64-bit seeding.

    Children produced by :meth:`spawn` are statistically independent streams,
    so per-trial or per-thread handles can be derived from one root seed.
    """

    def __init__(self, seed: int | np.random.SeedSequence = 0):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
            self.seed = None
        else:
            if not 0 <= int(seed) < 2**64:
                raise ValueError("seed must be a 64-bit non-negative integer")
            self.seed = int(seed)
            self._seq = np.random.SeedSequence(self.seed)
        self.gen = np.random.Generator(np.random.Philox(self._seq))

    def spawn(self, count: int) -> list["DeterministicRng"]:
        return [DeterministicRng(s) for s in self._seq.spawn(count)]

    def block(self, bits: int) -> int:
        nb = nbytes_for(bits)
        return int.from_bytes(self.gen.bytes(nb), "big") & ((1 << bits) - 1)

    def blocks(self, count: int, bits: int) -> np.ndarray:
        nb = nbytes_for(bits)
        rows = np.frombuffer(bytearray(self.gen.bytes(count * nb)), dtype=np.uint8).reshape(count, nb)
        return mask_rows(rows, bits)

    def bytes(self, n: int) -> bytes:
        return self.gen.bytes(n)

    def bit(self) -> int:
        return int(self.gen.integers(0, 2))

    def integers(self, low, high=None, size=None):
        return self.gen.integers(low, high, size=size)

    def permutation(self, n):
        return self.gen.permutation(n)

    def __repr__(self):
        return f"DeterministicRng(seed={self.seed})"


class SystemRng:
    """Operating-system randomness with the same ``block`` interface; not replayable."""

    seed = None

    def block(self, bits: int) -> int:
        return secrets.randbits(bits)

    def bytes(self, n: int) -> bytes:
        return secrets.token_bytes(n)

    def bit(self) -> int:
        return secrets.randbits(1)

    def __repr__(self):
        return "SystemRng()"
