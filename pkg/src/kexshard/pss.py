"""Additive n-of-n sharing of a single block."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from operator import xor

from kexshard.core.blocks import check_block
from kexshard.core.counters import OpCounters
from kexshard.errors import ContractViolation


@dataclass(frozen=True)
class BlockShareSet:
    bits: int
    shares: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.shares)

    def __iter__(self):
        return iter(self.shares)

    def __getitem__(self, k):
        return self.shares[k]

    def __len__(self):
        return len(self.shares)


def pss_split(secret: int, n: int, rng, bits: int, counters: OpCounters | None = None) -> BlockShareSet:
    """Draw n-1 shares from ``rng``; the last one closes the XOR to ``secret``."""
    check_block(secret, bits)
    if n < 1:
        raise ContractViolation("need at least one share")
    drawn = [rng.block(bits) for _ in range(n - 1)]
    last = reduce(xor, drawn, secret)
    if counters is not None:
        counters.xor_block_ops += n - 1
    return BlockShareSet(bits, tuple(drawn) + (last,))


def pss_reconstruct(shares, bits: int | None = None, counters: OpCounters | None = None) -> int:
    if isinstance(shares, BlockShareSet):
        bits = shares.bits
    values = list(shares)
    if not values:
        raise ContractViolation("cannot reconstruct from an empty share set")
    if bits is not None:
        for v in values:
            check_block(v, bits)
    if counters is not None:
        counters.xor_block_ops += len(values) - 1
    return reduce(xor, values)
