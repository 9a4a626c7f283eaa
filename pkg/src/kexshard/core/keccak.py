"""Keccak-f[1600] sponge with configurable capacity and round count.

Only used when a non-standard sponge configuration is requested (for example
capacity 128 / rate 1472 / 24 rounds).  Standard SHAKE configurations go
through :mod:`hashlib`, which this module is checked against in the tests.
"""

from __future__ import annotations

_RC = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
]

_ROT = [
    [0, 36, 3, 41, 18],
    [1, 44, 10, 45, 2],
    [62, 6, 43, 15, 61],
    [28, 55, 25, 21, 56],
    [27, 20, 39, 8, 14],
]

_M = (1 << 64) - 1


def _rol(x: int, n: int) -> int:
    n %= 64
    return ((x << n) | (x >> (64 - n))) & _M if n else x


def keccak_f(state: list[int], rounds: int = 24) -> None:
    """Permute a 25-lane state in place; ``state[x + 5*y]``.  Reduced-round
    variants use the last ``rounds`` round constants, as Keccak-p does."""
    for rc in _RC[24 - rounds:]:
        c = [state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20] for x in range(5)]
        d = [c[(x - 1) % 5] ^ _rol(c[(x + 1) % 5], 1) for x in range(5)]
        a = [state[i] ^ d[i % 5] for i in range(25)]
        b = [0] * 25
        for x in range(5):
            for y in range(5):
                b[y + 5 * ((2 * x + 3 * y) % 5)] = _rol(a[x + 5 * y], _ROT[x][y])
        for y in range(5):
            row = b[5 * y:5 * y + 5]
            for x in range(5):
                state[x + 5 * y] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5])
        state[0] ^= rc


class KeccakXof:
    """Byte-oriented Keccak sponge: absorb once, squeeze any length.

    ``suffix`` is the domain-separation byte merged with the first pad bit
    (0x1F for SHAKE, 0x06 for SHA-3, 0x01 for raw Keccak).
    """

    def __init__(self, capacity_bits: int = 256, rounds: int = 24, suffix: int = 0x1F):
        if capacity_bits % 64 or not 0 < capacity_bits < 1600:
            raise ValueError("capacity must be a positive multiple of 64 below 1600")
        if not 1 <= rounds <= 24:
            raise ValueError("rounds must be in 1..24")
        self.capacity_bits = capacity_bits
        self.rate = (1600 - capacity_bits) // 8
        self.rounds = rounds
        self.suffix = suffix

    def digest(self, data: bytes, length: int) -> bytes:
        state = [0] * 25
        rate = self.rate
        padded = bytearray(data)
        padded.append(self.suffix)
        padded.extend(b"\x00" * (-len(padded) % rate))
        padded[-1] |= 0x80
        for off in range(0, len(padded), rate):
            chunk = padded[off:off + rate]
            for k in range(rate // 8):
                state[k] ^= int.from_bytes(chunk[8 * k:8 * k + 8], "little")
            keccak_f(state, self.rounds)
        out = bytearray()
        while True:
            out += b"".join(state[k].to_bytes(8, "little") for k in range(rate // 8))
            if len(out) >= length:
                return bytes(out[:length])
            keccak_f(state, self.rounds)

    def __repr__(self):
        return f"KeccakXof(capacity_bits={self.capacity_bits}, rounds={self.rounds}, suffix={self.suffix:#x})"


# Sponge parameters of the Lake Keyak instantiation: capacity 128, rate 1472.
LAKE_KEYAK_LIKE = dict(capacity_bits=128, rounds=24, suffix=0x1F)
