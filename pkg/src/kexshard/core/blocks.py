"""Block arithmetic over F2^b.

Single blocks are plain ``int`` values in ``[0, 2**bits)``.  Sequences of
blocks are ``numpy.uint8`` arrays of shape ``(count, nbytes)`` holding each
block big-endian; for widths that are not a multiple of 8 the unused top bits
of the first byte are always zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from kexshard.errors import ContractViolation, CounterOverflow

MAX_BITS = 128


@dataclass(frozen=True)
class BlockSpec:
    bits: int = 128

    def __post_init__(self):
        if not isinstance(self.bits, (int, np.integer)) or not 1 <= self.bits <= MAX_BITS:
            raise ContractViolation(f"block width must be in 1..{MAX_BITS} bits, got {self.bits!r}")

    @property
    def nbytes(self) -> int:
        return nbytes_for(self.bits)

    @property
    def mask(self) -> int:
        return (1 << self.bits) - 1

    @property
    def byte_aligned(self) -> bool:
        return self.bits % 8 == 0


def nbytes_for(bits: int) -> int:
    return (bits + 7) // 8


def check_block(x: int, bits: int) -> int:
    if not 0 <= x < (1 << bits):
        raise ContractViolation(f"value {x:#x} does not fit a {bits}-bit block")
    return x


def xor_blocks(a: int, b: int, bits: int) -> int:
    check_block(a, bits)
    check_block(b, bits)
    return a ^ b


def counter_add(iv: int, i: int, bits: int, mode: str = "xor") -> int:
    """Combine a block with the counter ``i``.

    The default ``"xor"`` mode XORs ``iv`` with the big-endian binary writing
    of ``i``; ``"add"`` is ordinary modular increment and only exists for
    interoperability experiments.
    """
    check_block(iv, bits)
    if i < 0:
        raise ContractViolation("counter must be non-negative")
    if i >= (1 << bits):
        raise CounterOverflow(f"counter {i} does not fit a {bits}-bit block")
    if mode == "xor":
        return iv ^ i
    if mode == "add":
        return (iv + i) & ((1 << bits) - 1)
    raise ContractViolation(f"unknown counter mode {mode!r}")


# -- conversions ------------------------------------------------------------

def int_to_bytes(x: int, bits: int) -> bytes:
    return check_block(x, bits).to_bytes(nbytes_for(bits), "big")


def bytes_to_int(data: bytes, bits: int) -> int:
    if len(data) != nbytes_for(bits):
        raise ContractViolation(f"expected {nbytes_for(bits)} bytes for a {bits}-bit block, got {len(data)}")
    return check_block(int.from_bytes(data, "big"), bits)


def blocks(values: Iterable[int], bits: int) -> np.ndarray:
    """Pack integers into a block array."""
    values = list(values)
    nb = nbytes_for(bits)
    out = np.zeros((len(values), nb), dtype=np.uint8)
    for k, v in enumerate(values):
        out[k] = np.frombuffer(int_to_bytes(int(v), bits), dtype=np.uint8)
    return out


def block_ints(rows: np.ndarray) -> list[int]:
    return [int.from_bytes(r.tobytes(), "big") for r in rows]


def empty_blocks(bits: int, count: int = 0) -> np.ndarray:
    return np.zeros((count, nbytes_for(bits)), dtype=np.uint8)


def rows_to_u64(rows: np.ndarray) -> np.ndarray:
    """Block array (width <= 64 bits) to a native uint64 vector."""
    nb = rows.shape[1]
    if nb > 8:
        raise ContractViolation("rows_to_u64 needs blocks of at most 64 bits")
    padded = np.zeros((rows.shape[0], 8), dtype=np.uint8)
    padded[:, 8 - nb:] = rows
    return padded.view(">u8").ravel().astype(np.uint64)


def u64_to_rows(values: np.ndarray, bits: int) -> np.ndarray:
    nb = nbytes_for(bits)
    if nb > 8:
        raise ContractViolation("u64_to_rows needs blocks of at most 64 bits")
    be = np.asarray(values, dtype=np.uint64).astype(">u8")
    return np.ascontiguousarray(be.view(np.uint8).reshape(-1, 8)[:, 8 - nb:])


def mask_rows(rows: np.ndarray, bits: int) -> np.ndarray:
    """Clear the bits above ``bits`` in place and return ``rows``."""
    spare = 8 * rows.shape[1] - bits
    if spare:
        rows[:, 0] &= (0xFF >> spare)
    return rows


def counter_rows(iv: int, start: int, count: int, bits: int, mode: str = "xor") -> np.ndarray:
    """Blocks ``counter_add(iv, i)`` for ``i`` in ``start .. start+count-1``."""
    check_block(iv, bits)
    if start < 0 or count < 0:
        raise ContractViolation("counter range must be non-negative")
    if count and start + count - 1 >= (1 << bits):
        raise CounterOverflow(f"counter {start + count - 1} does not fit a {bits}-bit block")
    if mode not in ("xor", "add"):
        raise ContractViolation(f"unknown counter mode {mode!r}")
    nb = nbytes_for(bits)
    if count == 0:
        return np.zeros((0, nb), dtype=np.uint8)
    idx = np.arange(start, start + count, dtype=np.uint64)
    if bits <= 64:
        mask = np.uint64((1 << bits) - 1)
        vals = (idx ^ np.uint64(iv)) if mode == "xor" else ((idx + np.uint64(iv)) & mask)
        return u64_to_rows(vals, bits)
    hi0 = np.uint64(iv >> 64)
    lo0 = np.uint64(iv & 0xFFFFFFFFFFFFFFFF)
    words = np.empty((count, 2), dtype=np.uint64)
    if mode == "xor":
        words[:, 0] = hi0
        words[:, 1] = idx ^ lo0
    else:
        lo = idx + lo0
        words[:, 1] = lo
        words[:, 0] = hi0 + (lo < lo0).astype(np.uint64)
        words[:, 0] &= np.uint64((1 << (bits - 64)) - 1)
    if np.little_endian:
        words.byteswap(inplace=True)
    rows = words.view(np.uint8).reshape(count, 16)
    return rows if nb == 16 else np.ascontiguousarray(rows[:, 16 - nb:])


# -- bulk XOR helpers -------------------------------------------------------

def word_view(rows: np.ndarray) -> np.ndarray:
    """A 2-D view of ``rows`` in the widest machine word that divides the block."""
    nb = rows.shape[1]
    if rows.flags.c_contiguous and rows.size:
        for dt, size in ((np.uint64, 8), (np.uint32, 4), (np.uint16, 2)):
            if nb % size == 0:
                return rows.view(dt)
    return rows


def fold_xor(rows: np.ndarray) -> np.ndarray:
    """XOR of all blocks as a single row (pairwise tree reduction)."""
    if rows.shape[0] == 0:
        return np.zeros(rows.shape[1], dtype=np.uint8)
    x = word_view(np.ascontiguousarray(rows))
    while x.shape[0] > 1:
        half = x.shape[0] // 2
        acc = np.bitwise_xor(x[:half], x[half:2 * half])
        if x.shape[0] % 2:
            acc[0] ^= x[2 * half]
        x = acc
    return x[0].view(np.uint8).copy()


def xor_row_into(rows: np.ndarray, row: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    """``rows XOR row`` broadcast over every block."""
    rows = np.ascontiguousarray(rows)
    if out is None:
        out = np.empty_like(rows)
    w, o = word_view(rows), word_view(out)
    r = np.ascontiguousarray(row, dtype=np.uint8).view(w.dtype)
    for j in range(w.shape[1]):
        np.bitwise_xor(w[:, j], r[j], out=o[:, j])
    return out


def as_rows(data: bytes | bytearray | memoryview, bits: int) -> np.ndarray:
    """View byte-aligned data as blocks, zero-filling a trailing partial block."""
    if bits % 8:
        raise ContractViolation(f"byte-oriented data needs a byte-aligned block width, got {bits}")
    nb = bits // 8
    raw = np.frombuffer(data, dtype=np.uint8)
    if raw.size % nb == 0:
        return raw.reshape(-1, nb)
    out = np.zeros((raw.size // nb + 1) * nb, dtype=np.uint8)
    out[:raw.size] = raw
    return out.reshape(-1, nb)


def same_width(*arrays: np.ndarray) -> int:
    widths = {a.shape[1] for a in arrays}
    if len(widths) != 1:
        raise ContractViolation(f"block arrays have mismatched widths {sorted(widths)}")
    return widths.pop()
