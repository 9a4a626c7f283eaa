"""Linear post-processing of a ciphertext over F2, and the matrices behind it.

A transform acts on the row vector of blocks ``C = (C_0, ..., C_{c-1})`` as
``C' = C . M`` where ``M`` is a bit matrix: output block ``j`` is the XOR of
the input blocks ``i`` with ``M[i, j] = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kexshard.core.blocks import fold_xor, same_width, word_view, xor_row_into
from kexshard.core.counters import OpCounters
from kexshard.errors import ContractViolation, EvenLengthRequired


@dataclass(frozen=True, eq=False)
class BitMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.uint8)
        if a.ndim != 2 or 0 in a.shape:
            raise ContractViolation("a bit matrix needs positive row and column counts")
        if np.any(a > 1):
            raise ContractViolation("bit matrix entries must be 0 or 1")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]

    def select_columns(self, idx) -> "BitMatrix":
        return BitMatrix(self.entries[:, list(idx)])

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ContractViolation(f"cannot multiply {self.shape} by {other.shape}")
        return BitMatrix((self.entries.astype(np.int64) @ other.entries.astype(np.int64)) & 1)

    def __eq__(self, other):
        return isinstance(other, BitMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.shape, self.entries.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __repr__(self):
        return f"BitMatrix({self.tolist()})"

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls(np.eye(size, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))


# -- F2 elimination over int bitsets ----------------------------------------

def _column_bits(m: BitMatrix) -> list[int]:
    out = []
    for j in range(m.cols):
        v = 0
        for i, bit in enumerate(m.entries[:, j]):
            if bit:
                v |= 1 << i
        out.append(v)
    return out


def _basis(vectors: list[int]) -> dict[int, int]:
    """Reduced echelon basis keyed by leading bit."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return basis


def rank(m: BitMatrix) -> int:
    return len(_basis(_column_bits(m)))


def column_equivalent(m1: BitMatrix, m2: BitMatrix) -> bool:
    """True iff ``m1 . U = m2`` for some invertible U, i.e. equal column spaces."""
    if m1.shape != m2.shape:
        raise ContractViolation(f"shape mismatch {m1.shape} vs {m2.shape}")
    c1, c2 = _column_bits(m1), _column_bits(m2)
    r1, r2 = len(_basis(c1)), len(_basis(c2))
    return r1 == r2 == len(_basis(c1 + c2))


def is_invertible(m: BitMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


# -- the matrices ------------------------------------------------------------

def mat_ssake(c: int) -> BitMatrix:
    """c x (c-1); column j has ones in rows j and j+1."""
    if c < 2:
        raise ContractViolation("the chain matrix needs c >= 2")
    m = np.zeros((c, c - 1), dtype=np.uint8)
    j = np.arange(c - 1)
    m[j, j] = 1
    m[j + 1, j] = 1
    return BitMatrix(m)


def mat_ssake_reduced(c: int) -> BitMatrix:
    """The chain matrix after prefix-summing its columns: a row of ones over I_{c-1}."""
    if c < 2:
        raise ContractViolation("the chain matrix needs c >= 2")
    m = np.zeros((c, c - 1), dtype=np.uint8)
    m[0, :] = 1
    m[1:, :] = np.eye(c - 1, dtype=np.uint8)
    return BitMatrix(m)


def mat_bastion(c: int) -> BitMatrix:
    """c x c, zero diagonal, ones elsewhere."""
    if c < 1:
        raise ContractViolation("matrix size must be positive")
    return BitMatrix(np.ones((c, c), dtype=np.uint8) - np.eye(c, dtype=np.uint8))


def adversary_columns(c: int, s: int, t: int) -> list[int]:
    if not 0 <= s < t < c:
        raise ContractViolation(f"need 0 <= s < t < c, got s={s}, t={t}, c={c}")
    return [i for i in range(c) if i not in (s, t)]


def bastion_pivot(c: int, s: int, t: int) -> int:
    return adversary_columns(c, s, t)[0]


def bastion_reduced_view(c: int, s: int, t: int) -> BitMatrix:
    """Column operations on the c-2 visible columns of the Bastion matrix.

    With pivot ``u`` (smallest visible index): every other visible column
    becomes ``col_i + col_u``, then column ``u`` becomes ``col_u`` plus the sum
    of the new columns.  Columns stay in ascending index order.  The pivot
    column works out to ``e_s + e_t + (c-3) e_u``.
    """
    if c < 4:
        raise ContractViolation("the reduced view needs c >= 4")
    visible = adversary_columns(c, s, t)
    u = visible[0]
    base = mat_bastion(c).entries.astype(np.uint8)
    cols = {i: base[:, i].copy() for i in visible}
    for i in visible[1:]:
        cols[i] ^= cols[u]
    for i in visible[1:]:
        cols[u] ^= cols[i]
    return BitMatrix(np.stack([cols[i] for i in visible], axis=1))


# -- applying matrices to block vectors --------------------------------------

def apply_matrix(rows: np.ndarray, m: BitMatrix, counters: OpCounters | None = None) -> np.ndarray:
    """Blockwise row-vector times matrix: ``out[j] = XOR_{i: m[i,j]} rows[i]``."""
    if rows.shape[0] != m.rows:
        raise ContractViolation(f"{rows.shape[0]} blocks do not match a {m.rows}-row matrix")
    out = np.zeros((m.cols, rows.shape[1]), dtype=np.uint8)
    ops = 0
    for j in range(m.cols):
        sel = np.flatnonzero(m.entries[:, j])
        if sel.size:
            out[j] = fold_xor(rows[sel])
            ops += sel.size - 1
    if counters is not None:
        counters.xor_block_ops += ops
    return out


def ssake_chain(rows: np.ndarray, counters: OpCounters | None = None) -> np.ndarray:
    """``C'_i = C_{i-1} XOR C_i`` for i = 1..c-1."""
    c = rows.shape[0]
    if c < 2:
        raise ContractViolation("chaining needs at least two blocks")
    rows = np.ascontiguousarray(rows)
    out = np.empty((c - 1, rows.shape[1]), dtype=np.uint8)
    np.bitwise_xor(word_view(rows[1:]), word_view(rows[:-1]), out=word_view(out))
    if counters is not None:
        counters.xor_block_ops += c - 1
    return out


def ssake_unchain(c0: np.ndarray, chained: np.ndarray, counters: OpCounters | None = None) -> np.ndarray:
    """Rebuild ``C`` from ``C_0`` and the chained blocks.

    ``C_i`` is ``C_0`` XOR the prefix sum of ``chained``, computed as an
    accumulate so it runs in one vectorized pass.
    """
    c0 = np.asarray(c0, dtype=np.uint8).reshape(1, -1)
    if chained.shape[0]:
        same_width(c0, chained)
    out = np.empty((chained.shape[0] + 1, c0.shape[1]), dtype=np.uint8)
    out[0] = c0[0]
    if chained.shape[0]:
        out[1:] = chained
        w = word_view(out)
        np.bitwise_xor.accumulate(w, axis=0, out=w)
    if counters is not None:
        counters.xor_block_ops += chained.shape[0]
    return out


def bastion_transform(rows: np.ndarray, counters: OpCounters | None = None) -> np.ndarray:
    """``out_i = T XOR C_i`` with ``T`` the XOR of all blocks.  Involutive on even c."""
    c = rows.shape[0]
    if c < 2 or c % 2:
        raise EvenLengthRequired(f"the all-ones-minus-identity transform needs an even c >= 2, got {c}")
    total = fold_xor(rows)
    out = xor_row_into(rows, total)
    if counters is not None:
        counters.xor_block_ops += 2 * c - 1
    return out
