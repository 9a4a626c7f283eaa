"""Counter mode in which the IV itself travels encrypted as block 0.

``C_0 = E_K(IV)`` and ``C_i = P_i XOR E_K(IV xor bin(i))``.  Since counter 0
leaves the IV unchanged, the whole ciphertext is one pass of the cipher over
``IV xor bin(0..c-1)`` followed by an XOR with ``[0 || P]``.
"""

from __future__ import annotations

import numpy as np

from kexshard.core.blocks import blocks, block_ints, check_block, counter_rows, word_view
from kexshard.core.ciphers import BlockCipher
from kexshard.core.counters import OpCounters
from kexshard.errors import ContractViolation, CounterOverflow


def _check_count(c: int, bits: int) -> None:
    if c > (1 << bits):
        raise CounterOverflow(f"{c} ciphertext blocks exceed the {bits}-bit counter space")


def ctr_encrypt_rows(cipher: BlockCipher, key: int, iv: int, plaintext: np.ndarray,
                     counters: OpCounters | None = None, mode: str = "xor",
                     payload: int | None = None) -> np.ndarray:
    """Encrypt ``plaintext``; with ``payload`` larger than its length the
    missing trailing blocks count as zero without being materialized."""
    bits = cipher.bits
    check_block(iv, bits)
    m = plaintext.shape[0]
    payload = m if payload is None else payload
    if payload < m:
        raise ContractViolation(f"payload of {payload} blocks is shorter than the {m} plaintext blocks")
    c = payload + 1
    _check_count(c, bits)
    out = cipher.encrypt_rows(key, counter_rows(iv, 0, c, bits, mode))
    if not out.flags.writeable:
        out = out.copy()
    if m:
        body = word_view(out[1:m + 1])
        np.bitwise_xor(body, word_view(np.ascontiguousarray(plaintext)), out=body)
    if counters is not None:
        counters.cipher_block_calls += c
        counters.passes += 1
    return out


def ctr_decrypt_rows(cipher: BlockCipher, key: int, ciphertext: np.ndarray,
                     counters: OpCounters | None = None, mode: str = "xor") -> np.ndarray:
    bits = cipher.bits
    c = ciphertext.shape[0]
    if c < 1:
        raise ContractViolation("ciphertext needs at least the encrypted IV block")
    _check_count(c, bits)
    iv = int.from_bytes(cipher.decrypt_rows(key, ciphertext[:1]).tobytes(), "big")
    pad = cipher.encrypt_rows(key, counter_rows(iv, 1, c - 1, bits, mode))
    if counters is not None:
        counters.cipher_block_calls += c
        counters.passes += 1
    return np.bitwise_xor(ciphertext[1:], pad)


def ctr_encrypt(cipher: BlockCipher, key: int, iv: int, plaintext: list[int]) -> list[int]:
    return block_ints(ctr_encrypt_rows(cipher, key, iv, blocks(plaintext, cipher.bits)))


def ctr_decrypt(cipher: BlockCipher, key: int, ciphertext: list[int]) -> list[int]:
    return block_ints(ctr_decrypt_rows(cipher, key, blocks(ciphertext, cipher.bits)))


def recover_iv(cipher: BlockCipher, key: int, c0: int) -> int:
    return cipher.decrypt(key, c0)
