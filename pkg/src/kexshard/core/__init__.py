from kexshard.core.blocks import (
    BlockSpec,
    block_ints,
    blocks,
    bytes_to_int,
    counter_add,
    counter_rows,
    int_to_bytes,
    xor_blocks,
)
from kexshard.core.ciphers import (
    Aes128Cipher,
    Aes256WideCipher,
    BlockCipher,
    ToyCipher,
    ToyPermutation,
    ToyWideCipher,
    WideBlockCipher,
    XorTestCipher,
    XorWideTestCipher,
    build_toy_permutation,
    linear_toy_permutation,
)
from kexshard.core.keccak import KeccakXof
from kexshard.core.oracles import CounterModeOracle, RandomOracleStream, SpongeOracle, lake_keyak_sponge
from kexshard.core.rng import DeterministicRng, SystemRng

__all__ = [
    "Aes128Cipher",
    "Aes256WideCipher",
    "BlockCipher",
    "BlockSpec",
    "CounterModeOracle",
    "DeterministicRng",
    "SystemRng",
    "KeccakXof",
    "RandomOracleStream",
    "SpongeOracle",
    "ToyCipher",
    "ToyPermutation",
    "ToyWideCipher",
    "WideBlockCipher",
    "XorTestCipher",
    "XorWideTestCipher",
    "block_ints",
    "blocks",
    "build_toy_permutation",
    "bytes_to_int",
    "counter_add",
    "counter_rows",
    "int_to_bytes",
    "lake_keyak_sponge",
    "linear_toy_permutation",
    "xor_blocks",
]
