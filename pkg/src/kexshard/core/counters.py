from __future__ import annotations

import time
from contextlib import contextmanager, nullcontext
from dataclasses import asdict, dataclass, field


@dataclass
class OpCounters:
    """Work done by one share or reconstruct call.

    ``xor_block_ops`` counts block XORs performed after encryption (chain,
    matrix and secret-sharing work), not the XOR inside the CTR pad.
    ``phase_seconds`` accumulates wall time per named phase.
    """

    xor_block_ops: int = 0
    cipher_block_calls: int = 0
    ro_blocks_generated: int = 0
    passes: int = 0
    phase_seconds: dict = field(default_factory=dict)

    @contextmanager
    def timed(self, phase: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.phase_seconds[phase] = self.phase_seconds.get(phase, 0.0) + time.perf_counter() - t0

    def as_dict(self) -> dict:
        return asdict(self)


def timed(counters: OpCounters | None, phase: str):
    return counters.timed(phase) if counters is not None else nullcontext()
