"""Indistinguishability games under key exposure, and the statistics behind them.

Two games are provided.  In the share game the adversary picks two equal
length plaintexts, sees ``n - 1`` shares of one of them (chosen adaptively)
together with the encryption key, and guesses which.  In the block game she
instead sees all but ``lam`` blocks of the dispersed output.

Everything runs at toy block widths so that brute-force adversaries and
exhaustive statistics stay cheap.  Win rates are reported with a binomial
standard error; "non-negligible" means more than three standard errors away
from one half.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.stats import chi2

from kexshard.core.blocks import check_block, counter_add, empty_blocks, rows_to_u64, u64_to_rows
from kexshard.core.ciphers import BlockCipher, ToyPermutation
from kexshard.core.rng import DeterministicRng
from kexshard.errors import ContractViolation, InsufficientData
from kexshard.schemes import FragmentationPolicy, Scheme, SchemeId, Secrets, make_scheme
from kexshard.transforms import (
    BitMatrix,
    adversary_columns,
    bastion_reduced_view,
    column_equivalent,
    mat_bastion,
    mat_ssake,
    mat_ssake_reduced,
    rank,
)

SAKE = "sake"
CAKE = "cake"


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class AdvantageReport:
    game: str
    scheme: str
    adversary: str
    wins: int
    trials: int
    toy_bits: int
    seed: int

    @property
    def win_rate(self) -> float:
        return self.wins / self.trials

    @property
    def standard_error(self) -> float:
        p = self.win_rate
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def advantage(self) -> float:
        return self.win_rate - 0.5

    @property
    def within_3se(self) -> bool:
        return abs(self.advantage) <= 3 * self.standard_error

    @property
    def verdict(self) -> str:
        return "negligible" if self.within_3se else "non-negligible"

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(win_rate=self.win_rate, standard_error=self.standard_error, verdict=self.verdict)
        return d

    def to_text(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self.as_dict().items())


@dataclass(frozen=True)
class GameConfig:
    scheme_id: SchemeId = SchemeId.SSAKE
    toy_bits: int = 12
    trials: int = 1000
    n: int = 4
    plaintext_blocks: int = 7
    lam: int | None = None
    rng_seed: int = 0
    policy: FragmentationPolicy = FragmentationPolicy.CONTIGUOUS
    key: int | None = None

    def __post_init__(self):
        if self.trials < 100:
            raise ContractViolation(f"games need at least 100 trials, got {self.trials}")
        if not 1 <= self.toy_bits <= 20 and self.toy_bits != 128:
            raise ContractViolation(f"toy width must be in 1..20 bits, got {self.toy_bits}")
        if self.n < 2:
            raise ContractViolation("games need at least two shares")
        if self.plaintext_blocks < 1:
            raise ContractViolation("games need at least one plaintext block")


# -- what the adversary gets -------------------------------------------------------

@dataclass
class GameContext:
    game: str
    scheme: Scheme
    n: int
    bits: int
    plaintext_blocks: int
    policy: FragmentationPolicy
    dispersed_blocks: int
    lam: int | None = None

    @property
    def frag_blocks(self) -> int:
        return self.dispersed_blocks // self.n

    @property
    def cipher(self) -> BlockCipher | None:
        return getattr(self.scheme, "cipher", None)

    def row_of(self, share_index: int, offset: int) -> int:
        """Position inside the dispersed vector of block ``offset`` of fragment ``share_index``."""
        if self.policy is FragmentationPolicy.INTERLEAVED:
            return offset * self.n + share_index - 1
        return (share_index - 1) * self.frag_blocks + offset

    def block_layout(self) -> list[tuple[int, int | None]]:
        """Positions of the block game: ``(share, None)`` for a share block,
        ``(share, offset)`` for a fragment block, shares in index order."""
        out: list[tuple[int, int | None]] = []
        for i in range(1, self.n + 1):
            if self.scheme.has_iv_share:
                out.append((i, None))
            out.extend((i, j) for j in range(self.frag_blocks))
        return out

    @property
    def visible_blocks(self) -> int:
        return len(self.block_layout()) - (self.lam or 0)


@dataclass
class PartialView:
    """What one adversary saw: dispersed rows (zero where unseen) plus a mask."""

    rows: np.ndarray
    known: np.ndarray
    iv_shares: dict[int, int]
    key: object

    def known_rows(self) -> np.ndarray:
        return self.rows[self.known]

    def row(self, pos: int) -> int | None:
        if pos >= self.known.size or not self.known[pos]:
            return None
        return int.from_bytes(self.rows[pos].tobytes(), "big")


# -- adversaries -------------------------------------------------------------------

class Adversary:
    """Base adversary: commits to shares 1..n-1 and guesses at random."""

    name = "random-guess"

    def choose_plaintexts(self, ctx: GameContext, rng) -> tuple[np.ndarray, np.ndarray]:
        p0 = empty_blocks(ctx.bits, ctx.plaintext_blocks)
        p1 = p0.copy()
        p1[0, -1] = 1
        return p0, p1

    def share_order(self, ctx: GameContext, rng) -> list[int]:
        return list(range(1, ctx.n + 1))

    def next_share(self, ctx: GameContext, revealed: dict, rng) -> int:
        """Pick the next share to see; may depend on what was revealed so far."""
        for i in self.share_order(ctx, rng):
            if i not in revealed:
                return i
        raise ContractViolation("adversary has no share left to ask for")

    def choose_blocks(self, ctx: GameContext, rng) -> list[int]:
        total = len(ctx.block_layout())
        return sorted(int(x) for x in rng.permutation(total)[:ctx.visible_blocks])

    def guess(self, ctx: GameContext, view: PartialView, rng) -> int:
        return rng.bit()


class RandomGuessAdversary(Adversary):
    name = "random-guess"


def _first_plain_block(ctx: GameContext, view: PartialView, secret: int | None) -> int | None:
    """Plaintext block 0 from the visible rows, treating unseen rows as zero."""
    try:
        rows = ctx.scheme.invert(view.rows.copy(), secret)
    except ContractViolation:
        return None
    return int.from_bytes(rows[0].tobytes(), "big")


def _decide(p_first: int | None, rng) -> int:
    if p_first == 0:
        return 0
    if p_first == 1:
        return 1
    return rng.bit()


class PrefixAdversary(Adversary):
    """Reads the first two dispersed blocks as ``E(IV)`` and ``C_1`` and decrypts ``P_1``."""

    name = "prefix"

    def guess(self, ctx, view, rng):
        c0, c1 = view.row(0), view.row(1)
        cipher = ctx.cipher
        if cipher is None or c0 is None or c1 is None:
            return rng.bit()
        iv = cipher.decrypt(view.key, c0)
        return _decide(c1 ^ cipher.encrypt(view.key, counter_add(iv, 1, ctx.bits)), rng)


def ctr_distinguisher(cipher: BlockCipher, key: int, i: int, j: int, c_i: int, c_j: int, p_i: int, p_j: int) -> str:
    """'CTR' when two blocks are consistent with counter mode at positions i, j."""
    if i == j:
        raise ContractViolation("the two positions must differ")
    bits = cipher.bits
    lhs = cipher.decrypt(key, check_block(c_i ^ p_i, bits)) ^ cipher.decrypt(key, check_block(c_j ^ p_j, bits))
    return "CTR" if lhs == (i ^ j) else "RANDOM"


class CtrPairAdversary(Adversary):
    """Tests the counter relation between dispersed blocks 1 and 2 under each candidate plaintext."""

    name = "ctr-pair"

    def choose_plaintexts(self, ctx, rng):
        p0 = empty_blocks(ctx.bits, ctx.plaintext_blocks)
        p1 = np.full_like(p0, 0xFF)
        spare = 8 * p1.shape[1] - ctx.bits
        if spare:
            p1[:, 0] &= 0xFF >> spare
        self._plain = (p0, p1)
        return p0, p1

    def guess(self, ctx, view, rng):
        c1, c2 = view.row(1), view.row(2)
        cipher = ctx.cipher
        if cipher is None or c1 is None or c2 is None or ctx.plaintext_blocks < 2:
            return rng.bit()
        hits = []
        for b, p in enumerate(self._plain):
            p1 = int.from_bytes(p[0].tobytes(), "big")
            p2 = int.from_bytes(p[1].tobytes(), "big")
            if ctr_distinguisher(cipher, view.key, 1, 2, c1, c2, p1, p2) == "CTR":
                hits.append(b)
        return hits[0] if len(hits) == 1 else rng.bit()


class AffineStructureAdversary(Adversary):
    """Re-runs the scheme with the exposed key and a random IV on each
    candidate plaintext; the candidate whose difference to the view is
    the same in every visible row wins.  Succeeds only against linear
    ciphers, which makes it the negative control for the toy permutations."""

    name = "affine"

    def choose_plaintexts(self, ctx, rng):
        self._plain = super().choose_plaintexts(ctx, rng)
        return self._plain

    def guess(self, ctx, view, rng):
        seen = view.known_rows()
        if seen.shape[0] < 2:
            return rng.bit()
        hits = []
        for b, p in enumerate(self._plain):
            padded, _ = ctx.scheme.pad_plaintext(p, ctx.n)
            r = rng.block(ctx.bits)
            sim = ctx.scheme.transform(padded, Secrets(iv=r, message_key=view.key))
            delta = np.bitwise_xor(sim[view.known], seen)
            if np.all(delta == delta[0]):
                hits.append(b)
        return hits[0] if len(hits) == 1 else rng.bit()


class IvShareAdversary(Adversary):
    """XORs the share blocks it holds into a candidate secret and decrypts block 1."""

    name = "iv-share"

    def guess(self, ctx, view, rng):
        secret = 0
        for v in view.iv_shares.values():
            secret ^= v
        if not ctx.scheme.has_iv_share:
            secret = None
        return _decide(_first_plain_block(ctx, view, secret), rng)


class AllIvSharesAdversary(IvShareAdversary):
    """Block-game adversary: takes every share block and hides only the last
    fragment block, so the secret is complete and block 1 decrypts."""

    name = "all-iv-shares"

    def choose_blocks(self, ctx, rng):
        layout = ctx.block_layout()
        share_pos = [k for k, (_, off) in enumerate(layout) if off is None]
        frag_pos = [k for k, (_, off) in enumerate(layout) if off is not None]
        budget = ctx.visible_blocks
        return sorted(share_pos + frag_pos[:max(0, budget - len(share_pos))])[:budget]


class ExhaustiveAdversary(Adversary):
    """Tries ``budget`` distinct IV candidates against both plaintexts.

    With the full budget ``2**bits`` this breaks every scheme at toy widths;
    with ``q`` candidates its expected win rate is ``1/2 + q / 2**(bits+1)``.
    """

    name = "exhaustive"

    def __init__(self, budget: int = 64):
        if budget < 1:
            raise ContractViolation("budget must be positive")
        self.budget = budget

    def expected_win_rate(self, bits: int) -> float:
        return 0.5 + min(self.budget, 1 << bits) / (1 << (bits + 1))

    def choose_plaintexts(self, ctx, rng):
        self._plain = super().choose_plaintexts(ctx, rng)
        self._padded = [ctx.scheme.pad_plaintext(p, ctx.n)[0] for p in self._plain]
        return self._plain

    def choose_blocks(self, ctx, rng):
        layout = ctx.block_layout()
        frag_pos = [k for k, (_, off) in enumerate(layout) if off is not None]
        share_pos = [k for k, (_, off) in enumerate(layout) if off is None]
        budget = ctx.visible_blocks
        return sorted((frag_pos + share_pos)[:budget])

    def guess(self, ctx, view, rng):
        size = 1 << ctx.bits
        if self.budget >= size:
            candidates = np.arange(size)
        else:
            candidates = rng.gen.choice(size, self.budget, replace=False)
        seen = view.known_rows()
        if seen.shape[0] == 0:
            return rng.bit()
        for r in candidates:
            hits = []
            for b, padded in enumerate(self._padded):
                sim = ctx.scheme.transform(padded, Secrets(iv=int(r), message_key=view.key))
                if np.array_equal(sim[view.known], seen):
                    hits.append(b)
            if len(hits) == 1:
                return hits[0]
        return rng.bit()


ADVERSARIES: dict[str, Callable[[], Adversary]] = {
    "random-guess": RandomGuessAdversary,
    "prefix": PrefixAdversary,
    "ctr-pair": CtrPairAdversary,
    "affine": AffineStructureAdversary,
    "iv-share": IvShareAdversary,
    "all-iv-shares": AllIvSharesAdversary,
    "exhaustive": ExhaustiveAdversary,
}

# Adversaries that make a polynomial number of cipher queries.
POLYNOMIAL_ADVERSARIES = ("random-guess", "prefix", "ctr-pair", "affine", "iv-share")


def make_adversary(name: str, **kw) -> Adversary:
    try:
        return ADVERSARIES[name](**kw)
    except KeyError:
        raise ContractViolation(f"unknown adversary {name!r}; choose from {sorted(ADVERSARIES)}") from None


# -- game runners ------------------------------------------------------------------

def _game_scheme(config: GameConfig, key_rng: DeterministicRng) -> Scheme:
    key = config.key if config.key is not None else key_rng.block(config.toy_bits)
    return make_scheme(config.scheme_id, config.toy_bits, key=key, family_seed=config.rng_seed)


def _dispersed_length(scheme: Scheme, config: GameConfig) -> int:
    p, _ = scheme.layout(config.plaintext_blocks, config.n)
    return len(scheme.transform(empty_blocks(config.toy_bits, p), Secrets(0, 0)))


def _context(game: str, scheme: Scheme, config: GameConfig) -> GameContext:
    return GameContext(game, scheme, config.n, config.toy_bits, config.plaintext_blocks, config.policy,
                       _dispersed_length(scheme, config), config.lam)


def _challenge(ctx: GameContext, scheme: Scheme, adversary: Adversary, arng, orng, config: GameConfig):
    p0, p1 = adversary.choose_plaintexts(ctx, arng)
    if p0.shape != p1.shape or p0.shape[0] != config.plaintext_blocks:
        raise ContractViolation("challenge plaintexts must both have the configured block count")
    b = orng.bit()
    result = scheme.share_blocks((p0, p1)[b], config.n, orng, config.policy)
    return b, result


def _view_from_shares(ctx: GameContext, shares, key) -> PartialView:
    rows = empty_blocks(ctx.bits, ctx.dispersed_blocks)
    known = np.zeros(ctx.dispersed_blocks, dtype=bool)
    ivs = {}
    for s in shares:
        frag = s.fragment_rows()
        for j in range(frag.shape[0]):
            pos = ctx.row_of(s.index, j)
            rows[pos] = frag[j]
            known[pos] = True
        if s.iv_share is not None:
            ivs[s.index] = s.iv_share
    return PartialView(rows, known, ivs, key)


def _trial_streams(seed: int, trials: int):
    root = DeterministicRng(seed)
    key_rng, trials_root = root.spawn(2)
    return key_rng, trials_root.spawn(trials)


def run_sake_game(adversary: Adversary, config: GameConfig, scheme: Scheme | None = None) -> AdvantageReport:
    """Share game: n-1 adaptively chosen shares plus the exposed key.

    ``scheme`` overrides the toy-backend scheme built from ``config``.
    """
    key_rng, streams = _trial_streams(config.rng_seed, config.trials)
    scheme = scheme or _game_scheme(config, key_rng)
    ctx = _context(SAKE, scheme, config)
    wins = 0
    for stream in streams:
        arng, orng = stream.spawn(2)
        b, result = _challenge(ctx, scheme, adversary, arng, orng, config)
        revealed: dict[int, object] = {}
        while len(revealed) < config.n - 1:
            i = adversary.next_share(ctx, revealed, arng)
            if not 1 <= i <= config.n or i in revealed:
                raise ContractViolation(f"adversary asked for invalid share {i}")
            revealed[i] = result.shares[i - 1]
        view = _view_from_shares(ctx, revealed.values(), scheme.exposed_key(result.secrets))
        wins += int(adversary.guess(ctx, view, arng) == b)
    return AdvantageReport(SAKE, scheme.scheme_id.slug, adversary.name, wins, config.trials, config.toy_bits,
                           config.rng_seed)


def run_cake_game(adversary: Adversary, config: GameConfig, scheme: Scheme | None = None) -> AdvantageReport:
    """Block game: all but ``lam`` blocks of the dispersed output plus the exposed key."""
    if config.lam is None or config.lam < 0:
        raise ContractViolation("the block game needs lam >= 0")
    key_rng, streams = _trial_streams(config.rng_seed, config.trials)
    scheme = scheme or _game_scheme(config, key_rng)
    ctx = _context(CAKE, scheme, config)
    layout = ctx.block_layout()
    if config.lam > len(layout):
        raise ContractViolation(f"lam={config.lam} exceeds the {len(layout)} dispersed blocks")
    wins = 0
    for stream in streams:
        arng, orng = stream.spawn(2)
        b, result = _challenge(ctx, scheme, adversary, arng, orng, config)
        picked = adversary.choose_blocks(ctx, arng)
        if len(set(picked)) != len(picked) or len(picked) > ctx.visible_blocks \
                or any(not 0 <= k < len(layout) for k in picked):
            raise ContractViolation("adversary picked an invalid block set")
        rows = empty_blocks(ctx.bits, ctx.dispersed_blocks)
        known = np.zeros(ctx.dispersed_blocks, dtype=bool)
        ivs = {}
        for k in picked:
            share_index, off = layout[k]
            share = result.shares[share_index - 1]
            if off is None:
                ivs[share_index] = share.iv_share
            else:
                pos = ctx.row_of(share_index, off)
                rows[pos] = share.fragment_rows()[off]
                known[pos] = True
        view = PartialView(rows, known, ivs, scheme.exposed_key(result.secrets))
        wins += int(adversary.guess(ctx, view, arng) == b)
    return AdvantageReport(CAKE, scheme.scheme_id.slug, adversary.name, wins, config.trials, config.toy_bits,
                           config.rng_seed)


# -- uniformity statistics ---------------------------------------------------------

@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    threshold: float
    samples: int
    cells: int

    @property
    def passed(self) -> bool:
        return self.statistic < self.threshold

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def chi_square_uniformity(samples, toy_bits: int, exclude_zero: bool = False, quantile: float = 0.99) -> ChiSquareResult:
    """Pearson test of ``samples`` against the uniform law on ``[0, 2**toy_bits)``.

    With ``exclude_zero`` the support is the nonzero values only, which is the
    exact law of an XOR of two distinct outputs of a permutation.
    """
    x = np.asarray(samples, dtype=np.int64).ravel()
    size = 1 << toy_bits
    cells = size - 1 if exclude_zero else size
    if x.size < 50 * cells:
        raise InsufficientData(f"need at least {50 * cells} samples for {cells} cells, got {x.size}")
    if x.size and (x.min() < 0 or x.max() >= size):
        raise ContractViolation("samples fall outside the block space")
    counts = np.bincount(x, minlength=size).astype(np.float64)
    if exclude_zero:
        zero_hits = counts[0]
        counts = counts[1:]
    expected = x.size / cells
    stat = float(((counts - expected) ** 2).sum() / expected)
    if exclude_zero and zero_hits:
        stat = math.inf
    dof = cells - 1
    return ChiSquareResult(stat, dof, float(chi2.ppf(quantile, dof)), int(x.size), cells)


def _distinct_uniform(count: int, k: int, bits: int, rng) -> np.ndarray:
    """``count`` rows of ``k`` distinct uniform values: the outputs of a fresh
    random permutation on ``k`` distinct inputs, sampled lazily."""
    size = 1 << bits
    if k > size:
        raise ContractViolation(f"cannot draw {k} distinct values from {size}")
    out = rng.integers(0, size, size=(count, k))
    while True:
        s = np.sort(out, axis=1)
        bad = np.flatnonzero((s[:, 1:] == s[:, :-1]).any(axis=1)) if k > 1 else np.array([], dtype=int)
        if bad.size == 0:
            return out
        out[bad] = rng.integers(0, size, size=(bad.size, k))


def sample_diff_vector(perm: ToyPermutation, c: int, rng) -> list[int]:
    """One draw of ``perm(r) ^ perm(r ^ i)`` for i = 1..c-1, r uniform."""
    if c > (1 << perm.bits):
        raise ContractViolation(f"c={c} exceeds the {perm.bits}-bit block space")
    r = rng.block(perm.bits)
    f = perm.forward
    return [int(f[r] ^ f[counter_add(r, i, perm.bits)]) for i in range(1, c)]


def sample_diff_vectors(perm: ToyPermutation, c: int, count: int, rng) -> np.ndarray:
    """``count`` draws under one fixed permutation, shape ``(count, c-1)``."""
    if c > (1 << perm.bits):
        raise ContractViolation(f"c={c} exceeds the {perm.bits}-bit block space")
    r = rng.integers(0, 1 << perm.bits, size=count)
    f = perm.forward
    idx = np.arange(1, c)
    return f[r][:, None] ^ f[r[:, None] ^ idx[None, :]]


def sample_diff_vectors_ideal(bits: int, c: int, count: int, rng) -> np.ndarray:
    """Same law with a fresh random permutation for every draw."""
    v = _distinct_uniform(count, c, bits, rng)
    return v[:, :1] ^ v[:, 1:]


def _pad_terms(c: int, s: int, t: int) -> tuple[int, list[int]]:
    adversary_columns(c, s, t)
    u = min(i for i in range(c) if i not in (s, t))
    rest = [i for i in range(c) if i not in (s, t, u)]
    return u, rest


def _pad_from_values(vals: np.ndarray, c: int, s: int, t: int) -> np.ndarray:
    """``vals[:, i]`` holds the encryption of ``C_0 + i`` (``C_0`` itself at i=0)."""
    u, rest = _pad_terms(c, s, t)
    out = np.empty((vals.shape[0], c - 2), dtype=np.int64)
    out[:, 0] = vals[:, s] ^ vals[:, t] ^ vals[:, u]
    for k, i in enumerate(rest, start=1):
        out[:, k] = vals[:, u] ^ vals[:, i]
    return out


def sample_pad_bastion(cipher: BlockCipher, key: int, c: int, s: int, t: int, rng) -> list[int]:
    """One draw of the Bastion pad vector for hidden columns ``s < t``."""
    bits = cipher.bits
    if c > (1 << bits):
        raise ContractViolation(f"c={c} exceeds the {bits}-bit block space")
    c0 = rng.block(bits)
    vals = np.array([[c0] + [cipher.encrypt(key, c0 ^ i) for i in range(1, c)]], dtype=np.int64)
    return [int(v) for v in _pad_from_values(vals, c, s, t)[0]]


def sample_pad_bastion_many(cipher: BlockCipher, key: int, c: int, s: int, t: int, count: int, rng) -> np.ndarray:
    bits = cipher.bits
    if c > (1 << bits) or bits > 64:
        raise ContractViolation("vectorized pad sampling needs c <= 2**bits and bits <= 64")
    c0 = rng.integers(0, 1 << bits, size=count).astype(np.uint64)
    vals = np.empty((count, c), dtype=np.int64)
    vals[:, 0] = c0
    for i in range(1, c):
        enc = cipher.encrypt_rows(key, u64_to_rows(c0 ^ np.uint64(i), bits))
        vals[:, i] = rows_to_u64(enc).astype(np.int64)
    return _pad_from_values(vals, c, s, t)


def sample_pad_bastion_ideal(bits: int, c: int, s: int, t: int, count: int, rng) -> np.ndarray:
    """Pad vectors with a fresh random permutation per draw."""
    vals = np.empty((count, c), dtype=np.int64)
    vals[:, 0] = rng.integers(0, 1 << bits, size=count)
    vals[:, 1:] = _distinct_uniform(count, c - 1, bits, rng)
    return _pad_from_values(vals, c, s, t)


def pad_coordinate_nonzero(c: int, s: int, t: int) -> list[bool]:
    """Per pad coordinate: True when it is the XOR of two distinct permutation
    outputs (never zero), False when it is exactly uniform."""
    u, rest = _pad_terms(c, s, t)
    return [False] + [u != 0 and i != 0 for i in rest]


def diff_uniformity(samples: np.ndarray, bits: int, exact_support: bool) -> list[ChiSquareResult]:
    return [chi_square_uniformity(samples[:, k], bits, exclude_zero=exact_support) for k in range(samples.shape[1])]


def pad_uniformity(samples: np.ndarray, bits: int, c: int, s: int, t: int, exact_support: bool) -> list[ChiSquareResult]:
    nonzero = pad_coordinate_nonzero(c, s, t)
    return [chi_square_uniformity(samples[:, k], bits, exclude_zero=exact_support and nonzero[k])
            for k in range(samples.shape[1])]


# -- matrix reductions -------------------------------------------------------------

@dataclass(frozen=True)
class MatrixCheck:
    name: str
    c: int
    passed: bool
    detail: str = ""


def matrix_checks(c_values: Sequence[int]) -> list[MatrixCheck]:
    out = []
    for c in c_values:
        if c >= 3:
            ok = column_equivalent(mat_ssake(c), mat_ssake_reduced(c))
            out.append(MatrixCheck("chain-reduction", c, ok))
            out.append(MatrixCheck("chain-rank", c, rank(mat_ssake(c)) == c - 1))
        if c >= 4:
            bad = []
            for s in range(c):
                for t in range(s + 1, c):
                    cols = mat_bastion(c).select_columns(adversary_columns(c, s, t))
                    if not column_equivalent(bastion_reduced_view(c, s, t), cols):
                        bad.append((s, t))
            out.append(MatrixCheck("bastion-reduction", c, not bad, f"failing pairs {bad}" if bad else ""))
        if c >= 2:
            m = mat_bastion(c)
            inv = rank(m) == c
            expect = c % 2 == 0
            sq = (m @ m) == BitMatrix.identity(c) if expect else True
            out.append(MatrixCheck("bastion-invertibility", c, inv == expect and sq))
    return out


__all__ = [
    "ADVERSARIES",
    "AdvantageReport",
    "Adversary",
    "AffineStructureAdversary",
    "CAKE",
    "ChiSquareResult",
    "CtrPairAdversary",
    "ExhaustiveAdversary",
    "GameConfig",
    "GameContext",
    "IvShareAdversary",
    "MatrixCheck",
    "POLYNOMIAL_ADVERSARIES",
    "PartialView",
    "PrefixAdversary",
    "RandomGuessAdversary",
    "AllIvSharesAdversary",
    "SAKE",
    "chi_square_uniformity",
    "ctr_distinguisher",
    "diff_uniformity",
    "make_adversary",
    "matrix_checks",
    "pad_coordinate_nonzero",
    "pad_uniformity",
    "run_cake_game",
    "run_sake_game",
    "sample_diff_vector",
    "sample_diff_vectors",
    "sample_diff_vectors_ideal",
    "sample_pad_bastion",
    "sample_pad_bastion_ideal",
    "sample_pad_bastion_many",
]
