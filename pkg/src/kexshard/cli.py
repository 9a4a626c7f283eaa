"""Command-line entry points.

Exit codes: 0 success, 1 usage error, 2 incomplete or corrupt share set,
3 failed analysis or verification.
"""

from __future__ import annotations

import argparse
import glob
import hashlib
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from kexshard.analysis import (
    ADVERSARIES,
    CAKE,
    SAKE,
    ExhaustiveAdversary,
    GameConfig,
    diff_uniformity,
    make_adversary,
    matrix_checks,
    pad_uniformity,
    run_cake_game,
    run_sake_game,
    sample_diff_vectors,
    sample_diff_vectors_ideal,
    sample_pad_bastion_ideal,
    sample_pad_bastion_many,
)
from kexshard.bench import DEFAULT_REPS, emit_csv, format_table, overhead_ratio, run_bench
from kexshard.core.ciphers import ToyCipher, XorTestCipher, build_toy_permutation, linear_toy_permutation
from kexshard.core.rng import DeterministicRng, SystemRng
from kexshard.errors import ContainerError, CorruptShareSet, IncompleteShareSet, KexshardError
from kexshard.schemes import FragmentationPolicy, SchemeId, make_scheme
from kexshard.storage import DirectorySite, disperse, load_share_files

EXIT_OK, EXIT_USAGE, EXIT_SHARES, EXIT_ANALYSIS = 0, 1, 2, 3
KEYLESS = (SchemeId.SSMS, SchemeId.RIVEST_AONT)
TOY_BITS_ENV = "KEXSHARD_TOY_BITS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_toy_bits(fallback: int) -> int:
    raw = os.environ.get(TOY_BITS_ENV)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{TOY_BITS_ENV} must be an integer, got {raw!r}") from None


def _rng(seed):
    return DeterministicRng(seed) if seed is not None else SystemRng()


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _csv_ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        mult = 1
        for suffix, m in (("kib", 1 << 10), ("mib", 1 << 20), ("gib", 1 << 30), ("k", 1 << 10), ("m", 1 << 20)):
            if part.endswith(suffix):
                part, mult = part[:-len(suffix)], m
                break
        out.append(int(part) * mult)
    return out


def _read_key(path: str | None) -> tuple[int | None, int | None]:
    if path is None:
        return None, None
    data = Path(path).read_bytes()
    if not data:
        raise UsageError(f"key file {path} is empty")
    return int.from_bytes(data, "big"), 8 * len(data)


# -- commands ------------------------------------------------------------------

def cmd_keygen(args) -> int:
    out = Path(args.out)
    if out.exists() and not args.force:
        raise UsageError(f"{out} exists; pass --force to overwrite")
    if args.bits % 8 or not 8 <= args.bits <= 128:
        raise UsageError("--bits must be a multiple of 8 in 8..128")
    nb = args.bits // 8
    data = DeterministicRng(args.seed).bytes(nb) if args.seed is not None else SystemRng().bytes(nb)
    out.write_bytes(data)
    _emit(args, {"path": str(out), "bytes": nb}, f"wrote {nb}-byte key to {out}")
    return EXIT_OK


def cmd_split(args) -> int:
    scheme_id = SchemeId.parse(args.scheme)
    key, key_bits = _read_key(args.key_file)
    if scheme_id in KEYLESS:
        if key is not None:
            print(f"warning: {scheme_id.slug} draws its own message key; --key-file ignored", file=sys.stderr)
        key, bits = None, args.bits
    else:
        if key is None:
            raise UsageError(f"{scheme_id.slug} needs --key-file")
        bits = key_bits
    if bits % 8:
        raise UsageError("byte-oriented splitting needs a byte-aligned block width")
    scheme = make_scheme(scheme_id, bits, key=key)
    data = Path(args.input).read_bytes()
    policy = FragmentationPolicy(args.policy)
    result = scheme.share(data, args.n, _rng(args.seed), policy)
    name = args.name or Path(args.input).name
    out_dir = Path(args.out_dir)
    sites = [DirectorySite(out_dir) for _ in result.shares]
    try:
        names = disperse(result.shares, sites, name)
    except OSError as exc:
        raise UsageError(f"cannot write to {out_dir}: {exc}") from None
    paths = [str(out_dir / nm) for nm in names]
    counters = result.counters.as_dict()
    counters.pop("phase_seconds", None)
    payload = {"scheme": scheme_id.slug, "n": args.n, "shares": paths, "counters": counters,
               "ciphertext_blocks": result.ciphertext_blocks,
               "stored_bytes": sum(s.stored_bytes for s in result.shares)}
    text = "\n".join(paths + [" ".join(f"{k}={v}" for k, v in counters.items())])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    paths = sorted({p for pattern in args.shares for p in (glob.glob(pattern) or [pattern])})
    paths = [p for p in paths if Path(p).is_file()]
    if not paths:
        raise IncompleteShareSet([], "no share files matched")
    shares = load_share_files(paths)
    scheme_id = shares[0].scheme
    bits = shares[0].block_bits
    key, key_bits = _read_key(args.key_file)
    if scheme_id not in KEYLESS:
        if key is None:
            raise UsageError(f"{scheme_id.slug} shares need --key-file")
        if key_bits != bits:
            raise UsageError(f"key is {key_bits} bits but shares use {bits}-bit blocks")
    scheme = make_scheme(scheme_id, bits, key=key)
    data = scheme.reconstruct(shares)
    if args.out:
        Path(args.out).write_bytes(data)
    digest = hashlib.sha256(data).hexdigest()
    payload = {"scheme": scheme_id.slug, "bytes": len(data), "sha256": digest, "out": args.out}
    status = EXIT_OK
    if args.verify:
        expected = Path(args.verify).read_bytes()
        payload["verified"] = expected == data
        status = EXIT_OK if payload["verified"] else EXIT_ANALYSIS
    _emit(args, payload, " ".join(f"{k}={v}" for k, v in payload.items()))
    return status


def cmd_attack(args) -> int:
    bits = args.toy_bits if args.toy_bits is not None else _default_toy_bits(12)
    if args.trials < 100:
        raise UsageError("--trials must be at least 100")
    scheme_id = SchemeId.parse(args.scheme)
    if args.adversary not in ADVERSARIES:
        raise UsageError(f"unknown adversary {args.adversary!r}; choose from {sorted(ADVERSARIES)}")
    if args.adversary == "all-iv-shares" and args.game != CAKE:
        raise UsageError("all-iv-shares chooses blocks and only plays the cake game")
    if args.adversary == "all-iv-shares" and scheme_id not in (SchemeId.SSAKE, SchemeId.ROSSAKE_BC,
                                                               SchemeId.ROSSAKE_SPONGE, SchemeId.SSMS):
        raise UsageError(f"all-iv-shares needs a scheme with share blocks, {scheme_id.slug} has none")
    if args.adversary == "exhaustive" and bits > 16:
        raise UsageError("the exhaustive adversary needs --toy-bits <= 16")
    if args.game == CAKE and args.lam is None:
        raise UsageError("the cake game needs --lam")
    config = GameConfig(scheme_id, bits, args.trials, args.n, args.blocks, args.lam, args.seed)
    adversary = ExhaustiveAdversary(args.budget) if args.adversary == "exhaustive" else make_adversary(args.adversary)
    report = (run_cake_game if args.game == CAKE else run_sake_game)(adversary, config)
    _emit(args, report.as_dict(), report.to_text())
    return EXIT_OK


def _diff_check(args, bits, rng) -> tuple[bool, dict]:
    if args.linear_sigma:
        perm = linear_toy_permutation(bits, 0x5A & ((1 << bits) - 1))
        samples, regime = sample_diff_vectors(perm, args.c, args.samples, rng), "linear"
    elif args.fixed_sigma:
        perm = build_toy_permutation(bits, args.seed)
        samples, regime = sample_diff_vectors(perm, args.c, args.samples, rng), "fixed"
    else:
        samples, regime = sample_diff_vectors_ideal(bits, args.c, args.samples, rng), "ideal"
    exact = regime == "ideal" and not args.full_support
    results = diff_uniformity(samples, bits, exact_support=exact)
    ok = all(r.passed for r in results)
    return ok, {"regime": regime, "exact_support": exact, "coordinates": [r.as_dict() for r in results]}


def _pad_check(args, bits, rng) -> tuple[bool, dict]:
    pairs = [(args.s, args.t)] if args.s is not None else [(s, t) for s in range(args.c) for t in range(s + 1, args.c)]
    regime = "linear" if args.linear_sigma else "fixed" if args.fixed_sigma else "ideal"
    exact = regime == "ideal" and not args.full_support
    out, ok = [], True
    for s, t in pairs:
        if regime == "ideal":
            samples = sample_pad_bastion_ideal(bits, args.c, s, t, args.samples, rng)
        else:
            cipher = XorTestCipher(bits) if regime == "linear" else ToyCipher(bits, args.seed)
            samples = sample_pad_bastion_many(cipher, rng.block(bits), args.c, s, t, args.samples, rng)
        results = pad_uniformity(samples, bits, args.c, s, t, exact_support=exact)
        ok &= all(r.passed for r in results)
        out.append({"s": s, "t": t, "coordinates": [r.as_dict() for r in results]})
    return ok, {"regime": regime, "exact_support": exact, "pairs": out}


def cmd_analyze(args) -> int:
    rng = DeterministicRng(args.seed)
    if args.check == "matrices":
        c_max = args.c if args.c is not None else 8
        checks = matrix_checks(range(2, c_max + 1))
        ok = all(ch.passed for ch in checks)
        payload = {"check": "matrices", "passed": ok, "results": [asdict(ch) for ch in checks]}
        text = "\n".join(f"{ch.name} c={ch.c} {'PASS' if ch.passed else 'FAIL'} {ch.detail}".rstrip() for ch in checks)
    else:
        bits = args.toy_bits if args.toy_bits is not None else _default_toy_bits(10)
        if bits > 16:
            raise UsageError("--toy-bits must be at most 16 for the statistics")
        args.c = args.c if args.c is not None else 4
        ok, detail = (_diff_check if args.check == "prop1" else _pad_check)(args, bits, rng)
        payload = {"check": args.check, "passed": ok, "toy_bits": bits, "c": args.c, "samples": args.samples, **detail}
        lines = []
        if args.check == "prop1":
            for k, r in enumerate(detail["coordinates"], start=1):
                lines.append(f"coordinate={k} statistic={r['statistic']:.2f} threshold={r['threshold']:.2f} "
                             f"{'PASS' if r['passed'] else 'FAIL'}")
        else:
            for pair in detail["pairs"]:
                for k, r in enumerate(pair["coordinates"], start=1):
                    lines.append(f"s={pair['s']} t={pair['t']} coordinate={k} statistic={r['statistic']:.2f} "
                                 f"threshold={r['threshold']:.2f} {'PASS' if r['passed'] else 'FAIL'}")
        text = "\n".join(lines + [f"regime={detail['regime']} overall={'PASS' if ok else 'FAIL'}"])
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_ANALYSIS


def cmd_bench(args) -> int:
    schemes = [SchemeId.parse(s) for s in args.schemes.split(",")]
    sizes = _csv_ints(args.sizes)
    results = run_bench(schemes, sizes, args.reps, DeterministicRng(args.seed), n=args.n)
    if args.out:
        emit_csv(results, args.out)
    payload = {"results": [r.as_dict() for r in results]}
    if {SchemeId.CTR_NAIVE, SchemeId.SSAKE, SchemeId.BASTION} <= set(schemes):
        payload["overhead_ratio"] = {str(sz): overhead_ratio(results, sz) for sz in sizes}
    text = format_table(results)
    if "overhead_ratio" in payload:
        text += "\n" + "\n".join(f"overhead_ratio[{k}]={v:.3f}" for k, v in payload["overhead_ratio"].items())
    _emit(args, payload, text)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kexshard", description="Secret sharing that survives key exposure.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    slugs = [s.slug for s in SchemeId]

    def common(p):
        p.add_argument("--json", action="store_true", help="print one JSON document")
        return p

    p = common(sub.add_parser("keygen", help="write a random key file"))
    p.add_argument("out")
    p.add_argument("--bits", type=int, default=128)
    p.add_argument("--force", action="store_true")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_keygen)

    p = common(sub.add_parser("split", help="split a file into share containers"))
    p.add_argument("input")
    p.add_argument("--scheme", required=True, choices=slugs)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--key-file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--policy", choices=[f.value for f in FragmentationPolicy], default="contiguous")
    p.add_argument("--bits", type=int, default=128, help="block width for keyless schemes")
    p.add_argument("--name", help="object name (defaults to the input file name)")
    p.add_argument("--seed", type=int, help="replayable randomness (testing only)")
    p.set_defaults(func=cmd_split)

    p = common(sub.add_parser("reconstruct", help="rebuild a file from its shares"))
    p.add_argument("--key-file")
    p.add_argument("--shares", nargs="+", required=True, help="share files or glob patterns")
    p.add_argument("--out")
    p.add_argument("--verify", help="compare the result with this file")
    p.set_defaults(func=cmd_reconstruct)

    p = common(sub.add_parser("attack", help="play a distinguishing game at a toy width"))
    p.add_argument("--game", choices=[SAKE, CAKE], default=SAKE)
    p.add_argument("--scheme", required=True, choices=slugs)
    p.add_argument("--adversary", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--toy-bits", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--blocks", type=int, default=7, help="plaintext blocks per challenge")
    p.add_argument("--lam", type=int, help="hidden blocks in the cake game")
    p.add_argument("--budget", type=int, default=64, help="candidates for the exhaustive adversary")
    p.set_defaults(func=cmd_attack)

    p = common(sub.add_parser("analyze", help="uniformity statistics and matrix reductions"))
    p.add_argument("--check", required=True, choices=["prop1", "prop4", "matrices"])
    p.add_argument("--toy-bits", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    regime = p.add_mutually_exclusive_group()
    regime.add_argument("--linear-sigma", action="store_true", help="linear permutation (negative control)")
    regime.add_argument("--fixed-sigma", action="store_true", help="one fixed random permutation for all samples")
    p.add_argument("--full-support", action="store_true", help="test against all cells, zero included")
    p.set_defaults(func=cmd_analyze)

    p = common(sub.add_parser("bench", help="throughput and accounting"))
    p.add_argument("--schemes", default="ctr-naive,rossake-bc,ssake,bastion,rivest-aon")
    p.add_argument("--sizes", default="1MiB")
    p.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kexshard: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IncompleteShareSet, CorruptShareSet, ContainerError) as exc:
        print(f"kexshard: {exc}", file=sys.stderr)
        return EXIT_SHARES
    except KexshardError as exc:
        print(f"kexshard: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"kexshard: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
