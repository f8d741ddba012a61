"""Command-line front end: hashing, analysis reports, property verification,
golden vectors, and a report-only throughput benchmark.

Exit codes: 0 success, 1 property/check failure, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from . import analysis, oracle
from .hasher import _stream_words_np, hash_bytes, seed_for_input
from .params import VARIANTS, variant

_SIZE_SUFFIXES = {"K": 1, "M": 2, "G": 3, "T": 4, "P": 5, "E": 6}

#: Fill key for deterministically generated benchmark / vector inputs.
FILL_SEED = 0x243F6A8885A308D3

VECTOR_LENGTHS = (0, 1, 167 * 8, 168 * 8, 1024, 2**20 - 1, 2**20 + 1, 4 * 2**20)
VECTOR_MASTERS = (b"\x00" * 32, bytes(range(32)))


class CheckFailure(Exception):
    """A verification property or vector check failed (exit code 1)."""


def parse_size(text: str) -> int:
    text = text.strip()
    if not text:
        raise argparse.ArgumentTypeError("empty size")
    mult = 1
    if text[-1].upper() in _SIZE_SUFFIXES:
        mult = 1024 ** _SIZE_SUFFIXES[text[-1].upper()]
        text = text[:-1]
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from None
    return value * mult


def fill_bytes(n: int, fill_seed: int = FILL_SEED) -> bytes:
    """Deterministic splitmix-filled input, generated in memory."""
    if n == 0:
        return b""
    words = _stream_words_np(fill_seed, 0, (n + 7) // 8)
    return words.astype("<u8").tobytes()[:n]


def _read_input(path: str | None) -> bytes:
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _master_from_args(args) -> bytes:
    if args.seed_hex is not None:
        raw = bytes.fromhex(args.seed_hex)
        if len(raw) != 32:
            raise ValueError("seed must be 32 bytes (64 hex chars)")
        return raw
    if args.seed_file is not None:
        with open(args.seed_file, "rb") as fh:
            raw = fh.read()
        if len(raw) != 32:
            raise ValueError("seed file must hold exactly 32 bytes")
        return raw
    return b"\x00" * 32


def cmd_hash(args) -> int:
    params = variant(args.variant)
    master = _master_from_args(args)
    data = _read_input(args.input)
    digest = hash_bytes(data, seed_for_input(master, params, len(data)), params)
    print(digest.hex())
    return 0


def cmd_analyze(args) -> int:
    if args.length < 1:
        raise ValueError("length must be positive")
    report = analysis.entropy_report(variant(args.variant), args.length)
    if args.csv:
        print(analysis.report_csv_header())
        print(analysis.report_csv_row(report))
    else:
        print(analysis.report_table(report))
    return 0


def _verify_properties(quick: bool):
    """Yield (name, ok, detail) for every checked property."""
    for width, params in sorted(VARIANTS.items()):
        try:
            p = analysis.max_two_adic_valuation(params.matrix, params.output_words)
            ok = p == params.max_det_valuation
            detail = f"measured 2^{p}, stored 2^{params.max_det_valuation}"
        except analysis.SingularSubsetError as exc:
            ok, detail = False, str(exc)
        yield f"matrix-valuation-{width}", ok, detail

    trials = 10**4 if quick else 10**6
    for width, params in sorted(VARIANTS.items()):
        try:
            dist = analysis.verify_min_distance(params.code, 4, trials=trials)
            ok = dist >= params.output_words
            detail = f"measured distance {dist}, need >= {params.output_words}"
        except analysis.CodeDistanceError as exc:
            ok, detail = False, str(exc)
        yield f"code-distance-{width}", ok, detail

    rng = np.random.default_rng(0xA11CE)
    probes = 10 if quick else 100
    bound = 2.0**-4
    worst = 0.0
    for _ in range(probes):
        x = tuple(int(v) for v in rng.integers(0, 16, size=4))
        y = tuple(int(v) for v in rng.integers(0, 16, size=4))
        if x == y:
            y = (y[0] ^ 1,) + y[1:]
        res = oracle.max_delta_probability(
            "nh", oracle.DeltaProbe(x, y, None, 4, salt=int(rng.integers(1 << 32)))
        )
        worst = max(worst, res.probability)
    yield "nh-delta-universality-w4", worst <= bound, f"max {worst:.6f} vs bound {bound:.6f}"

    if not quick:
        toy, probe = _toy_ehc_probe()
        res = oracle.max_delta_probability("ehc", probe)
        b = 2.0 ** (toy.output_words * (toy.max_det_valuation - 4))
        yield "ehc-delta-universality-w4", res.probability <= b, (
            f"max {res.probability:.6f} vs bound {b:.6f}"
        )


def _toy_ehc_probe(matrix_entries=((1, 0, 1), (0, 1, 1))):
    """Single-lane k=2 leaf-stage geometry small enough to enumerate."""
    from .params import ErasureCode, HashParams, TransformMatrix

    matrix = TransformMatrix(matrix_entries)
    measured_p = analysis.max_two_adic_valuation(matrix, 2)
    code = ErasureCode(2, 3, 2, "xor-parity", ((1, 1),))
    toy = HashParams(16, 2, 3, 2, 1, 1, 2, measured_p, matrix, code)
    x = (((3,),), ((5,),))
    y = (((3,),), ((9,),))
    return toy, oracle.DeltaProbe(x, y, None, 4, params=toy, salt=7)


def cmd_verify(args) -> int:
    failures = []
    for name, ok, detail in _verify_properties(args.quick):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures.append(name)
    if failures:
        raise CheckFailure("failed properties: " + ", ".join(failures))
    print("all properties hold")
    return 0


def cmd_bench(args) -> int:
    sizes = [parse_size(s) for s in args.sizes.split(",")]
    print("size_bytes,variant,bytes_per_second,bytes_per_cycle")
    for size in sizes:
        data = fill_bytes(size)
        for width in sorted(VARIANTS):
            params = variant(width)
            seed = seed_for_input(b"\x00" * 32, params, size)
            hash_bytes(data, seed, params)  # warm caches before timing
            rates = []
            for _ in range(args.reps):
                t0 = time.perf_counter()
                hash_bytes(data, seed, params)
                dt = time.perf_counter() - t0
                rates.append(size / dt if dt > 0 else float("inf"))
            # No portable cycle counter from Python: leave the column empty.
            print(f"{size},{width},{statistics.median(rates):.0f},")
    return 0


def _vector_records():
    for width in sorted(VARIANTS):
        params = variant(width)
        for master in VECTOR_MASTERS:
            for length in VECTOR_LENGTHS:
                data = fill_bytes(length)
                digest = hash_bytes(
                    data, seed_for_input(master, params, length), params
                )
                yield (
                    f"{width},{master.hex()},{length},"
                    f"splitmix:{FILL_SEED:016x},{digest.hex()}"
                )


def cmd_vectors(args) -> int:
    if args.emit:
        with open(args.emit, "w") as fh:
            for line in _vector_records():
                fh.write(line + "\n")
        return 0
    with open(args.check) as fh:
        recorded = [line.strip() for line in fh if line.strip()]
    expected = list(_vector_records())
    bad = [line for line in recorded if line not in set(expected)]
    missing = [line for line in expected if line not in set(recorded)]
    if bad or missing:
        for line in bad:
            print(f"mismatch: {line}")
        for line in missing:
            print(f"missing:  {line}")
        raise CheckFailure(f"{len(bad) + len(missing)} vector records disagree")
    print(f"{len(recorded)} vector records verified")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halftimehash",
        description="Almost-universal long-string hashing with verifiable parameters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="hash a file or stdin")
    p.add_argument("--variant", type=int, choices=sorted(VARIANTS), default=24)
    p.add_argument("--seed-hex", help="64 hex chars of master seed")
    p.add_argument("--seed-file", help="file holding the 32-byte master seed")
    p.add_argument("input", nargs="?", help="input path, or - for stdin")
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("analyze", help="entropy/seed/cost report for a length")
    p.add_argument("--variant", type=int, choices=sorted(VARIANTS), default=24)
    p.add_argument("--length", type=parse_size, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run the property checks")
    p.add_argument("--quick", action="store_true", help="skip exhaustive enumerations")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="report-only throughput benchmark")
    p.add_argument("--sizes", default="1K,256K,1M")
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("vectors", help="emit or check the golden vector file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--emit", metavar="PATH")
    group.add_argument("--check", metavar="PATH")
    p.set_defaults(func=cmd_vectors)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CheckFailure as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
