"""Computational verification of the algebraic preconditions and the
entropy / seed-size / multiplication-count formulas.

Nothing here is needed on the hashing hot path; this module exists so that
every mathematical property the hash family relies on is machine-checked:
exact 2-adic valuations of the combine matrices, exhaustive minimum-distance
measurement of the erasure codes at reduced symbol width, and the closed
forms for collision probability and seed budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import gf16, tree
from .params import ErasureCode, HashParams, TransformMatrix


class SingularSubsetError(ValueError):
    """Some k-column subset of the combine matrix has determinant zero."""


class CodeDistanceError(ValueError):
    """A code's measured minimum distance fell below its declaration."""


def det_bareiss(rows: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(map(int, row)) for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def two_adic_valuation(n: int) -> int:
    if n == 0:
        raise ValueError("0 has unbounded 2-adic valuation")
    return (abs(n) & -abs(n)).bit_length() - 1


def max_two_adic_valuation(matrix: TransformMatrix, k: int) -> int:
    """Largest power of two dividing any k-column determinant (exponent).

    Raises :class:`SingularSubsetError` if any subset is singular, i.e. the
    matrix fails the any-k-columns-independent requirement.
    """
    if matrix.rows != k:
        raise ValueError("k must equal the matrix row count")
    best = 0
    for cols in combinations(range(matrix.cols), k):
        det = det_bareiss(matrix.column_subset(cols))
        if det == 0:
            raise SingularSubsetError(f"columns {cols} are linearly dependent")
        best = max(best, two_adic_valuation(det))
    return best


def _encode_symbols(code: ErasureCode, symbols, symbol_bits: int, mask: int):
    """Word-level encoding: one machine word per code symbol."""
    out = list(symbols)
    for row in code.parity_rows:
        acc = symbols[0] & 0
        for coeff, sym in zip(row, symbols):
            if coeff:
                acc = acc ^ gf16.scale(coeff, sym, symbol_bits, mask)
        out.append(acc)
    return out


def _exhaustive_min_distance(code: ErasureCode, symbol_bits: int) -> int:
    """Exact minimum codeword weight at reduced symbol width.

    Enumerates inputs by support size s; a codeword with s nonzero input
    symbols already has weight >= s in the systematic positions, so the
    search stops once s reaches the best weight found.  This covers every
    nonzero input difference (the code is linear).
    """
    d = code.arity_in
    mask = (1 << symbol_bits) - 1
    nonzero = np.arange(1, 1 << symbol_bits, dtype=np.uint64)
    best = d + len(code.parity_rows) + 1
    s = 1
    while s <= d and s < best:
        grids = np.meshgrid(*([nonzero] * s), indexing="ij")
        vals = np.stack([g.ravel() for g in grids], axis=1)  # (combos, s)
        for support in combinations(range(d), s):
            weights = np.full(len(vals), s, dtype=np.int64)
            for row in code.parity_rows:
                acc = np.zeros(len(vals), dtype=np.uint64)
                for pos, idx in zip(support, range(s)):
                    coeff = row[pos]
                    if coeff:
                        acc ^= gf16.scale(coeff, vals[:, idx], symbol_bits, mask)
                weights += acc != 0
            best = min(best, int(weights.min()))
        s += 1
    return best


def _random_trial_min_distance(
    code: ErasureCode, trials: int, rng: np.random.Generator
) -> int:
    """Minimum observed symbol distance between random full-width pairs."""
    d = code.arity_in
    best = code.arity_out + 1
    remaining = trials
    while remaining > 0:
        n = min(remaining, 1 << 18)
        remaining -= n
        x = rng.integers(0, 1 << 64, size=(n, d), dtype=np.uint64)
        y = rng.integers(0, 1 << 64, size=(n, d), dtype=np.uint64)
        same = np.all(x == y, axis=1)
        if same.any():
            y[same, 0] ^= np.uint64(1)
        ex = _encode_symbols(code, [x[:, i] for i in range(d)], 64, (1 << 64) - 1)
        ey = _encode_symbols(code, [y[:, i] for i in range(d)], 64, (1 << 64) - 1)
        dist = np.zeros(n, dtype=np.int64)
        for a, b in zip(ex, ey):
            dist += a != b
        best = min(best, int(dist.min()))
    return best


def verify_min_distance(
    code: ErasureCode,
    symbol_bits: int,
    trials: int = 10**6,
    rng: np.random.Generator | None = None,
) -> int:
    """Measure the code's minimum distance and gate it against the declaration.

    Exhaustive at ``symbol_bits`` (the construction applies the same GF(16)
    maps to independent bit-planes, so a full-width word is a direct sum of
    reduced-width copies and the reduced measurement is exact), plus random
    full-width trials as a cross-check.  Raises :class:`CodeDistanceError`
    if the measured distance is below ``code.min_distance``.
    """
    if not 1 <= symbol_bits <= 8:
        raise ValueError("symbol_bits must be in 1..8")
    if code.arity_in * symbol_bits > 28:
        raise ValueError("symbol width too large for exhaustive enumeration")
    uses_field = any(c > 1 for row in code.parity_rows for c in row)
    if uses_field and symbol_bits % 4:
        raise ValueError("GF(16) coefficient rows need symbol_bits divisible by 4")
    measured = _exhaustive_min_distance(code, symbol_bits)
    if trials:
        rng = rng or np.random.default_rng(0x5EED)
        measured = min(measured, _random_trial_min_distance(code, trials, rng))
    if measured < code.min_distance:
        raise CodeDistanceError(
            f"measured distance {measured} below declared {code.min_distance}"
        )
    return measured


@dataclass(frozen=True)
class EntropyReport:
    """Entropy, seed-budget, and multiplication accounting for one length.

    ``tree_height`` is the ceiling reading used by the shipped reports;
    the floor reading is carried alongside for comparison.  The
    ``multiplications`` field is the closed-form leading term; the exact
    structural count appears in ``multiplications_exact`` with the
    logarithmic remainder in ``multiplications_log_term``.
    """

    output_bytes: int
    n_bytes: int
    tree_height: int
    tree_height_floor: int
    epsilon_log2: float
    seed_words: int
    seed_bytes: int
    seed_words_floor: int
    multiplications: int
    multiplications_exact: int
    multiplications_log_term: int
    ehc_multiplications: int


def _heights(params: HashParams, n_inst: int) -> tuple[int, int]:
    if n_inst < 1:
        return 0, 0
    h_ceil = tree.tree_height(n_inst, params.fanout)
    h_floor = 0
    n = n_inst
    while n >= params.fanout:
        n //= params.fanout
        h_floor += 1
    return h_ceil, h_floor


def _seed_budget(params: HashParams, h: int) -> int:
    k, b, f = params.output_words, params.block_words, params.fanout
    return (
        params.entropy_words
        + (f - 1) * h * k
        + b * f * h * k
        + params.instance_words
        + k
        - 1
    )


def entropy_report(params: HashParams, n_bytes: int) -> EntropyReport:
    """Evaluate the collision-probability, seed and cost formulas at a length."""
    if n_bytes < 1:
        raise ValueError("n_bytes must be positive")
    k, b, f = params.output_words, params.block_words, params.fanout
    p = params.max_det_valuation
    n_words = (n_bytes + 7) // 8
    n_inst = n_words // params.instance_words
    h, h_floor = _heights(params, n_inst)

    epsilon_scale = (1 << (k * p)) + h**k + 1
    epsilon_log2 = 32.0 * k - math.log2(epsilon_scale)

    seed_words = _seed_budget(params, h)
    seed_words_floor = _seed_budget(params, h_floor)

    leading = (params.entropy_words + k) * b * n_inst
    ehc_mults = params.entropy_words * b * n_inst
    tree_mults = k * (f - 1) * b * tree.node_executions(n_inst, f) if n_inst else 0
    levels = tree.level_count(n_inst, f) if n_inst else 0
    finalize_mults = k * ((f - 1) * b * levels + 1)
    tail_words = n_words - n_inst * params.instance_words
    remainder_mults = k * tail_words
    exact = ehc_mults + tree_mults + finalize_mults + remainder_mults

    return EntropyReport(
        output_bytes=params.output_bytes,
        n_bytes=n_bytes,
        tree_height=h,
        tree_height_floor=h_floor,
        epsilon_log2=epsilon_log2,
        seed_words=seed_words,
        seed_bytes=8 * seed_words,
        seed_words_floor=seed_words_floor,
        multiplications=leading,
        multiplications_exact=exact,
        multiplications_log_term=exact - leading,
        ehc_multiplications=ehc_mults,
    )


def ehc_bound(params: HashParams, width: int = 32) -> int:
    """Output-entropy bits guaranteed by the leaf stage at a half-word width.

    The leaf compression is 2^(k*(p - width))-almost-delta-universal, so the
    bound is ``k * (width - p)`` bits.
    """
    return params.output_words * (width - params.max_det_valuation)


REPORT_FIELDS = (
    "output_bytes",
    "n_bytes",
    "tree_height",
    "tree_height_floor",
    "epsilon_log2",
    "seed_words",
    "seed_bytes",
    "multiplications",
    "multiplications_log_term",
)


def report_csv_header() -> str:
    return ",".join(REPORT_FIELDS)


def report_csv_row(report: EntropyReport) -> str:
    vals = []
    for name in REPORT_FIELDS:
        v = getattr(report, name)
        vals.append(f"{v:.2f}" if isinstance(v, float) else str(v))
    return ",".join(vals)


def report_table(report: EntropyReport) -> str:
    rows = []
    for name in REPORT_FIELDS:
        v = getattr(report, name)
        text = f"{v:.2f}" if isinstance(v, float) else str(v)
        rows.append((name, text))
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {text}" for name, text in rows)
