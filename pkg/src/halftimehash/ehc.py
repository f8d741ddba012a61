"""The Encode-Hash-Combine leaf stage.

One instance reads ``instance_items`` items of ``item_blocks`` blocks,
erasure-encodes them to ``encoded_items`` items, hashes every encoded item
down to a single block with NH, and combines the hashed blocks into
``output_words`` blocks through the fixed small-coefficient matrix.

Items are plain nested tuples (item -> block -> lane word); the batched
array pipeline lives in :mod:`halftimehash.hasher`.
"""

from __future__ import annotations

from typing import Sequence

from . import gf16
from .nh import MultCounter, nh_full, words_to_halves
from .params import ErasureCode, HashParams, TransformMatrix, coefficient_multiply

Item = Sequence[Sequence[int]]


def encode(items: Sequence[Item], code: ErasureCode, width: int = 64) -> list[Item]:
    """Erasure-encode ``arity_in`` items into ``arity_out`` items.

    Systematic: the inputs pass through verbatim, followed by the parity
    items.  Parity arithmetic is GF(16) lane-wise per word, so the same
    routine runs at reduced widths for verification.
    """
    if len(items) != code.arity_in:
        raise ValueError(f"expected {code.arity_in} items, got {len(items)}")
    mask = (1 << width) - 1
    out: list[Item] = [tuple(tuple(block) for block in item) for item in items]
    for row in code.parity_rows:
        parity = [
            [0] * len(block) for block in items[0]
        ]
        for coeff, item in zip(row, items):
            if coeff == 0:
                continue
            for t, block in enumerate(item):
                dst = parity[t]
                for u, word in enumerate(block):
                    dst[u] ^= gf16.scale(coeff, word, width, mask)
        out.append(tuple(tuple(block) for block in parity))
    return out


def hash_encoded(
    encoded: Sequence[Item],
    entropy: Sequence[int],
    half_bits: int = 32,
    counter: MultCounter | None = None,
) -> list[tuple[int, ...]]:
    """NH each encoded item down to one block.

    Item ``i`` is keyed by entropy words ``[i*w, (i+1)*w)``; lane ``j``
    hashes the item's ``w`` lane-``j`` words (2w half-words).
    """
    item_blocks = len(encoded[0])
    lanes = len(encoded[0][0])
    out = []
    for i, item in enumerate(encoded):
        seed_halves = words_to_halves(
            entropy[i * item_blocks : (i + 1) * item_blocks], half_bits
        )
        block = []
        for j in range(lanes):
            lane_halves = words_to_halves([item[t][j] for t in range(item_blocks)], half_bits)
            block.append(nh_full(lane_halves, seed_halves, half_bits, counter, "ehc"))
        out.append(tuple(block))
    return out


def combine(
    hashed: Sequence[Sequence[int]],
    matrix: TransformMatrix,
    half_bits: int = 32,
) -> list[tuple[int, ...]]:
    """Apply the combine matrix lane-wise: k output blocks from e inputs.

    Coefficient multiplications use the shift/add forms only; they are not
    counted as multiplications anywhere.
    """
    if len(hashed) != matrix.cols:
        raise ValueError(f"expected {matrix.cols} hashed blocks, got {len(hashed)}")
    width = 2 * half_bits
    full_mask = (1 << width) - 1
    lanes = len(hashed[0])
    out = []
    for row in matrix.entries:
        acc = [0] * lanes
        for coeff, block in zip(row, hashed):
            if coeff == 0:
                continue
            for j in range(lanes):
                acc[j] = (acc[j] + coefficient_multiply(coeff, block[j], width)) & full_mask
        out.append(tuple(acc))
    return out


def compress_instance(
    items: Sequence[Item],
    entropy: Sequence[int],
    params: HashParams,
    half_bits: int = 32,
    counter: MultCounter | None = None,
) -> list[tuple[int, ...]]:
    """Full leaf stage: encode, hash, combine.

    Needs ``encoded_items * item_blocks`` entropy words and performs exactly
    that many half-word multiplications per lane.
    """
    if len(entropy) < params.entropy_words:
        raise ValueError("entropy region shorter than encoded_items * item_blocks")
    encoded = encode(items, params.code, 2 * half_bits)
    hashed = hash_encoded(encoded, entropy, half_bits, counter)
    return combine(hashed, params.matrix, half_bits)
