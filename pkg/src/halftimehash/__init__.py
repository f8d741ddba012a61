"""halftimehash: almost-universal hashing for long strings.

Digests of 16, 24, 32, or 40 bytes from 32/64-bit multiply-free-combine
arithmetic, plus an analysis engine that machine-checks the algebraic
properties (combine-matrix valuations, erasure-code minimum distance,
scaled-width delta-universality) the collision bounds rest on.
"""

from .hasher import (
    Digest,
    SeedBuffer,
    SeedSizeError,
    digest,
    expand_seed,
    hash_bytes,
    seed_for_input,
    seed_words_needed,
)
from .params import ErasureCode, HashParams, TransformMatrix, variant

__version__ = "0.1.0"

__all__ = [
    "Digest",
    "ErasureCode",
    "HashParams",
    "SeedBuffer",
    "SeedSizeError",
    "TransformMatrix",
    "digest",
    "expand_seed",
    "hash_bytes",
    "seed_for_input",
    "seed_words_needed",
    "variant",
    "__version__",
]
