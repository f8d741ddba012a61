"""Scaled-down delta-universality probes.

The production bounds live at 32-bit half-words where seed spaces are far
beyond enumeration, so the verification runs the *same* pipeline functions
at 4- or 8-bit half-words, where the relevant seed spaces are exhaustible.
The conditioning trick from the leaf-stage proof is reused computationally:
only the seeds at the differing encoded positions are enumerated, the rest
are pinned to arbitrary constants, which is sound because the bound holds
uniformly over them.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import ehc as ehc_mod
from . import tree as tree_mod
from .hasher import _stream_word
from .nh import nh_full
from .params import HashParams

_EXHAUSTIVE_LIMIT = 1 << 32


@dataclass(frozen=True)
class DeltaProbe:
    """A fixed (x, y, delta) universality probe at a given width.

    ``delta=None`` asks for the worst delta (the full difference
    distribution is measured either way).  ``x``/``y`` are half-word
    sequences for the nh stage and item structures for the ehc stage.
    """

    x: tuple
    y: tuple
    delta: int | None
    half_bits: int
    exhaustive: bool = True
    params: HashParams | None = None
    salt: int = 0

    def __post_init__(self):
        if self.x == self.y and self.delta not in (None, 0):
            raise ValueError("identical inputs only make sense with delta 0")


@dataclass(frozen=True)
class ProbeResult:
    probability: float
    delta: int | None
    seeds_probed: int
    exhaustive: bool


def _fixed_seed(salt: int, index: int, half_bits: int) -> int:
    return _stream_word(salt, index) & ((1 << half_bits) - 1)


def _nh_delta_distribution(probe: DeltaProbe) -> tuple[Counter, int]:
    """Distribution of nh_full(x) - nh_full(y) over one enumerated seed pair.

    The enumerated pair sits at the first differing input pair; every other
    seed half-word is pinned to a salt-derived constant.
    """
    x, y, h = probe.x, probe.y, probe.half_bits
    if len(x) != len(y) or len(x) % 2:
        raise ValueError("probe inputs must be equal even-length half-word sequences")
    full_mask = (1 << (2 * h)) - 1
    pairs = len(x) // 2
    target = next(
        (i for i in range(pairs) if (x[2 * i], x[2 * i + 1]) != (y[2 * i], y[2 * i + 1])),
        None,
    )
    if target is None:
        raise ValueError("inputs are identical; no differing pair to enumerate")
    space = 1 << (2 * h)
    if space > _EXHAUSTIVE_LIMIT:
        raise ValueError("seed space too large for exhaustive enumeration")
    seed = [_fixed_seed(probe.salt, i, h) for i in range(2 * pairs)]
    dist: Counter = Counter()
    for s0 in range(1 << h):
        seed[2 * target] = s0
        for s1 in range(1 << h):
            seed[2 * target + 1] = s1
            diff = (nh_full(x, seed, h) - nh_full(y, seed, h)) & full_mask
            dist[diff] += 1
    return dist, space


def _ehc_delta_distribution(probe: DeltaProbe) -> tuple[Counter, int]:
    """Distribution of the combined-output difference vector over the seeds
    of the differing encoded positions (all other entropy pinned)."""
    params = probe.params
    if params is None:
        raise ValueError("ehc probes need params")
    h = probe.half_bits
    w = params.item_blocks
    full_bits = 2 * h
    full_mask = (1 << full_bits) - 1

    ex = ehc_mod.encode(probe.x, params.code, full_bits)
    ey = ehc_mod.encode(probe.y, params.code, full_bits)
    differing = [i for i in range(params.encoded_items) if ex[i] != ey[i]]
    if len(differing) < params.output_words:
        raise ValueError("encodings differ in fewer than k positions")
    enumerated = differing[: params.output_words]

    lanes = len(probe.x[0][0])
    if lanes != 1 or w != 1:
        raise ValueError("exhaustive ehc probes use single-lane single-block items")
    space_bits = len(enumerated) * 2 * h
    if 1 << space_bits > _EXHAUSTIVE_LIMIT:
        raise ValueError("seed space too large for exhaustive enumeration")

    entropy = [
        _fixed_seed(probe.salt, i, 2 * h) for i in range(params.entropy_words)
    ]

    def combined(items, ent):
        hashed = ehc_mod.hash_encoded(ehc_mod.encode(items, params.code, full_bits), ent, h)
        return ehc_mod.combine(hashed, params.matrix, h)

    dist: Counter = Counter()
    total = 1 << space_bits
    k = params.output_words
    for raw in range(total):
        ent = list(entropy)
        v = raw
        for pos in enumerated:
            ent[pos] = v & full_mask
            v >>= full_bits
        cx = combined(probe.x, ent)
        cy = combined(probe.y, ent)
        delta = tuple((cx[r][0] - cy[r][0]) & full_mask for r in range(k))
        dist[delta] += 1
    return dist, total


def max_delta_probability(stage: str, probe: DeltaProbe) -> ProbeResult:
    """Measured delta-probability for a probe, exhaustively when feasible.

    Exhaustive mode enumerates only the seeds at the differing positions;
    statistical mode samples seeds with a Chernoff-style sample size and is
    selected with ``probe.exhaustive=False``.
    """
    if stage not in ("nh", "ehc"):
        raise ValueError(f"unknown stage {stage!r}")
    if probe.x == probe.y:
        return ProbeResult(1.0, 0, 0, probe.exhaustive)
    if not probe.exhaustive:
        return _statistical_probe(stage, probe)
    dist, space = (
        _nh_delta_distribution(probe)
        if stage == "nh"
        else _ehc_delta_distribution(probe)
    )
    if probe.delta is None:
        count = max(dist.values())
    else:
        count = dist.get(probe.delta, 0)
    return ProbeResult(count / space, probe.delta, space, True)


def _statistical_probe(stage: str, probe: DeltaProbe, samples: int = 1 << 16) -> ProbeResult:
    """Random-seed sampling fallback for seed spaces beyond enumeration."""
    h = probe.half_bits
    full_mask = (1 << (2 * h)) - 1
    rng = np.random.default_rng(probe.salt or 1)
    dist: Counter = Counter()
    if stage != "nh":
        raise ValueError("statistical mode is implemented for the nh stage")
    n = len(probe.x)
    for _ in range(samples):
        seed = [int(v) for v in rng.integers(0, 1 << h, size=n)]
        diff = (nh_full(probe.x, seed, h) - nh_full(probe.y, seed, h)) & full_mask
        dist[diff] += 1
    count = max(dist.values()) if probe.delta is None else dist.get(probe.delta, 0)
    return ProbeResult(count / samples, probe.delta, samples, False)


@dataclass(frozen=True)
class TreeCollisionResult:
    """Wilson-interval summary of a tree-stage collision simulation."""

    collisions: int
    trials: int
    estimate: float
    upper99: float
    bound: float
    status: str  # "consistent" | "inconclusive" | "fail"


def _wilson_upper(successes: int, trials: int, z: float = 2.576) -> float:
    if trials == 0:
        return 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = phat + z * z / (2 * trials)
    margin = z * math.sqrt((phat * (1 - phat) + z * z / (4 * trials)) / trials)
    return (center + margin) / denom


def tree_collision_estimate(
    half_bits: int,
    fanout: int,
    height: int,
    k: int,
    trials: int,
    rng: np.random.Generator | None = None,
) -> TreeCollisionResult:
    """Estimate the k-tree reduce-stage collision rate for random inputs.

    Hashes ``fanout**height`` single-lane blocks through k independently
    seeded trees; a collision means all k leftover stacks match.  Checked
    against the height**k * 2**(-half_bits * k) bound: consistent if the
    99% upper confidence limit sits below twice the bound, a point estimate
    between one and two times the bound is inconclusive rather than failed.
    """
    if half_bits > 8:
        raise ValueError("collision simulation is for reduced widths")
    rng = rng or np.random.default_rng(0xC0111)
    n_blocks = fanout**height
    full = 1 << (2 * half_bits)
    seeds_per_tree = (fanout - 1) * max(height, 1)
    xs_all = rng.integers(0, full, size=(trials, n_blocks)).tolist()
    ys_all = rng.integers(0, full, size=(trials, n_blocks)).tolist()
    seeds_all = rng.integers(0, full, size=(trials, k, seeds_per_tree)).tolist()
    collisions = 0
    for t in range(trials):
        xs, ys = xs_all[t], ys_all[t]
        if xs == ys:
            ys[0] ^= 1
        x_blocks = [(v,) for v in xs]
        y_blocks = [(v,) for v in ys]
        collided = True
        for seeds in seeds_all[t]:
            rx = tree_mod.tree_reduce(x_blocks, seeds, fanout, half_bits)
            ry = tree_mod.tree_reduce(y_blocks, seeds, fanout, half_bits)
            if rx != ry:
                collided = False
                break
        collisions += collided
    estimate = collisions / trials
    upper = _wilson_upper(collisions, trials)
    bound = max(height, 1) ** k * 2.0 ** (-half_bits * k)
    if upper <= 2 * bound and estimate <= bound:
        status = "consistent"
    elif estimate <= 2 * bound:
        status = "inconclusive"
    else:
        status = "fail"
    return TreeCollisionResult(collisions, trials, estimate, upper, bound, status)
