"""Seeded binary symmetric channel and pairwise-error analytics.

Noise is drawn from a counter-mode SHA-256 stream keyed by (master seed,
label, stream index), so every trial is reproducible bit for bit across
runs, platforms, and any parallel execution order.  The generator is named
by PRNG_ID; changing the construction means changing the identifier.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf2 import BitWord

PRNG_ID = "sha256ctr-v1"

_DOMAIN = b"RATELESS-BSC"


@dataclass(frozen=True)
class ChannelSpec:
    """Crossover probability p in (0, 1/2) plus the seeded stream identity."""

    p: float
    master_seed: int
    prng_id: str = PRNG_ID

    def __post_init__(self):
        if not 0.0 < self.p < 0.5:
            raise ValueError(f"p must lie strictly inside (0, 1/2), got {self.p}")
        if not 0 <= self.master_seed < (1 << 64):
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.prng_id != PRNG_ID:
            raise ValueError(f"unknown prng_id {self.prng_id!r}; this build "
                             f"implements {PRNG_ID!r}")


def stream_bytes(master_seed: int, label: bytes, index: int, nbytes: int) -> bytes:
    """Deterministic byte stream for one (seed, label, index) triple."""
    header = (_DOMAIN + master_seed.to_bytes(8, "big") + label + b"/"
              + index.to_bytes(16, "big"))
    out = bytearray()
    ctr = 0
    while len(out) < nbytes:
        out += hashlib.sha256(header + ctr.to_bytes(8, "big")).digest()
        ctr += 1
    return bytes(out[:nbytes])


def noise_word(ch: ChannelSpec, stream_index: int, n: int) -> BitWord:
    """Bernoulli(p) noise of length n.  Bit i thresholds the i-th 8-byte
    word of the trial stream against p, so each position is independent."""
    raw = stream_bytes(ch.master_seed, b"noise", stream_index, 8 * n)
    words = np.frombuffer(raw, dtype=">u8")
    # Exact: scaling by 2^64 only shifts the float exponent.
    flips = words < np.uint64(int(ch.p * 2.0**64))
    packed = np.packbits(flips)
    value = int.from_bytes(packed.tobytes(), "big") >> (8 * len(packed) - n)
    return BitWord(n, value)


def transmit(c: BitWord, ch: ChannelSpec, stream_index: int) -> BitWord:
    """Send c through BSC(p); each bit flips independently with probability
    p, determined entirely by (master_seed, stream_index, position)."""
    return c ^ noise_word(ch, stream_index, c.length)


def random_message(master_seed: int, stream_index: int, k: int) -> BitWord:
    """Uniform k-bit message from the seeded stream (label 'msg')."""
    nbytes = (k + 7) // 8
    raw = stream_bytes(master_seed, b"msg", stream_index, nbytes)
    return BitWord(k, int.from_bytes(raw, "big") >> (8 * nbytes - k))


def pair_error_prob_exact(i: int, p: float | Fraction) -> Fraction:
    """Exact probability that BSC(p) flips at least ceil(i/2) of i fixed
    positions: the pairwise error to a codeword of weight i."""
    if i < 1:
        raise ValueError("i must be at least 1")
    q = Fraction(p)
    if not 0 < q < 1:
        raise ValueError("p must lie in (0, 1)")
    return sum(
        math.comb(i, j) * q**j * (1 - q) ** (i - j)
        for j in range((i + 1) // 2, i + 1)
    )


def pair_error_prob(i: int, p: float) -> float:
    return float(pair_error_prob_exact(i, p))


def exponent_beta(p: float) -> float:
    """Pairwise-error exponent -log2(4p(1-p))/2; positive for p < 1/2."""
    if not 0.0 < p < 0.5:
        raise ValueError(f"p must lie strictly inside (0, 1/2), got {p}")
    return -0.5 * math.log2(4.0 * p * (1.0 - p))
