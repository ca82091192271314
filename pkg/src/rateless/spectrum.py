"""Weight-distribution computation and spectral certification.

The checker certifies three facts about a constructed code: the marked set
stays below 2n^4, every weight count stays within 2n^4 of the ideal
binomial spectrum times the drift product, and no nonzero codeword exists
at or below the distance cut (n-k)/(55*log2 n).
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass
from fractions import Fraction

from .inner import InnerCode

# The distance-cut constant folds a log(2n^4) term whose simplification is
# only safe for moderately large n; below this the dist rows are reported
# but do not fail the certificate.
DIST_CLAIM_MIN_N = 16


@dataclass(frozen=True)
class WeightDistribution:
    """Exact weight counts w[i] = number of messages encoding to weight i."""

    n: int
    k: int
    w: tuple[int, ...]

    def __post_init__(self):
        if len(self.w) != self.n + 1:
            raise ValueError("w must have n+1 entries")
        if sum(self.w) != 1 << self.k:
            raise ValueError("weight counts must sum to 2^k")


def weight_distribution(code: InnerCode, n: int) -> WeightDistribution:
    """Exact counts from full 2^k enumeration."""
    counts = [0] * (n + 1)
    for value in code.codeword_values(n):
        counts[value.bit_count()] += 1
    return WeightDistribution(n, code.k, tuple(counts))


def ideal_weight(n: int, k: int, i: int) -> float:
    """Expected weight count C(n,i) * 2^(k-n) of a random [n,k] code."""
    if not 0 <= i <= n or k > n:
        raise ValueError("need 0 <= i <= n and k <= n")
    return float(Fraction(math.comb(n, i), 1 << (n - k)))


def pi_bound(k: int, n: int) -> float:
    """Drift product prod_{j=k+1}^{n-1} (1 + 1/sqrt(j)); empty for n=k+1."""
    if n < k + 1:
        raise ValueError("need n >= k+1")
    out = 1.0
    for j in range(k + 1, n):
        out *= 1.0 + 1.0 / math.sqrt(j)
    return out


def bin_process_bound(k: int, t: int, i: int) -> float:
    """(2/3)^t * C(k+t, i): dominates any bin process that retains and
    elevates at most 2/3 of each bin per step, seeded from C(k, i)."""
    if t < 0 or not 0 <= i <= k + t:
        raise ValueError("need t >= 0 and 0 <= i <= k+t")
    return float(Fraction(2, 3) ** t * math.comb(k + t, i))


def min_distance(code: InnerCode, n: int) -> int:
    """Minimum weight over nonzero codewords of the length-n prefix."""
    values = code.codeword_values(n)
    return min(v.bit_count() for v in values[1:])


def distance_cut(n: int, k: int) -> float:
    """Weight bound (n-k)/(55*log2 n) below which no codeword may exist."""
    if n <= k:
        return 0.0
    return (n - k) / (55 * math.log2(n))


@dataclass(frozen=True)
class SpectrumRow:
    claim: str  # "dist", "weight", or "marked"
    i: int | None
    observed: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class SpectrumReport:
    n: int
    k: int
    rows: tuple[SpectrumRow, ...]
    passed: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["claim", "i", "observed", "bound", "pass"])
        for row in self.rows:
            writer.writerow([
                row.claim,
                "" if row.i is None else row.i,
                repr(row.observed) if isinstance(row.observed, float) else row.observed,
                repr(row.bound) if isinstance(row.bound, float) else row.bound,
                row.passed,
            ])
        return buf.getvalue()


def check_spectrum_bounds(code: InnerCode, n: int,
                          marked_count: int | None = None) -> SpectrumReport:
    """Pass/fail per spectral claim for the length-n prefix.

    dist rows: zero weight classes at 0 < i <= (n-k)/(55*log2 n); advisory
    (reported, never failing) when n < DIST_CLAIM_MIN_N.  weight rows:
    w_i <= 2n^4 + ideal * drift for all larger i.  marked row: marked-set
    size < 2n^4, emitted when marked_count is supplied.
    """
    wd = weight_distribution(code, n)
    k = code.k
    rows: list[SpectrumRow] = []
    cut = distance_cut(n, k)
    for i in range(1, math.floor(cut) + 1):
        rows.append(SpectrumRow("dist", i, wd.w[i], 0, wd.w[i] == 0))
    drift = pi_bound(k, n) if n >= k + 1 else 1.0
    cap = 2 * n**4
    for i in range(math.floor(cut) + 1, n + 1):
        bound = cap + ideal_weight(n, k, i) * drift
        rows.append(SpectrumRow("weight", i, wd.w[i], bound, wd.w[i] <= bound))
    if marked_count is not None:
        rows.append(SpectrumRow("marked", None, marked_count, cap,
                                marked_count < cap))
    passed = all(
        row.passed
        for row in rows
        if not (row.claim == "dist" and n < DIST_CLAIM_MIN_N)
    )
    return SpectrumReport(n, k, tuple(rows), passed)
