"""Closed-form information-theoretic quantities and numeric certificates.

Everything here is a pure function of its inputs: entropy and capacity,
the Gilbert-Varshamov radius, real-argument binomials, the combinatorial
identities behind the heavy-codeword error bound, and the concatenation
error predictors.  Integer identities run in arbitrary precision; bound
evaluations switch to log space wherever exponents can leave float range.
"""

from __future__ import annotations

import io
import csv
import json
import math
from dataclasses import dataclass

from .channel import exponent_beta
from .spectrum import WeightDistribution, distance_cut


@dataclass(frozen=True)
class BoundReport:
    """One named check: pass means observed <= bound when observed is
    present, otherwise whatever conjunction the producing check defines
    (recorded in inputs)."""

    name: str
    inputs: dict
    bound_value: float
    observed: float | None
    passed: bool


def _report(name: str, inputs: dict, bound_value: float,
            observed: float | None = None,
            passed: bool | None = None) -> BoundReport:
    if observed is not None:
        passed = bool(observed <= bound_value)
    elif passed is None:
        raise ValueError("passed must be given when observed is absent")
    return BoundReport(name, dict(inputs), float(bound_value), observed, passed)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["name", "inputs", "bound", "observed", "pass"])
    for r in reports:
        writer.writerow([
            r.name,
            json.dumps(r.inputs, sort_keys=True),
            repr(r.bound_value),
            "" if r.observed is None else repr(r.observed),
            r.passed,
        ])
    return buf.getvalue()


def entropy(p: float) -> float:
    """Binary entropy, base 2, extended continuously to H(0) = H(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def capacity(p: float) -> float:
    """BSC capacity 1 - H(p)."""
    return 1.0 - entropy(p)


def prefix_length_for(p: float, delta: float, k: int) -> int:
    """Prefix length ceil(k / (capacity(p) - delta)) targeting a rate
    delta below capacity."""
    if k < 1:
        raise ValueError("k must be positive")
    c = capacity(p)
    if not 0.0 < delta < c:
        raise ValueError(f"delta must lie in (0, capacity={c}), got {delta}")
    return math.ceil(k / (c - delta))


def delta_gv(n: int, k: int) -> float:
    """Gilbert-Varshamov radius: the root x in (0, 1/2) of H(x) = 1 - k/n,
    found by bisection to float precision."""
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    target = 1.0 - k / n
    lo, hi = 0.0, 0.5
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return mid
        if entropy(mid) < target:
            lo = mid
        else:
            hi = mid


def real_binom(a: float, x: float) -> float:
    """Binomial coefficient extended to reals through the Gamma function."""
    if not 0 <= x <= a:
        raise ValueError("need a >= x >= 0")
    return math.exp(math.lgamma(a + 1) - math.lgamma(x + 1) - math.lgamma(a - x + 1))


def comb_argmax_check(a: float, b: float, x_grid=None) -> BoundReport:
    """Locate the integer maximizer of f(x) = C(a,x)C(b,x) and check it sits
    within 1 of (ab-1)/(a+b+2), with max f dominated by
    f(ab/(a+b)) * (ab)^4/(a+b)^4.  Requires 0 < a <= b and a^2 >= a+b."""
    if not 0 < a <= b:
        raise ValueError("need 0 < a <= b")
    if a * a < a + b:
        raise ValueError("need a^2 >= a + b")
    if x_grid is None:
        x_grid = range(0, math.floor(a) + 1)
    xs = list(x_grid)
    if not xs:
        raise ValueError("empty grid")
    values = [real_binom(a, x) * real_binom(b, x) for x in xs]
    f_max = max(values)
    x_star = xs[values.index(f_max)]
    t = (a * b - 1) / (a + b + 2)
    y = a * b / (a + b)
    bound = real_binom(a, y) * real_binom(b, y) * (a * b) ** 4 / (a + b) ** 4
    passed = abs(x_star - t) <= 1 and f_max <= bound
    return _report(
        "comb-argmax",
        {"a": a, "b": b, "t": t, "x_star": x_star, "f_max": f_max},
        bound,
        passed=passed,
    )


def poltyrev_identity_check(n: int, r: int, i: int) -> bool:
    """Exact combinatorial identity
    C(n,i) C(i,i/2) C(n-i,r-i/2) = C(n,r) C(r,i/2) C(n-r,i/2) for even i."""
    if i % 2 != 0:
        raise ValueError("i must be even")
    h = i // 2
    if not (0 <= i <= n and h <= r <= n and r - h <= n - i):
        raise ValueError("arguments out of the identity's domain")
    lhs = math.comb(n, i) * math.comb(i, h) * math.comb(n - i, r - h)
    rhs = math.comb(n, r) * math.comb(r, h) * math.comb(n - r, h)
    return lhs == rhs


def confusion_count(n: int, i: int, r: int) -> int:
    """Number of weight-r words at distance <= r from a fixed weight-i
    codeword: sum_{w=ceil(i/2)}^{r} C(i,w) C(n-i,r-w)."""
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    lo = (i + 1) // 2
    return sum(math.comb(i, w) * math.comb(n - i, r - w)
               for w in range(lo, r + 1) if r - w <= n - i)


def confusion_count_bound(n: int, i: int, r: int) -> int:
    """Upper bound n * C(i,ceil(i/2)) * C(n-i, r-ceil(i/2)); valid in the
    regime r <= n/2 where the last summand dominates."""
    lo = (i + 1) // 2
    if r < lo:
        return 0
    return n * math.comb(i, lo) * math.comb(n - i, r - lo)


def poltyrev_certificate(wd: WeightDistribution, p: float, delta: float,
                         tau: float, eps: float | None = None) -> BoundReport:
    """Spectral premise of the heavy-codeword error bound: every weight
    count at i >= tau*n must stay within a factor 2^((delta/3) n) of the
    ideal spectrum.  The report carries the resulting error exponent
    k - n + (delta/3) n + n H(p) evaluated at the typical-weight center
    and at the p +/- eps window endpoints, plus the n^6 * 2^exponent
    probability bound."""
    n, k = wd.n, wd.k
    if not k / n < 1.0 - entropy(p) - delta:
        raise ValueError("need k/n < 1 - H(p) - delta")
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    if eps is None:
        eps = min(0.5 - p, p) / 2
    bound = (delta / 3.0) * n
    observed = -math.inf
    for i in range(math.ceil(tau * n), n + 1):
        if wd.w[i] == 0:
            continue
        excess = math.log2(wd.w[i]) - (math.log2(math.comb(n, i)) + (k - n))
        observed = max(observed, excess)
    exponent = k - n + bound + n * entropy(p)
    exponent_lo = k - n + bound + n * entropy(p - eps)
    exponent_hi = k - n + bound + n * entropy(p + eps)
    log2_prob = 6 * math.log2(n) + exponent
    prob_bound = 2.0**log2_prob if log2_prob < 1024 else math.inf
    return _report(
        "poltyrev-spectrum",
        {"n": n, "k": k, "p": p, "delta": delta, "tau": tau, "eps": eps,
         "exponent": exponent, "exponent_lo": exponent_lo,
         "exponent_hi": exponent_hi, "prob_bound": prob_bound},
        bound,
        observed=observed,
    )


def case1_bound(n: int, k: int, p: float) -> float:
    """Union-bound predictor for ML decoding onto light codewords:
    (2n^4 + e^(2 sqrt n)) * sum of 2^(-beta i) over the weight range from
    the distance cut up to the Gilbert-Varshamov radius."""
    if not n > k:
        raise ValueError("need n > k")
    beta = exponent_beta(p)
    i0 = math.ceil(distance_cut(n, k))
    i1 = math.floor(delta_gv(n, k) * n)
    if i1 < i0:
        return 0.0
    total = sum(2.0 ** (-beta * i) for i in range(i0, i1 + 1))
    root2 = 2.0 * math.sqrt(n)
    factor = 2.0 * n**4 + (math.exp(root2) if root2 < 700 else math.inf)
    return factor * total


def chernoff_concat_bound(L: int, eps_out: float, eps_in: float,
                          mode: str = "chernoff") -> float:
    """Predictors for the concatenated decoder's block failure:
    chernoff mode 2^(-2 L (eps_out - eps_in)^2); union mode
    2^(H(eps_out) L) * eps_in^(eps_out L)."""
    if L < 1:
        raise ValueError("L must be at least 1")
    if not 0.0 < eps_in < eps_out < 1.0:
        raise ValueError("need 0 < eps_in < eps_out < 1")
    if mode == "chernoff":
        return 2.0 ** (-2.0 * L * (eps_out - eps_in) ** 2)
    if mode == "union":
        return 2.0 ** (entropy(eps_out) * L + eps_out * L * math.log2(eps_in))
    raise ValueError(f"unknown mode {mode!r}")
