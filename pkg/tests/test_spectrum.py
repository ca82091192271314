import math
from fractions import Fraction

import pytest

from rateless.builder import BuilderState, STRICT
from rateless.gf2 import BitWord, GeneratorMatrix, encode_prefix, hamming_weight
from rateless.inner import InnerCode
from rateless.spectrum import (
    WeightDistribution,
    bin_process_bound,
    check_spectrum_bounds,
    distance_cut,
    ideal_weight,
    min_distance,
    pi_bound,
    weight_distribution,
)


def test_weight_distribution_identity_binomial():
    code = InnerCode(GeneratorMatrix.identity(5))
    wd = weight_distribution(code, 5)
    assert wd.w == tuple(math.comb(5, i) for i in range(6))


def test_weight_distribution_example_and_oracle():
    G = GeneratorMatrix(2, [0b10, 0b01, 0b01])
    wd = weight_distribution(InnerCode(G), 3)
    assert wd.w == (1, 1, 1, 1)
    # oracle: recount through encode_prefix
    counts = [0] * 4
    for mv in range(4):
        counts[hamming_weight(encode_prefix(G, BitWord(2, mv), 3))] += 1
    assert tuple(counts) == wd.w


def test_weight_distribution_partition_and_injectivity():
    st = BuilderState(6, STRICT).extend_to(24)
    wd = weight_distribution(InnerCode(st.matrix), 24)
    assert sum(wd.w) == 64
    assert wd.w[0] == 1


def test_weight_distribution_validates():
    with pytest.raises(ValueError):
        WeightDistribution(3, 2, (1, 1, 1))  # wrong length
    with pytest.raises(ValueError):
        WeightDistribution(3, 2, (1, 1, 1, 2))  # wrong total


def test_split_recurrence_against_builder():
    # appending a row moves exactly the non-orthogonal part of each class
    # up one weight
    st = BuilderState(5, STRICT)
    code = InnerCode(st.matrix)
    prev = weight_distribution(code, 5).w
    for n in range(6, 16):
        before = st.weight_classes()
        st.extend_to(n)
        row = st.matrix.row(n)
        wd = weight_distribution(InnerCode(st.matrix), n).w
        for i in range(n + 1):
            stay = sum(
                1 for w in before.get(i, ()) if (w.value & row.value).bit_count() % 2 == 0
            )
            up = sum(
                1 for w in before.get(i - 1, ()) if (w.value & row.value).bit_count() % 2 == 1
            )
            expected = stay + up + (1 if i == 0 else 0)  # zero word stays at 0
            assert wd[i] == expected
        prev = wd


def test_ideal_weight_examples():
    assert ideal_weight(5, 5, 2) == math.comb(5, 2)
    assert ideal_weight(4, 2, 2) == 1.5
    total = sum(ideal_weight(10, 4, i) for i in range(11))
    assert total == pytest.approx(2**4, rel=1e-12)


def test_ideal_weight_recurrence():
    for n in range(5, 40, 7):
        for k in range(2, n):
            for i in range(1, n):
                lhs = ideal_weight(n, k, i)
                rhs = 0.5 * (ideal_weight(n - 1, k, i - 1) + ideal_weight(n - 1, k, i))
                assert lhs == pytest.approx(rhs, rel=1e-12)


def test_pi_bound_examples():
    assert pi_bound(4, 5) == 1.0
    assert pi_bound(4, 6) == pytest.approx(1 + 1 / math.sqrt(5), rel=1e-12)
    assert pi_bound(4, 6) <= math.exp(2 * (math.sqrt(6) - 2))


def test_pi_bound_exponential_cap_grid():
    for k in (2, 4, 8, 16):
        for n in range(k + 1, k + 60):
            assert pi_bound(k, n) <= math.exp(2 * (math.sqrt(n) - math.sqrt(k)))


def test_bin_process_bound_examples():
    assert bin_process_bound(4, 0, 2) == math.comb(4, 2)
    assert bin_process_bound(4, 3, 2) == pytest.approx((8 / 27) * 21, rel=1e-12)


def test_bin_process_bound_dominates_recurrence():
    # oracle: simulate |W_i| <= (2/3)(|W_{i-1}| + |W_i|) from C(k, i) seeds
    for k in (3, 5, 8):
        sizes = {i: Fraction(math.comb(k, i)) for i in range(k + 1)}
        for t in range(1, 12):
            sizes = {
                i: Fraction(2, 3) * (sizes.get(i - 1, 0) + sizes.get(i, 0))
                for i in range(k + t + 1)
            }
            for i in range(k + t + 1):
                bound = Fraction(2, 3) ** t * math.comb(k + t, i)
                assert sizes[i] <= bound


def test_min_distance_examples():
    assert min_distance(InnerCode(GeneratorMatrix.identity(4)), 4) == 1
    G = GeneratorMatrix(2, [0b10, 0b01, 0b01, 0b10])
    assert min_distance(InnerCode(G), 4) == 2


def test_min_distance_beats_claim_bound_strict():
    for k in (4, 6, 8):
        st = BuilderState(k, STRICT).extend_to(6 * k)
        code = InnerCode(st.matrix)
        for n in (2 * k, 4 * k, 6 * k):
            assert min_distance(code, n) > distance_cut(n, k)


def test_check_spectrum_identity_passes():
    report = check_spectrum_bounds(InnerCode(GeneratorMatrix.identity(6)), 6)
    assert report.passed
    assert all(r.claim == "weight" for r in report.rows)


def test_check_spectrum_strict_build_passes():
    st = BuilderState(8, STRICT).extend_to(32)
    report = check_spectrum_bounds(InnerCode(st.matrix), 32, st.marked_count)
    assert report.passed
    claims = {r.claim for r in report.rows}
    assert "weight" in claims and "marked" in claims


def test_check_spectrum_adversarial_distance_failure():
    # rows that pin one word at weight 1 while n-k grows to 4000
    k = 2
    rows = [0b10, 0b01] + [0b01] * 4000
    G = GeneratorMatrix(k, rows)
    n = G.n_rows
    cut = distance_cut(n, k)
    assert cut == pytest.approx(6.08, abs=0.05)
    report = check_spectrum_bounds(InnerCode(G), n)
    dist_rows = [r for r in report.rows if r.claim == "dist"]
    assert len(dist_rows) == math.floor(cut)
    assert not dist_rows[0].passed  # w_1 = 1 inside the forbidden range
    assert not report.passed


def test_distance_cut_below_one_for_small_n():
    # the cut can never reach 1 below n=16, so the advisory carve-out for
    # small n never sees an actual dist row
    for n in range(2, 16):
        for k in range(1, n):
            assert distance_cut(n, k) < 1
    rows = [0b10, 0b01] + [0b01] * 13
    report = check_spectrum_bounds(InnerCode(GeneratorMatrix(2, rows)), 15)
    assert not any(r.claim == "dist" for r in report.rows)
    assert report.passed


def test_report_csv_shape():
    st = BuilderState(4, STRICT).extend_to(12)
    report = check_spectrum_bounds(InnerCode(st.matrix), 12, st.marked_count)
    lines = report.to_csv().strip().splitlines()
    assert lines[0] == "claim,i,observed,bound,pass"
    assert len(lines) == len(report.rows) + 1
