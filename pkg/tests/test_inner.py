import random

import pytest

from rateless.analysis import case1_bound, delta_gv, poltyrev_certificate
from rateless.builder import BuilderState, STRICT
from rateless.channel import ChannelSpec, noise_word
from rateless.cli import run_inner_point, wilson_interval
from rateless.gf2 import BitWord, GeneratorMatrix, encode_prefix
from rateless.inner import InnerCode
from rateless.spectrum import weight_distribution


def brute_force_decode(G, y):
    """Independent oracle: scan all messages through encode_prefix."""
    best = None
    for mv in range(1 << G.k):
        cw = encode_prefix(G, BitWord(G.k, mv), y.length)
        d = (cw.value ^ y.value).bit_count()
        if best is None or (d, mv) < best:
            best = (d, mv)
    return BitWord(G.k, best[1])


def test_ml_decode_spec_examples():
    G = GeneratorMatrix(2, [0b10, 0b01, 0b01])
    code = InnerCode(G)
    # oracle distance table for y=010: messages 00,01,10,11
    y = BitWord.from_bits("010")
    dists = [
        (encode_prefix(G, BitWord(2, mv), 3).value ^ y.value).bit_count()
        for mv in range(4)
    ]
    assert dists == [1, 1, 2, 2]
    assert str(code.ml_decode(y)) == "00"  # tie 00/01 -> smaller message
    y2 = BitWord.from_bits("110")
    dists2 = [
        (encode_prefix(G, BitWord(2, mv), 3).value ^ y2.value).bit_count()
        for mv in range(4)
    ]
    assert dists2 == [2, 2, 1, 1]
    assert str(code.ml_decode(y2)) == "10"  # tie 10/11 -> smaller message


def test_noiseless_roundtrip_all_messages():
    st = BuilderState(5, STRICT).extend_to(15)
    code = InnerCode(st.matrix)
    for n in (5, 9, 15):
        for mv in range(32):
            m = BitWord(5, mv)
            assert code.ml_decode(encode_prefix(st.matrix, m, n)) == m


def test_matches_brute_force_oracle():
    st = BuilderState(4, STRICT).extend_to(12)
    code = InnerCode(st.matrix)
    rng = random.Random(21)
    for _ in range(200):
        n = rng.choice([4, 7, 10, 12])
        y = BitWord(n, rng.randrange(1 << n))
        assert code.ml_decode(y) == brute_force_decode(st.matrix, y)


def test_decode_output_is_at_minimum_distance():
    st = BuilderState(6, STRICT).extend_to(18)
    code = InnerCode(st.matrix)
    rng = random.Random(8)
    for _ in range(50):
        y = BitWord(18, rng.getrandbits(18))
        decoded = code.ml_decode(y)
        d_hat = (encode_prefix(st.matrix, decoded, 18).value ^ y.value).bit_count()
        for mv in range(64):
            d = (encode_prefix(st.matrix, BitWord(6, mv), 18).value ^ y.value).bit_count()
            assert d_hat <= d


def test_underdetermined_rejected():
    code = InnerCode(GeneratorMatrix.identity(3))
    with pytest.raises(ValueError):
        code.ml_decode(BitWord.from_bits("10"))
    with pytest.raises(ValueError):
        code.ml_decode(BitWord.from_bits("1010"))  # beyond rows


def test_decode_deterministic_across_runs():
    st = BuilderState(4, STRICT).extend_to(12)
    y = BitWord(12, 0b101101001110)
    first = InnerCode(st.matrix).ml_decode(y)
    second = InnerCode(BuilderState(4, STRICT).extend_to(12).matrix).ml_decode(y)
    assert first == second


def test_error_rate_below_analytic_predictor():
    # all-zero codeword over BSC(p): one-sided 99% check against the
    # light-codeword union bound plus the heavy-codeword certificate bound
    k, n, p, trials = 8, 48, 0.1, 2000
    st = BuilderState(k, STRICT).extend_to(n)
    code = InnerCode(st.matrix)
    errors = run_inner_point(code, n, p, 99, 0, trials, message_policy="all-zero")
    lo, _ = wilson_interval(errors, trials)
    delta = 0.3
    wd = weight_distribution(code, n)
    cert = poltyrev_certificate(wd, p, delta, tau=delta_gv(n, k))
    predictor = case1_bound(n, k, p) + cert.inputs["prob_bound"]
    assert lo <= predictor
