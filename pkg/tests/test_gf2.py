import random

import pytest

from rateless.gf2 import BitWord, GeneratorMatrix, dot, encode_prefix, hamming_weight


def bits(s):
    return BitWord.from_bits(s)


def test_bitword_validation():
    with pytest.raises(ValueError):
        BitWord(0, 0)
    with pytest.raises(ValueError):
        BitWord(3, 8)  # bit beyond length
    with pytest.raises(ValueError):
        BitWord.from_bits("10a")
    assert str(bits("0101")) == "0101"
    assert bits("101").bit(1) == 1 and bits("101").bit(2) == 0


def test_integer_order_matches_lexicographic():
    words = ["00", "01", "10", "11"]
    values = [bits(w).value for w in words]
    assert values == sorted(values)


def test_dot_examples():
    assert dot(bits("101"), bits("101")) == 0
    for v in range(8):
        assert dot(bits("000"), BitWord(3, v)) == 0
    # oracle: per-bit enumeration
    u, v = bits("110"), bits("011")
    expected = sum(u.bit(i) * v.bit(i) for i in (1, 2, 3)) % 2
    assert expected == 1
    assert dot(u, v) == 1


def test_dot_length_mismatch():
    with pytest.raises(ValueError):
        dot(bits("10"), bits("100"))


def test_hamming_weight_examples():
    assert hamming_weight(bits("0000")) == 0
    assert hamming_weight(bits("1111")) == 4
    w = bits("10110")
    assert sum(w.bit(i) for i in range(1, 6)) == 3
    assert hamming_weight(w) == 3


def test_encode_identity_prefix():
    G = GeneratorMatrix.identity(3)
    assert str(encode_prefix(G, bits("101"), 3)) == "101"
    assert str(encode_prefix(G, bits("000"), 3)) == "000"


def test_encode_per_row_oracle():
    G = GeneratorMatrix(2, [0b10, 0b01, 0b01])
    m = bits("11")
    expected = "".join(str(dot(G.row(i), m)) for i in (1, 2, 3))
    assert expected == "111"
    assert str(encode_prefix(G, m, 3)) == "111"


def test_encode_errors():
    G = GeneratorMatrix.identity(3)
    with pytest.raises(ValueError):
        encode_prefix(G, bits("10"), 2)  # length mismatch
    with pytest.raises(ValueError):
        encode_prefix(G, bits("101"), 4)  # beyond available rows


def test_prefix_property_exhaustive_small():
    rng = random.Random(11)
    k = 4
    rows = list(GeneratorMatrix.identity(k).row_values)
    rows += [rng.randrange(1 << k) for _ in range(12)]
    G = GeneratorMatrix(k, rows)
    for mv in range(1 << k):
        m = BitWord(k, mv)
        full = encode_prefix(G, m, G.n_rows)
        for n in range(1, G.n_rows):
            prefix = encode_prefix(G, m, n)
            assert str(full).startswith(str(prefix))


def test_linearity():
    rng = random.Random(5)
    k = 6
    rows = list(GeneratorMatrix.identity(k).row_values)
    rows += [rng.randrange(1 << k) for _ in range(20)]
    G = GeneratorMatrix(k, rows)
    for _ in range(50):
        m1 = BitWord(k, rng.randrange(1 << k))
        m2 = BitWord(k, rng.randrange(1 << k))
        n = rng.randrange(1, G.n_rows + 1)
        lhs = encode_prefix(G, m1 ^ m2, n)
        rhs = encode_prefix(G, m1, n) ^ encode_prefix(G, m2, n)
        assert lhs == rhs


def test_injective_for_n_at_least_k():
    rng = random.Random(9)
    k = 5
    rows = list(GeneratorMatrix.identity(k).row_values)
    rows += [rng.randrange(1 << k) for _ in range(7)]
    G = GeneratorMatrix(k, rows)
    for n in (k, k + 3, G.n_rows):
        seen = {encode_prefix(G, BitWord(k, mv), n).value for mv in range(1 << k)}
        assert len(seen) == 1 << k


def test_matrix_identity_prefix_enforced():
    with pytest.raises(ValueError):
        GeneratorMatrix(2, [0b01, 0b10])
    with pytest.raises(ValueError):
        GeneratorMatrix(3, [0b100, 0b010])  # fewer than k rows


def test_append_preserves_existing_rows():
    G = GeneratorMatrix.identity(2)
    before = list(G.row_values)
    G.append_row(bits("11"))
    assert G.row_values[:2] == before
    assert G.n_rows == 3
