"""Exhaustive maximum-likelihood codec for generator-matrix prefixes.

Decoding scans all 2^k codewords; ties are broken toward the smallest
message integer so results are reproducible.  Codeword tables are built
once per prefix length and kept packed for vectorized Hamming distances.
"""

from __future__ import annotations

import numpy as np

from .gf2 import BitWord, GeneratorMatrix


def _pack_values(values, n: int) -> np.ndarray:
    """Pack ints (< 2^n) into rows of little-endian uint64 words."""
    width = (n + 63) // 64
    raw = b"".join(v.to_bytes(width * 8, "little") for v in values)
    return np.frombuffer(raw, dtype="<u8").reshape(len(values), width)


class InnerCode:
    """A generator matrix plus exhaustive ML decoding over its prefixes."""

    def __init__(self, G: GeneratorMatrix):
        self.G = G
        self.k = G.k
        self._value_cache: dict[int, list[int]] = {}
        self._packed_cache: dict[int, np.ndarray] = {}

    def codeword_values(self, n: int) -> list[int]:
        """All 2^k codewords of the length-n prefix, indexed by message
        integer.  Built by XOR dynamic programming over message bits."""
        cached = self._value_cache.get(n)
        if cached is not None:
            return cached
        if not self.k <= n <= self.G.n_rows:
            raise ValueError(f"n={n} out of range {self.k}..{self.G.n_rows}")
        rows = self.G.row_values
        # cols[b] is the codeword of the unit message with integer bit b set.
        cols = [0] * self.k
        for b in range(self.k):
            col = 0
            for i in range(n):
                col = (col << 1) | ((rows[i] >> b) & 1)
            cols[b] = col
        table = [0] * (1 << self.k)
        for msg in range(1, 1 << self.k):
            low = msg & -msg
            table[msg] = table[msg ^ low] ^ cols[low.bit_length() - 1]
        self._value_cache[n] = table
        return table

    def _packed(self, n: int) -> np.ndarray:
        cached = self._packed_cache.get(n)
        if cached is None:
            cached = _pack_values(self.codeword_values(n), n)
            self._packed_cache[n] = cached
        return cached

    def ml_decode_value(self, y_value: int, n: int) -> int:
        """Message integer closest in Hamming distance to the n-bit word."""
        table = self._packed(n)
        y = _pack_values([y_value], n)
        dist = np.bitwise_count(table ^ y).sum(axis=1)
        return int(np.argmin(dist))

    def ml_decode(self, y: BitWord) -> BitWord:
        """Closest-codeword decoding of a received n-bit word, n >= k.

        Among equidistant codewords the smallest message integer wins.
        """
        n = y.length
        if n < self.k:
            raise ValueError(f"received length {n} is below k={self.k}")
        if n > self.G.n_rows:
            raise ValueError(f"received length {n} exceeds rows ({self.G.n_rows})")
        return BitWord(self.k, self.ml_decode_value(y.value, n))
