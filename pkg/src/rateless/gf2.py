"""Bit-packed GF(2) vectors and prefix-extendable generator matrices.

Words are stored as plain Python integers.  Position 1 of a word is its most
significant bit, so reading a word as an integer matches reading its bit
string left to right: for length 2 the order is 00 < 01 < 10 < 11.  That
integer order is the tie-break and "first candidate" order used everywhere
else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class BitWord:
    """Fixed-length GF(2) vector packed into an int."""

    length: int
    value: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("BitWord length must be positive")
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(
                f"value {self.value} does not fit in {self.length} bits"
            )

    @classmethod
    def from_bits(cls, bits: str) -> BitWord:
        """Parse a '0'/'1' string, most significant position first."""
        if not bits or bits.strip("01"):
            raise ValueError(f"not a bit string: {bits!r}")
        return cls(len(bits), int(bits, 2))

    @classmethod
    def zeros(cls, length: int) -> BitWord:
        return cls(length, 0)

    def bit(self, pos: int) -> int:
        """Bit at 1-based position pos (position 1 is the most significant)."""
        if not 1 <= pos <= self.length:
            raise IndexError(f"position {pos} out of range 1..{self.length}")
        return (self.value >> (self.length - pos)) & 1

    def __xor__(self, other: BitWord) -> BitWord:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitWord(self.length, self.value ^ other.value)

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b")


def dot(u: BitWord, v: BitWord) -> int:
    """Inner product over GF(2): parity of the AND of the two words."""
    if u.length != v.length:
        raise ValueError(f"length mismatch: {u.length} vs {v.length}")
    return (u.value & v.value).bit_count() & 1


def hamming_weight(v: BitWord) -> int:
    """Number of 1 bits."""
    return v.value.bit_count()


class GeneratorMatrix:
    """Ordered, append-only sequence of k-bit rows beginning with the identity.

    Rows already present are never mutated, so every encoding against the
    first n rows stays a prefix of the encoding against the first n' > n
    rows.
    """

    __slots__ = ("k", "_rows")

    def __init__(self, k: int, row_values=None):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        if row_values is None:
            row_values = [1 << (k - 1 - j) for j in range(k)]
        row_values = list(row_values)
        if len(row_values) < k:
            raise ValueError(f"need at least k={k} rows, got {len(row_values)}")
        for j in range(k):
            if row_values[j] != 1 << (k - 1 - j):
                raise ValueError(f"row {j + 1} is not identity row {j + 1}")
        for i, v in enumerate(row_values):
            if not 0 <= v < (1 << k):
                raise ValueError(f"row {i + 1} does not fit in {k} bits")
        self._rows = row_values

    @classmethod
    def identity(cls, k: int) -> GeneratorMatrix:
        return cls(k)

    @property
    def n_rows(self) -> int:
        return len(self._rows)

    @property
    def row_values(self) -> list[int]:
        """Row values as ints, in order.  Treat as read-only."""
        return self._rows

    def row(self, i: int) -> BitWord:
        """Row i, 1-based."""
        if not 1 <= i <= len(self._rows):
            raise IndexError(f"row {i} out of range 1..{len(self._rows)}")
        return BitWord(self.k, self._rows[i - 1])

    def append_row(self, row: BitWord) -> None:
        if row.length != self.k:
            raise ValueError(f"row length {row.length} != k={self.k}")
        self._rows.append(row.value)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeneratorMatrix)
            and self.k == other.k
            and self._rows == other._rows
        )


def encode_prefix(G: GeneratorMatrix, m: BitWord, n: int) -> BitWord:
    """First n bits of the encoding of m: bit i is the GF(2) inner product
    of row i with m.  The identity prefix makes the first k bits equal m."""
    if m.length != G.k:
        raise ValueError(f"message length {m.length} != k={G.k}")
    if n < 1:
        raise ValueError("n must be positive")
    if n > G.n_rows:
        raise ValueError(f"n={n} exceeds available rows ({G.n_rows})")
    mv = m.value
    bits = 0
    for rv in G._rows[:n]:
        bits = (bits << 1) | ((rv & mv).bit_count() & 1)
    return BitWord(n, bits)
