"""Row-by-row generator-matrix construction.

Each appended row must near-evenly split every large unmarked weight class
(words grouped by current codeword weight) and must elevate at least 1/8 of
the lightest class.  Classes whose unmarked part falls below a size
threshold are frozen into the marked set, which only ever grows.  The next
row is always the smallest candidate, in integer order, passing both
predicates, so the whole construction is deterministic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf2 import BitWord, GeneratorMatrix, dot

MATRIX_MAGIC = "RATELESS-G v1"

ELEVATION_FRACTION = Fraction(1, 8)


class RowSearchError(RuntimeError):
    """All 2^k candidate rows failed the split/elevate predicates.

    This is never expected for honestly maintained state; it signals a bug
    or corrupted state rather than a condition to recover from.
    """

    def __init__(self, k: int, n: int):
        super().__init__(
            f"no candidate row among 2^{k} vectors is valid at n={n}; "
            "refusing to relax the predicates"
        )
        self.k = k
        self.n = n


class MatrixFormatError(ValueError):
    """Malformed matrix file; carries the 1-based offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class BuilderMode:
    """Marking threshold policy: a class is small when its unmarked part
    has fewer than factor * n^2 members (strict mode uses factor 2)."""

    name: str
    factor: float = 2.0

    def threshold(self, n: int) -> float:
        return self.factor * n * n

    def __str__(self) -> str:
        if self.name == "strict":
            return "strict"
        return f"scaled:{self.factor!r}"


STRICT = BuilderMode("strict", 2.0)


def scaled(factor: float) -> BuilderMode:
    if not factor > 0:
        raise ValueError("threshold factor must be positive")
    return BuilderMode("scaled", float(factor))


def parse_mode(text: str) -> BuilderMode:
    if text == "strict":
        return STRICT
    if text.startswith("scaled:"):
        return scaled(float(text[len("scaled:"):]))
    raise ValueError(f"unknown builder mode: {text!r}")


def splits(R: BitWord, S, eps) -> bool:
    """True iff the count of members of S non-orthogonal to R lies within
    (1/2 - eps)|S| .. (1/2 + eps)|S|.  Empty S always splits.

    eps may be a float or an exact Fraction; comparisons are exact either
    way.
    """
    e = Fraction(eps)
    if not 0 <= e < Fraction(1, 2):
        raise ValueError("eps must lie in [0, 1/2)")
    members = list(S)
    if not members:
        return True
    cnt = sum(dot(s, R) for s in members)
    size = len(members)
    return (Fraction(1, 2) - e) * size <= cnt <= (Fraction(1, 2) + e) * size


def elevates(R: BitWord, S, eps) -> bool:
    """True iff at least an eps fraction of S is non-orthogonal to R.
    Empty S always elevates."""
    e = Fraction(eps)
    if not 0 < e <= 1:
        raise ValueError("eps must lie in (0, 1]")
    members = list(S)
    if not members:
        return True
    cnt = sum(dot(s, R) for s in members)
    return cnt >= e * len(members)


def splits_at_inverse_sqrt(count: int, size: int, n: int) -> bool:
    """Split test at tolerance eps = 1/(2*sqrt(n)), exact in integers.

    |count - size/2| <= eps*size  <=>  (size - 2*count)^2 * n <= size^2.
    """
    dev = size - 2 * count
    return dev * dev * n <= size * size


def _parity_u32(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values) & np.uint8(1)


def _fwht(a: np.ndarray) -> np.ndarray:
    """Fast Walsh-Hadamard transform over int64; length must be 2^k.

    Output index r holds sum_s a[s] * (-1)^popcount(s AND r), so for a 0/1
    indicator of a set S it equals |S| - 2*|{s in S : s.R = 1}|.
    """
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(-1, 2 * h)
        left = a[:, :h].copy()
        a[:, :h] = left + a[:, h:]
        a[:, h:] = left - a[:, h:]
        h *= 2
    return a.reshape(-1)


class BuilderState:
    """Mutable construction state: the matrix plus, for every nonzero k-bit
    word, its current codeword weight and whether it is marked.

    The zero word is never tracked or marked.  Serialization goes through
    the matrix file format; `replay` rebuilds the bookkeeping from rows
    without re-running the candidate search.
    """

    def __init__(self, k: int, mode: BuilderMode = STRICT,
                 skip_elevation_if_unmarked: bool = False):
        if not 1 <= k <= 24:
            raise ValueError("k out of supported range 1..24")
        self.k = k
        self.mode = mode
        self.skip_elevation_if_unmarked = skip_elevation_if_unmarked
        self.matrix = GeneratorMatrix.identity(k)
        self._idx = np.arange(1 << k, dtype=np.uint32)
        self._weights = np.bitwise_count(self._idx).astype(np.int64)
        self._marked = np.zeros(1 << k, dtype=bool)
        self._marked_at = -1

    # -- inspection -----------------------------------------------------

    @property
    def n(self) -> int:
        return self.matrix.n_rows

    @property
    def marked_count(self) -> int:
        return int(self._marked.sum())

    def is_marked(self, word: BitWord) -> bool:
        return bool(self._marked[word.value])

    def marked_words(self) -> set[BitWord]:
        return {BitWord(self.k, int(v)) for v in np.nonzero(self._marked)[0]}

    def weight_of(self, word: BitWord) -> int:
        """Current codeword weight of an information word."""
        if word.length != self.k:
            raise ValueError("word length mismatch")
        return int(self._weights[word.value])

    def weight_classes(self) -> dict[int, set[BitWord]]:
        """Partition of the nonzero words by current codeword weight."""
        out: dict[int, set[BitWord]] = {}
        w = self._weights
        for i in np.unique(w[1:]).tolist():
            members = np.nonzero(w == i)[0]
            out[int(i)] = {BitWord(self.k, int(v)) for v in members if v != 0}
        return out

    # -- the construction steps ------------------------------------------

    def mark_small_classes(self) -> None:
        """Freeze every class whose unmarked part is below the threshold.

        Afterwards every nonempty unmarked class has at least threshold
        members.  Marking is monotone: nothing is ever unmarked.
        """
        thr = self.mode.threshold(self.n)
        w = self._weights
        for i in np.unique(w[1:]).tolist():
            members = w == i
            members[0] = False
            unmarked = int((members & ~self._marked).sum())
            if unmarked < thr:
                self._marked |= members
        self._marked_at = self.n

    def min_positive_weight(self) -> int:
        return int(self._weights[1:].min())

    def find_next_row(self) -> BitWord:
        """Smallest candidate (integer order) that splits every nonempty
        unmarked class at tolerance 1/(2*sqrt(n)) and elevates 1/8 of the
        lightest class.  mark_small_classes must have run at the current n.
        """
        n = self.n
        if self._marked_at != n:
            raise RuntimeError("mark_small_classes has not run at the current n")
        w = self._weights
        d = self.min_positive_weight()

        valid = np.ones(1 << self.k, dtype=bool)
        split_sets: list[tuple[np.ndarray, int]] = []
        unmarked_d = 0
        for i in np.unique(w[1:]).tolist():
            members = w == i
            members[0] = False
            unmarked = members & ~self._marked
            size = int(unmarked.sum())
            if i == d:
                unmarked_d = size
            if size == 0:
                continue
            split_sets.append((unmarked, size))
            t = _fwht(unmarked.astype(np.int64))
            valid &= t * t * n <= size * size

        elevation_needed = not (self.skip_elevation_if_unmarked and unmarked_d > 0)
        if elevation_needed:
            members_d = w == d
            size_d = int(members_d.sum())
            t = _fwht(members_d.astype(np.int64))
            # count >= size/8  <=>  4*(size - t) >= size
            valid &= 4 * (size_d - t) >= size_d

        cand = int(np.argmax(valid))
        if not valid[cand]:
            raise RowSearchError(self.k, n)

        self._verify_candidate(cand, d, split_sets, elevation_needed)
        return BitWord(self.k, cand)

    def _verify_candidate(self, cand: int, d: int, split_sets, elevation_needed):
        # Recount through a separate popcount path as a post-hoc check on
        # the transform-based scan.
        for unmarked, size in split_sets:
            vals = self._idx[unmarked]
            cnt = int((np.bitwise_count(vals & np.uint32(cand)) & 1).sum())
            if not splits_at_inverse_sqrt(cnt, size, self.n):
                raise RuntimeError(
                    f"candidate {cand} failed split re-verification at n={self.n}"
                )
        if elevation_needed:
            vals = self._idx[self._weights == d]
            cnt = int((np.bitwise_count(vals & np.uint32(cand)) & 1).sum())
            if not cnt * 8 >= len(vals):
                raise RuntimeError(
                    f"candidate {cand} failed elevation re-verification at n={self.n}"
                )

    def _append_row(self, row: BitWord) -> None:
        self.matrix.append_row(row)
        flips = _parity_u32(self._idx & np.uint32(row.value))
        self._weights += flips

    def extend_to(self, n_target: int) -> BuilderState:
        """Grow the matrix to n_target rows; returns self.

        Extending to n1 and then to n2 yields the same matrix as extending
        to n2 directly.
        """
        if n_target < self.n:
            raise ValueError(f"n_target={n_target} below current n={self.n}")
        while self.n < n_target:
            if self._marked_at != self.n:
                self.mark_small_classes()
            row = self.find_next_row()
            self._append_row(row)
        return self

    # -- persistence -----------------------------------------------------

    @classmethod
    def replay(cls, matrix: GeneratorMatrix, mode: BuilderMode) -> BuilderState:
        """Rebuild weight/mark bookkeeping from existing rows, skipping the
        candidate search.  The result can keep extending the matrix."""
        state = cls(matrix.k, mode)
        for i in range(matrix.k + 1, matrix.n_rows + 1):
            state.mark_small_classes()
            state._append_row(matrix.row(i))
        return state

    def recompute_weights(self) -> np.ndarray:
        """Weights recomputed from scratch off the matrix rows (oracle for
        the incremental bookkeeping)."""
        fresh = np.zeros(1 << self.k, dtype=np.int64)
        for rv in self.matrix.row_values:
            fresh += _parity_u32(self._idx & np.uint32(rv))
        return fresh


# -- matrix file format ---------------------------------------------------


def matrix_to_bytes(G: GeneratorMatrix, mode: BuilderMode) -> bytes:
    lines = [MATRIX_MAGIC, f"k {G.k}", f"mode {mode}"]
    lines.extend(format(v, f"0{G.k}b") for v in G.row_values)
    return ("\n".join(lines) + "\n").encode("ascii")


def matrix_sha256(G: GeneratorMatrix, mode: BuilderMode) -> str:
    return hashlib.sha256(matrix_to_bytes(G, mode)).hexdigest()


def parse_matrix(data: bytes) -> tuple[GeneratorMatrix, BuilderMode]:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as e:
        raise MatrixFormatError(0, f"not ASCII: {e}") from None
    lines = text.splitlines()
    if not lines or lines[0] != MATRIX_MAGIC:
        raise MatrixFormatError(1, f"expected header {MATRIX_MAGIC!r}")
    if len(lines) < 3:
        raise MatrixFormatError(len(lines), "missing k/mode header lines")
    if not lines[1].startswith("k "):
        raise MatrixFormatError(2, "expected 'k <k>'")
    try:
        k = int(lines[1][2:])
    except ValueError:
        raise MatrixFormatError(2, f"bad k value: {lines[1][2:]!r}") from None
    if k < 1:
        raise MatrixFormatError(2, f"k must be positive, got {k}")
    if not lines[2].startswith("mode "):
        raise MatrixFormatError(3, "expected 'mode <strict|scaled:factor>'")
    try:
        mode = parse_mode(lines[2][5:])
    except ValueError as e:
        raise MatrixFormatError(3, str(e)) from None
    rows = []
    for off, line in enumerate(lines[3:], start=4):
        if len(line) != k or line.strip("01"):
            raise MatrixFormatError(off, f"expected a {k}-character 0/1 row")
        rows.append(int(line, 2))
    if len(rows) < k:
        raise MatrixFormatError(len(lines), f"fewer than k={k} rows")
    for j in range(k):
        if rows[j] != 1 << (k - 1 - j):
            raise MatrixFormatError(4 + j, "identity prefix violated")
    return GeneratorMatrix(k, rows), mode


def save_matrix(path, G: GeneratorMatrix, mode: BuilderMode) -> str:
    """Write the canonical matrix file; returns its SHA-256 hex digest."""
    data = matrix_to_bytes(G, mode)
    with open(path, "wb") as fh:
        fh.write(data)
    return hashlib.sha256(data).hexdigest()


def load_matrix(path) -> tuple[GeneratorMatrix, BuilderMode]:
    with open(path, "rb") as fh:
        return parse_matrix(fh.read())
