"""Concatenated rateless code: Reed-Solomon outside, ML code inside.

A k-bit message is parsed into outer symbols, outer-encoded, padded to a
whole number of inner blocks, and each block is encoded by the inner code.
The stream interleaves the inner codewords row by row (bit 1 of every
block, then bit 2, ...), so any prefix of the stream is itself a codeword.

Outer symbols are dealt to inner blocks round-robin (symbol s goes to
block ((s-1) mod L_in) + 1).  With systematic inner and outer codes this
makes the first k stream bits a fixed permutation of the message bits
whenever L_in divides k_out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gf2 import BitWord, GeneratorMatrix, encode_prefix
from .inner import InnerCode
from .outer import OuterCodeSpec, ReedSolomonCode


@dataclass(frozen=True)
class ConcatParams:
    """Derived shape of one concatenated code instance."""

    beta: int           # outer alphabet size = inner message bits
    m: int              # bits per outer symbol = log2(beta)
    k: int              # total message bits
    k_out: int          # outer message symbols = k / m
    n_out: int          # outer codeword symbols
    pad_symbols: int    # zero symbols appended after outer encoding
    L_in: int           # number of inner blocks
    k_in: int           # inner message bits = beta

    @property
    def symbols_per_block(self) -> int:
        return self.k_in // self.m

    @property
    def decoding_radius(self) -> int:
        return (self.n_out - self.k_out) // 2

    @property
    def outer_rate(self) -> float:
        return self.k_out / self.n_out

    def as_dict(self) -> dict:
        return {
            "beta": self.beta, "m": self.m, "k": self.k,
            "k_out": self.k_out, "n_out": self.n_out,
            "pad_symbols": self.pad_symbols, "L_in": self.L_in,
            "k_in": self.k_in, "decoding_radius": self.decoding_radius,
            "outer_rate": self.outer_rate,
        }


def derive_params(k: int, beta: int, n_out: int | None = None) -> ConcatParams:
    """Derive all concatenation parameters from the message length and the
    alphabet-size knob beta.

    beta must be a power of two >= 4 whose log is itself a power of two
    (4, 16, 256, ...) so that inner blocks align to whole outer symbols.
    The outer length targets rate 1/(1 + beta^-1/2), capped at the
    Reed-Solomon field size; pass n_out to override (more redundancy).
    """
    if beta < 4 or beta & (beta - 1):
        raise ValueError(f"beta must be a power of two >= 4, got {beta}")
    m = beta.bit_length() - 1
    if m & (m - 1):
        raise ValueError(
            f"log2(beta)={m} must itself be a power of two so inner blocks "
            "align to outer symbols"
        )
    if k < 1 or k % m:
        raise ValueError(f"k={k} must be a positive multiple of log2(beta)={m}")
    k_out = k // m
    cap = (1 << m) - 1
    if k_out > cap:
        raise ValueError(
            f"k_out={k_out} exceeds the field cap {cap}; no n_out is feasible"
        )
    if n_out is None:
        n_out = min(cap, math.floor(k_out * (1.0 + beta**-0.5) + 0.5))
    if not k_out <= n_out <= cap:
        raise ValueError(f"n_out={n_out} outside {k_out}..{cap}")
    spb = beta // m
    pad = (-n_out) % spb
    L_in = (n_out + pad) // spb
    return ConcatParams(beta=beta, m=m, k=k, k_out=k_out, n_out=n_out,
                        pad_symbols=pad, L_in=L_in, k_in=beta)


class ConcatCode:
    """Binds ConcatParams to an inner generator matrix with k = beta."""

    def __init__(self, params: ConcatParams, G: GeneratorMatrix):
        if G.k != params.k_in:
            raise ValueError(f"inner matrix has k={G.k}, need k_in={params.k_in}")
        self.params = params
        self.inner = InnerCode(G)
        self.outer = ReedSolomonCode(
            OuterCodeSpec(params.m, params.k_out, params.n_out)
        )

    # -- parsing helpers ----------------------------------------------------

    def _message_symbols(self, m_bits: BitWord) -> list[int]:
        p = self.params
        if m_bits.length != p.k:
            raise ValueError(f"message length {m_bits.length} != k={p.k}")
        mask = (1 << p.m) - 1
        return [
            (m_bits.value >> (p.k - (s + 1) * p.m)) & mask
            for s in range(p.k_out)
        ]

    def inner_messages(self, m_bits: BitWord) -> list[BitWord]:
        """The L_in inner message blocks: outer codeword plus pad symbols,
        dealt round-robin across blocks."""
        p = self.params
        symbols = self.outer.encode(self._message_symbols(m_bits))
        symbols += [0] * p.pad_symbols
        blocks = []
        for j in range(p.L_in):
            value = 0
            for u in range(p.symbols_per_block):
                value = (value << p.m) | symbols[u * p.L_in + j]
            blocks.append(BitWord(p.k_in, value))
        return blocks

    def _check_n(self, n: int) -> int:
        p = self.params
        if n < 1 or n % p.L_in:
            raise ValueError(f"n={n} is not a multiple of L_in={p.L_in}")
        n_in = n // p.L_in
        if n_in < p.k_in:
            raise ValueError(f"n/L_in={n_in} is below k_in={p.k_in}")
        if n_in > self.inner.G.n_rows:
            raise ValueError(
                f"n/L_in={n_in} exceeds inner matrix rows ({self.inner.G.n_rows})"
            )
        return n_in

    # -- codec ----------------------------------------------------------------

    def encode(self, m_bits: BitWord, n: int) -> BitWord:
        """First n stream bits.  Position t carries bit ceil(t/L_in) of
        inner block ((t-1) mod L_in) + 1."""
        n_in = self._check_n(n)
        p = self.params
        blocks = [
            encode_prefix(self.inner.G, b, n_in).value
            for b in self.inner_messages(m_bits)
        ]
        value = 0
        for t in range(n):
            row, j = divmod(t, p.L_in)
            value = (value << 1) | ((blocks[j] >> (n_in - 1 - row)) & 1)
        return BitWord(n, value)

    def deinterleave(self, y: BitWord) -> list[BitWord]:
        """Split a received stream prefix into its L_in inner words."""
        n_in = self._check_n(y.length)
        p = self.params
        out = []
        for j in range(p.L_in):
            value = 0
            for row in range(n_in):
                t = row * p.L_in + j
                value = (value << 1) | ((y.value >> (y.length - 1 - t)) & 1)
            out.append(BitWord(n_in, value))
        return out

    def decode_with_blocks(self, y: BitWord) -> tuple[list[BitWord], BitWord | None]:
        """Full decode, also returning the ML-decoded inner blocks so
        callers can measure per-block error rates."""
        p = self.params
        decoded = [self.inner.ml_decode(w) for w in self.deinterleave(y)]
        symbols = []
        mask = (1 << p.m) - 1
        for s in range(p.n_out):
            u, j = divmod(s, p.L_in)
            block = decoded[j].value
            symbols.append((block >> (p.k_in - (u + 1) * p.m)) & mask)
        message = self.outer.decode(symbols)
        if message is None:
            return decoded, None
        value = 0
        for sym in message:
            value = (value << p.m) | sym
        return decoded, BitWord(p.k, value)

    def decode(self, y: BitWord) -> BitWord | None:
        """ML-decode every inner block, reassemble the outer word (pads
        dropped), outer-decode; None on outer decode failure."""
        return self.decode_with_blocks(y)[1]

    def systematic_permutation(self) -> tuple[int, ...]:
        """pi with stream bit t = message bit pi[t-1] for t <= k; defined
        when L_in divides k_out (message symbols fill whole block rows)."""
        p = self.params
        if p.k_out % p.L_in:
            raise ValueError(
                f"no message-bit permutation: L_in={p.L_in} does not divide "
                f"k_out={p.k_out}"
            )
        pi = []
        for t in range(1, p.k + 1):
            row = (t - 1) // p.L_in + 1
            j = (t - 1) % p.L_in + 1
            u = (row - 1) // p.m + 1
            b = (row - 1) % p.m + 1
            s = (u - 1) * p.L_in + j
            pi.append((s - 1) * p.m + b)
        if sorted(pi) != list(range(1, p.k + 1)):
            raise AssertionError("permutation construction is not a bijection")
        return tuple(pi)
