"""Systematic Reed-Solomon outer code over GF(2^m).

Unique decoding up to floor((n_out - k_out)/2) symbol errors via
syndromes, Berlekamp-Massey, Chien search and Forney.  decode returns
None whenever it detects that correction failed; it never silently
reports a wrong answer it knows about.
"""

from __future__ import annotations

from dataclasses import dataclass

PRIMITIVE_POLY = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
}


@dataclass(frozen=True)
class OuterCodeSpec:
    """Symbol width plus [n_out, k_out] block shape, capped by the field."""

    symbol_bits: int
    k_out: int
    n_out: int

    def __post_init__(self):
        if self.symbol_bits not in PRIMITIVE_POLY:
            raise ValueError(f"unsupported symbol width {self.symbol_bits}")
        if not 1 <= self.k_out <= self.n_out:
            raise ValueError("need 1 <= k_out <= n_out")
        if self.n_out > (1 << self.symbol_bits) - 1:
            raise ValueError(
                f"n_out={self.n_out} exceeds field cap "
                f"{(1 << self.symbol_bits) - 1}"
            )

    @property
    def decoding_radius(self) -> int:
        return (self.n_out - self.k_out) // 2


class ReedSolomonCode:
    """Encoder/decoder for one OuterCodeSpec.

    Symbols are ints below 2^m; codewords are lists with the message in
    front.  Polynomial coefficient lists put the highest degree first.
    """

    def __init__(self, spec: OuterCodeSpec):
        self.spec = spec
        self.q = 1 << spec.symbol_bits
        self._build_tables(PRIMITIVE_POLY[spec.symbol_bits])
        nsym = spec.n_out - spec.k_out
        gen = [1]
        for j in range(nsym):
            gen = self._poly_mul(gen, [1, self._exp[j]])
        self._gen = gen

    def _build_tables(self, poly: int) -> None:
        order = self.q - 1
        exp = [0] * (2 * order)
        log = [0] * self.q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.q:
                x ^= poly
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log

    # -- field arithmetic (characteristic 2: add = subtract = xor) ---------

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def _div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % (self.q - 1)]

    def _inv(self, a: int) -> int:
        return self._exp[(self.q - 1) - self._log[a]]

    def _pow2(self, e: int) -> int:
        """Power of the generator element 2, any integer exponent."""
        return self._exp[e % (self.q - 1)]

    # -- polynomial helpers -------------------------------------------------

    def _poly_mul(self, p: list[int], r: list[int]) -> list[int]:
        out = [0] * (len(p) + len(r) - 1)
        for i, pc in enumerate(p):
            if pc == 0:
                continue
            for j, rc in enumerate(r):
                out[i + j] ^= self._mul(pc, rc)
        return out

    def _poly_scale(self, p: list[int], s: int) -> list[int]:
        return [self._mul(c, s) for c in p]

    def _poly_add(self, p: list[int], r: list[int]) -> list[int]:
        out = [0] * max(len(p), len(r))
        out[len(out) - len(p):] = p
        for i, rc in enumerate(r):
            out[len(out) - len(r) + i] ^= rc
        return out

    def _poly_eval(self, p: list[int], x: int) -> int:
        y = p[0]
        for c in p[1:]:
            y = self._mul(y, x) ^ c
        return y

    def _poly_divmod(self, dividend: list[int], divisor: list[int]):
        out = list(dividend)
        for i in range(len(dividend) - len(divisor) + 1):
            coef = out[i]
            if coef != 0:
                for j in range(1, len(divisor)):
                    if divisor[j] != 0:
                        out[i + j] ^= self._mul(divisor[j], coef)
        sep = len(out) - (len(divisor) - 1)
        return out[:sep], out[sep:]

    # -- encode -------------------------------------------------------------

    def encode(self, message) -> list[int]:
        """Systematic codeword: the k_out message symbols followed by
        n_out - k_out parity symbols (remainder of synthetic division)."""
        spec = self.spec
        msg = list(message)
        if len(msg) != spec.k_out:
            raise ValueError(f"expected {spec.k_out} symbols, got {len(msg)}")
        for s in msg:
            if not 0 <= s < self.q:
                raise ValueError(f"symbol {s} outside field of size {self.q}")
        nsym = spec.n_out - spec.k_out
        if nsym == 0:
            return msg
        rem = msg + [0] * nsym
        for i in range(len(msg)):
            coef = rem[i]
            if coef != 0:
                for j in range(1, len(self._gen)):
                    rem[i + j] ^= self._mul(self._gen[j], coef)
        return msg + rem[len(msg):]

    # -- decode -------------------------------------------------------------

    def _syndromes(self, received: list[int]) -> list[int]:
        nsym = self.spec.n_out - self.spec.k_out
        # Leading 0 shifts the syndrome polynomial by x, matching the
        # evaluator/Forney conventions below.
        return [0] + [self._poly_eval(received, self._exp[j]) for j in range(nsym)]

    def _berlekamp_massey(self, synd: list[int], nsym: int) -> list[int]:
        err_loc = [1]
        old_loc = [1]
        shift = len(synd) - nsym
        for i in range(nsym):
            pos = i + shift
            delta = synd[pos]
            for j in range(1, len(err_loc)):
                delta ^= self._mul(err_loc[-(j + 1)], synd[pos - j])
            old_loc.append(0)
            if delta != 0:
                if len(old_loc) > len(err_loc):
                    new_loc = self._poly_scale(old_loc, delta)
                    old_loc = self._poly_scale(err_loc, self._inv(delta))
                    err_loc = new_loc
                err_loc = self._poly_add(err_loc, self._poly_scale(old_loc, delta))
        while err_loc and err_loc[0] == 0:
            err_loc.pop(0)
        return err_loc

    def _find_errors(self, err_loc: list[int], n: int) -> list[int] | None:
        errs = len(err_loc) - 1
        positions = []
        for i in range(n):
            if self._poly_eval(err_loc, self._pow2(i)) == 0:
                positions.append(n - 1 - i)
        if len(positions) != errs:
            return None
        return positions

    def _correct(self, rec: list[int], synd: list[int],
                 positions: list[int]) -> list[int]:
        # Forney algorithm, fcr = 0.
        n = len(rec)
        coef_pos = [n - 1 - p for p in positions]
        loc = [1]
        for cp in coef_pos:
            loc = self._poly_mul(loc, self._poly_add([1], [self._pow2(cp), 0]))
        _, evaluator = self._poly_divmod(
            self._poly_mul(synd[::-1], loc), [1] + [0] * (len(loc))
        )
        X = [self._pow2(cp - (self.q - 1)) for cp in coef_pos]
        out = list(rec)
        for idx, Xi in enumerate(X):
            Xi_inv = self._inv(Xi)
            denom = 1
            for j, Xj in enumerate(X):
                if j != idx:
                    denom = self._mul(denom, 1 ^ self._mul(Xi_inv, Xj))
            y = self._mul(Xi, self._poly_eval(evaluator, Xi_inv))
            out[positions[idx]] ^= self._div(y, denom)
        return out

    def decode(self, received) -> list[int] | None:
        """Message symbols if at most decoding_radius symbol errors
        occurred; None when correction fails.  Beyond the radius the
        result may be None or a wrong codeword's message."""
        spec = self.spec
        rec = list(received)
        if len(rec) != spec.n_out:
            raise ValueError(f"expected {spec.n_out} symbols, got {len(rec)}")
        for s in rec:
            if not 0 <= s < self.q:
                raise ValueError(f"symbol {s} outside field of size {self.q}")
        nsym = spec.n_out - spec.k_out
        if nsym == 0:
            return rec
        synd = self._syndromes(rec)
        if max(synd) == 0:
            return rec[: spec.k_out]
        err_loc = self._berlekamp_massey(synd, nsym)
        errs = len(err_loc) - 1
        if errs > spec.decoding_radius:
            return None
        # The locator's roots live at inverse exponents; scan it reversed.
        positions = self._find_errors(err_loc[::-1], spec.n_out)
        if positions is None:
            return None
        try:
            corrected = self._correct(rec, synd, positions)
        except ZeroDivisionError:
            return None
        if max(self._syndromes(corrected)) != 0:
            return None
        return corrected[: spec.k_out]
