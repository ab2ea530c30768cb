"""Exact truncated Laurent q-series for the classical modular functions.

Coefficients are exact integers/rationals; every series records its
truncation order and arithmetic never reads past it.  j is built from
E4^3 / Delta with Delta as the 24th power of the pentagonal-number eta
product, which keeps everything integer-exact with no Fourier inversion.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .errors import InputError

Q = Fraction


class QExpansion:
    """Laurent series sum_{n=start}^{trunc-1} c_n q^n + O(q^trunc)."""

    __slots__ = ("start", "coeffs", "trunc")

    def __init__(self, start: int, coeffs: Sequence, trunc: int):
        coeffs = list(coeffs)
        if trunc - start != len(coeffs):
            raise InputError("coefficient count does not match the truncation window")
        # normalize leading zeros away (they carry no information)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            start += 1
        self.start = start
        self.coeffs = tuple(coeffs)
        self.trunc = trunc

    @classmethod
    def const(cls, c, trunc: int) -> "QExpansion":
        return cls(0, [c] + [0] * (trunc - 1), trunc) if trunc > 0 else cls(0, [], 0)

    def __getitem__(self, n: int):
        """Coefficient of q^n; raises past the truncation order."""
        if n >= self.trunc:
            raise InputError(f"coefficient q^{n} beyond truncation O(q^{self.trunc})")
        if n < self.start:
            return 0
        return self.coeffs[n - self.start]

    def known_range(self) -> range:
        return range(self.start, self.trunc)

    def __repr__(self) -> str:
        head = ", ".join(f"q^{n}: {self[n]}" for n in list(self.known_range())[:6])
        return f"QExpansion({head}, ... + O(q^{self.trunc}))"

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        window = range(min(self.start, other.start), min(self.trunc, other.trunc))
        return all(self[n] == other[n] for n in window)

    def __add__(self, other) -> "QExpansion":
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        start = min(self.start, other.start)
        return QExpansion(start, [self[n] + other[n] for n in range(start, trunc)], trunc)

    __radd__ = __add__

    def __neg__(self) -> "QExpansion":
        return QExpansion(self.start, [-c for c in self.coeffs], self.trunc)

    def __sub__(self, other) -> "QExpansion":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QExpansion":
        return self._coerce(other) - self

    def scale(self, c) -> "QExpansion":
        return QExpansion(self.start, [c * v for v in self.coeffs], self.trunc)

    def __mul__(self, other) -> "QExpansion":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QExpansion):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            # zero modulo the observable window
            trunc = min(self.start + other.trunc, other.start + self.trunc)
            return QExpansion(trunc, [], trunc)
        start = self.start + other.start
        trunc = min(self.start + other.trunc, other.start + self.trunc)
        out = [0] * (trunc - start)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            ia = self.start + i
            jmax = trunc - ia
            for j, b in enumerate(other.coeffs):
                if other.start + j >= jmax:
                    break
                if b:
                    out[ia + other.start + j - start] += a * b
        return QExpansion(start, out, trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QExpansion":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return QExpansion.const(1, self.trunc)
        result = self
        for bit in bin(n)[3:]:
            result = result * result
            if bit == "1":
                result = result * self
        return result

    def inverse(self) -> "QExpansion":
        """Series inverse; the lowest-order coefficient must be invertible."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of a zero series")
        lead = self.coeffs[0]
        n_terms = self.trunc - self.start
        inv0 = Q(1, 1) / lead
        out = [inv0] + [Q(0)] * (n_terms - 1)
        for n in range(1, n_terms):
            acc = Q(0)
            for k in range(1, n + 1):
                if k < len(self.coeffs) and self.coeffs[k]:
                    acc += self.coeffs[k] * out[n - k]
            out[n] = -inv0 * acc
        out = [v if v.denominator != 1 else int(v) for v in out]
        return QExpansion(-self.start, out, -self.start + n_terms)

    def __truediv__(self, other) -> "QExpansion":
        if isinstance(other, (int, Fraction)):
            return self.scale(Q(1, 1) / other)
        return self * other.inverse()

    def derivative_q(self) -> "QExpansion":
        """The operator q d/dq: termwise n * c_n."""
        return QExpansion(self.start, [n * self[n] for n in self.known_range()], self.trunc)


# ---------------------------------------------------------------------------
# classical series
# ---------------------------------------------------------------------------


def sigma_table(k: int, upto: int) -> list[int]:
    """sigma_k(n) for 0 <= n <= upto (index 0 unused)."""
    out = [0] * (upto + 1)
    for d in range(1, upto + 1):
        dk = d**k
        for m in range(d, upto + 1, d):
            out[m] += dk
    return out


def eisenstein_qexp(weight: int, order: int) -> QExpansion:
    """E2, E4 or E6 with exact integer coefficients up to O(q^order)."""
    if order < 1:
        raise InputError("order must be >= 1")
    params = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}
    if weight not in params:
        raise InputError("only E2, E4, E6 are provided")
    c, k = params[weight]
    sig = sigma_table(k, order - 1)
    coeffs = [1] + [c * sig[n] for n in range(1, order)]
    return QExpansion(0, coeffs, order)


def eta_product_qexp(order: int) -> QExpansion:
    """prod_{n>=1} (1 - q^n) via the pentagonal number theorem (sparse, +-1)."""
    coeffs = [0] * order
    coeffs[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= order and g2 >= order:
            break
        s = 1 if k % 2 == 0 else -1
        if g1 < order:
            coeffs[g1] += s
        if g2 < order:
            coeffs[g2] += s
        k += 1
    return QExpansion(0, coeffs, order)


def delta_qexp(order: int) -> QExpansion:
    """Delta = q * prod (1-q^n)^24, exact integers up to O(q^order)."""
    if order < 2:
        raise InputError("order must be >= 2 for Delta")
    p = eta_product_qexp(order - 1)
    p24 = p**24
    coeffs = [0] + [p24[n] for n in range(order - 1)]
    return QExpansion(0, coeffs, order)


def j_qexp(order: int) -> QExpansion:
    """j = E4^3 / Delta = q^-1 + 744 + 196884 q + ...; exact integers.

    The window covers exponents -1 .. order-1.
    """
    if order < 1:
        raise InputError("order must be >= 1")
    n_terms = order + 1
    e4 = eisenstein_qexp(4, n_terms + 1)
    delta = delta_qexp(n_terms + 2)
    j = (e4**3) * delta.inverse()
    coeffs = [j[n] for n in range(-1, order)]
    coeffs = [int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in coeffs]
    return QExpansion(-1, coeffs, order)


def j_derivative_series(order: int, k: int) -> QExpansion:
    """(q d/dq)^k applied to j, exact, window -1 .. order-1."""
    s = j_qexp(order)
    for _ in range(k):
        s = s.derivative_q()
    return s
