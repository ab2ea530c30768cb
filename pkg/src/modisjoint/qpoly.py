"""Dense univariate polynomial arithmetic over the rationals.

Coefficients are `fractions.Fraction` values in ascending degree order; the
zero polynomial is the empty coefficient tuple.  Everything here is exact and
deterministic, and every value is immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Sequence

from .errors import InputError

Q = Fraction


def _strip(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class UniPoly:
    """Polynomial in Q[X], dense ascending coefficients, leading coeff nonzero."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int | str] = ()):
        self.coeffs: tuple[Fraction, ...] = _strip([Q(c) for c in coeffs])

    # -- constructors -------------------------------------------------------

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls((Q(c),))

    @classmethod
    def from_roots(cls, roots: Sequence[Fraction | int]) -> "UniPoly":
        p = cls.const(1)
        for r in roots:
            p = p * cls((-Q(r), 1))
        return p

    # -- basic queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            return Q(0)
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*X" if c != 1 else "X")
            else:
                terms.append(f"{c}*X^{i}" if c != 1 else f"X^{i}")
        return "UniPoly(" + " + ".join(terms) + ")"

    # -- ring operations -----------------------------------------------------

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __add__(self, other) -> "UniPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    def __sub__(self, other) -> "UniPoly":
        return self + (-_coerce(other))

    def __mul__(self, other) -> "UniPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Q(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return UniPoly(out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other) -> "UniPoly":
        return _coerce(other) - self

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise InputError("negative polynomial power")
        out, base = UniPoly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c) -> "UniPoly":
        c = Q(c)
        return UniPoly(c * a for a in self.coeffs)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        inv_lc = 1 / other.lc
        quo = [Q(0)] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] * inv_lc
            if c == 0:
                continue
            quo[i - d] = c
            for j, oc in enumerate(other.coeffs):
                rem[i - d + j] -= c * oc
        return UniPoly(quo), UniPoly(rem)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise InputError("division was not exact")
        return q

    # -- calculus / structure --------------------------------------------------

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        if self.is_zero() or self.lc == 1:
            return self
        return self.scale(1 / self.lc)

    def __call__(self, x):
        """Horner evaluation; works for any value with +, * against Fraction."""
        if not self.coeffs:
            return Q(0) if isinstance(x, (int, Fraction)) else x * 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """Substitute a polynomial for X."""
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly.const(c)
        return acc

    def shift(self, a) -> "UniPoly":
        """p(X + a)."""
        return self.compose(UniPoly((Q(a), 1)))

    def reverse(self) -> "UniPoly":
        """X^deg * p(1/X)."""
        return UniPoly(tuple(reversed(self.coeffs)))

    def scale_arg(self, c) -> "UniPoly":
        """p(c*X)."""
        c = Q(c)
        return UniPoly(a * c**i for i, a in enumerate(self.coeffs))

    def neg_arg(self) -> "UniPoly":
        """p(-X)."""
        return UniPoly(a if i % 2 == 0 else -a for i, a in enumerate(self.coeffs))

    # -- integer normal form ---------------------------------------------------

    def primitive_integer(self) -> tuple[int, ...]:
        """Integer coefficients with content 1 and positive leading coefficient."""
        if self.is_zero():
            return ()
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // int_gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = int_gcd(g, abs(v))
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return tuple(ints)


def _coerce(v) -> UniPoly:
    if isinstance(v, UniPoly):
        return v
    return UniPoly.const(v)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd in Q[X]; poly_gcd(a, 0) is monic(a)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return UniPoly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def poly_gcdex(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """(g, s, t) with g = gcd monic and s*a + t*b = g."""
    r0, r1 = a, b
    s0, s1 = UniPoly.const(1), UniPoly()
    t0, t1 = UniPoly(), UniPoly.const(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return UniPoly(), s0, t0
    lc = r0.lc
    return r0.monic(), s0.scale(1 / lc), t0.scale(1 / lc)


def resultant(a: UniPoly, b: UniPoly) -> Fraction:
    """Sylvester-matrix resultant via the Euclidean remainder sequence."""
    if a.is_zero() or b.is_zero():
        raise InputError("resultant requires nonzero polynomials")
    res = Q(1)
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return res * b.lc**m
        r = a % b
        if r.is_zero():
            return Q(0)
        res *= Q(-1) ** (m * n) * b.lc ** (m - r.degree)
        a, b = b, r


def discriminant(a: UniPoly) -> Fraction:
    """disc(a) = (-1)^(d(d-1)/2) res(a, a') / lc(a)."""
    d = a.degree
    if d < 1:
        raise InputError("discriminant needs degree >= 1")
    da = a.derivative()
    if da.is_zero():
        return Q(0)
    r = resultant(a, da)
    return Q(-1) ** (d * (d - 1) // 2) * r / a.lc


def squarefree_part(a: UniPoly) -> UniPoly:
    """Monic product of the distinct irreducible factors of a."""
    if a.is_zero():
        raise InputError("squarefree part of zero")
    if a.degree == 0:
        return UniPoly.const(1)
    g = poly_gcd(a, a.derivative())
    return a.exact_div(g).monic()


def squarefree_decomposition(a: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: a = lc * prod p_i^i with p_i monic squarefree coprime."""
    if a.is_zero():
        raise InputError("squarefree decomposition of zero")
    a = a.monic()
    out: list[tuple[UniPoly, int]] = []
    if a.degree == 0:
        return out
    d = a.derivative()
    g = poly_gcd(a, d)
    c = a.exact_div(g)
    w = d.exact_div(g) - c.derivative()
    i = 1
    while not (c.degree == 0):
        p = poly_gcd(c, w)
        if p.degree > 0:
            out.append((p.monic(), i))
        c = c.exact_div(p)
        w = w.exact_div(p) - c.derivative()
        i += 1
    return out


def lagrange_interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> UniPoly:
    """Unique polynomial of degree < len(points) through the given points."""
    n = len(points)
    xs = [Q(x) for x, _ in points]
    # Newton divided differences, then expand.
    table = [Q(y) for _, y in points]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly.const(table[-1])
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly((-xs[i], 1)) + UniPoly.const(table[i])
    return poly


def resultant_in_x(a: UniPoly, b_at, degree_bound: int) -> UniPoly:
    """res_Y(a(Y), B(x, Y)) as a polynomial in x, by evaluation/interpolation.

    ``b_at(x0)`` must return B(x0, Y) as a UniPoly in Y for a Fraction x0.
    The caller guarantees deg_Y B(x0, Y) is constant in x0 (so the specialized
    resultant agrees with the generic one at every sample point).
    """
    pts: list[tuple[Fraction, Fraction]] = []
    x0 = 0
    while len(pts) < degree_bound + 1:
        bx = b_at(Q(x0))
        pts.append((Q(x0), resultant(a, bx)))
        x0 = -x0 if x0 > 0 else -x0 + 1
    return lagrange_interpolate(pts)


# -- serialization ------------------------------------------------------------


def rational_to_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def rational_from_str(s: str) -> Fraction:
    try:
        return Q(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational literal {s!r}") from exc


def poly_to_json(p: UniPoly) -> list[str]:
    return [rational_to_str(c) for c in p.coeffs]


def poly_from_json(data) -> UniPoly:
    if not isinstance(data, list):
        raise InputError("polynomial JSON must be a list of coefficient strings")
    return UniPoly(rational_from_str(str(c)) for c in data)
