"""Rigorous enclosures of exp, cos, sin and pi over rational intervals.

Every bound is proved by Taylor partial sums with explicit Lagrange remainder
terms evaluated in exact interval arithmetic; floats only ever suggest an
integer reduction count, never enter a bound.  These feed q = exp(2*pi*i*tau),
the Khovanskii verifier, and the numeric exponential-tower samples.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor

from .boxes import Box, Interval
from .errors import InputError

Q = Fraction

_PI_CACHE: dict[int, Interval] = {}


def _atan_inv(m: int, prec: int) -> Interval:
    """Enclosure of arctan(1/m) by the alternating Taylor series."""
    target = Q(1, 1 << (prec + 8))
    s = Q(0)
    k = 0
    sign = 1
    while True:
        term = Q(1, (2 * k + 1) * m ** (2 * k + 1))
        if term <= target:
            # partial sum brackets the limit within the first omitted term
            lo, hi = (s - term, s) if sign < 0 else (s, s + term)
            return Interval(lo, hi).outward(prec + 8)
        s += sign * term
        sign = -sign
        k += 1


def pi_interval(prec: int) -> Interval:
    """pi = 16*atan(1/5) - 4*atan(1/239) (Machin)."""
    cached = _PI_CACHE.get(prec)
    if cached is None:
        cached = (16 * _atan_inv(5, prec + 8) - 4 * _atan_inv(239, prec + 8)).outward(prec)
        _PI_CACHE[prec] = cached
    return cached


def _exp_reduced(t: Interval, prec: int) -> Interval:
    """exp on an interval with |t| <= 1/2, Taylor plus remainder."""
    wp = prec + 16
    mag = t.mag()
    s = Interval.point(1)
    term = Interval.point(1)
    term_mag = Q(1)
    k = 0
    target = Q(1, 1 << wp)
    while term_mag > target:
        k += 1
        term = (term * t * Q(1, k)).outward(wp)
        s = (s + term).outward(wp)
        term_mag = term_mag * mag / k
    # remaining tail: sum_{j>k} |t|^j/j! <= 2 * |t|^(k+1)/(k+1)!  for |t| <= 1/2
    tail = 2 * term_mag * mag / (k + 1)
    return s.inflate(tail).outward(wp)


def exp_point(x: Fraction, prec: int) -> Interval:
    """Certified enclosure of exp(x) for rational x."""
    x = Q(x)
    halvings = 0
    ax = abs(x)
    while ax > Q(1, 2):
        ax /= 2
        halvings += 1
    wp = prec + 2 * halvings + 16
    t = Interval.point(x / (1 << halvings)).outward(wp)
    e = _exp_reduced(t, wp)
    for _ in range(halvings):
        e = e.sq().outward(wp)
    return e.outward(prec)


def exp_interval(x: Interval, prec: int) -> Interval:
    """exp over an interval, by monotonicity."""
    lo = exp_point(x.lo, prec)
    hi = exp_point(x.hi, prec)
    return Interval(lo.lo, hi.hi)


def _sincos_reduced(r: Interval, prec: int, want_sin: bool) -> Interval:
    """sin or cos on an interval with |r| bounded by ~4, via midpoint Taylor.

    |f(x) - f(m)| <= |x - m| since |f'| <= 1, so the half-width transfers
    directly; the Lagrange remainder |m|^(n+1)/(n+1)! covers truncation.
    """
    wp = prec + 16
    m = r.mid
    half = r.width / 2
    target = Q(1, 1 << wp)
    acc = Interval.point(0)
    mm = Interval.point(m).outward(wp)
    m2 = mm.sq().outward(wp)
    term = mm if want_sin else Interval.point(1)
    k = 1 if want_sin else 0
    mag_m = abs(m)
    term_mag = mag_m if want_sin else Q(1)
    sign = 1
    while True:
        acc = (acc + sign * term).outward(wp)
        # Lagrange remainder after including degree-k term
        rem = term_mag * mag_m / (k + 1)
        if rem <= target and k > 4:
            break
        term = (term * m2 * Q(1, (k + 1) * (k + 2))).outward(wp)
        term_mag = term_mag * mag_m * mag_m / ((k + 1) * (k + 2))
        k += 2
        sign = -sign
    out = acc.inflate(term_mag * mag_m / (k + 1)).inflate(half)
    return out.intersect(Interval(-1, 1)).outward(prec)


def _reduce_angle(x: Interval, prec: int) -> Interval:
    """Translate by an integer multiple of 2*pi into |r| <= ~pi + width."""
    two_pi = pi_interval(prec + 16) * 2
    k = floor(float(x.mid) / float(two_pi.mid) + 0.5)
    return (x - two_pi * k).outward(prec + 16)


def cos_interval(x: Interval, prec: int) -> Interval:
    if x.width > 6:
        return Interval(-1, 1)
    r = _reduce_angle(x, prec)
    if r.mag() > 4:  # float reduction estimate was off; one more pass
        r = _reduce_angle(r, prec)
    return _sincos_reduced(r, prec, want_sin=False)


def sin_interval(x: Interval, prec: int) -> Interval:
    if x.width > 6:
        return Interval(-1, 1)
    r = _reduce_angle(x, prec)
    if r.mag() > 4:
        r = _reduce_angle(r, prec)
    return _sincos_reduced(r, prec, want_sin=True)


def exp_box(z: Box, prec: int) -> Box:
    """exp on a complex box: exp(re) * (cos(im) + i sin(im))."""
    r = exp_interval(z.re, prec + 8)
    c = cos_interval(z.im, prec + 8)
    s = sin_interval(z.im, prec + 8)
    return Box((r * c).outward(prec), (r * s).outward(prec))


# ---------------------------------------------------------------------------
# refinable enclosure expressions
# ---------------------------------------------------------------------------


class Enclosure:
    """A complex value given by a replayable expression tree.

    Leaves are exact rational complex constants, pi, or any object exposing
    ``box_at(prec) -> Box`` (algebraic numbers in particular); interior nodes
    are +, -, *, /, exp.  ``box(prec)`` returns a certified enclosure that
    shrinks as prec grows.
    """

    __slots__ = ("op", "args", "text")

    def __init__(self, op: str, args: tuple, text: str):
        self.op = op
        self.args = args
        self.text = text

    # constructors

    @classmethod
    def rational(cls, re, im=0) -> "Enclosure":
        re, im = Q(re), Q(im)
        text = f"{re}" if im == 0 else f"({re}+{im}i)"
        return cls("const", (re, im), text)

    @classmethod
    def pi(cls) -> "Enclosure":
        return cls("pi", (), "pi")

    @classmethod
    def wrap(cls, value, text: str) -> "Enclosure":
        """Wrap any refinable value with a box_at(prec) method."""
        return cls("leaf", (value,), text)

    def exp(self) -> "Enclosure":
        return Enclosure("exp", (self,), f"exp({self.text})")

    def __add__(self, other) -> "Enclosure":
        other = _as_enclosure(other)
        return Enclosure("add", (self, other), f"({self.text}+{other.text})")

    def __sub__(self, other) -> "Enclosure":
        other = _as_enclosure(other)
        return Enclosure("sub", (self, other), f"({self.text}-{other.text})")

    def __mul__(self, other) -> "Enclosure":
        other = _as_enclosure(other)
        return Enclosure("mul", (self, other), f"({self.text}*{other.text})")

    def __truediv__(self, other) -> "Enclosure":
        other = _as_enclosure(other)
        return Enclosure("div", (self, other), f"({self.text}/{other.text})")

    def __neg__(self) -> "Enclosure":
        return Enclosure("sub", (Enclosure.rational(0), self), f"(-{self.text})")

    # evaluation

    def box(self, prec: int) -> Box:
        op = self.op
        if op == "const":
            re, im = self.args
            return Box.point(re, im)
        if op == "pi":
            return Box(pi_interval(prec), Interval.point(0))
        if op == "leaf":
            return self.args[0].box_at(prec)
        if op == "exp":
            return exp_box(self.args[0].box(prec + 8), prec)
        a = self.args[0].box(prec + 8)
        b = self.args[1].box(prec + 8)
        if op == "add":
            return (a + b).outward(prec)
        if op == "sub":
            return (a - b).outward(prec)
        if op == "mul":
            return (a * b).outward(prec)
        if op == "div":
            if b.contains_zero():
                raise InputError(f"enclosure divide by possible zero: {self.text}")
            return (a / b).outward(prec)
        raise InputError(f"unknown enclosure op {op!r}")

    def exact_rational(self) -> tuple[Fraction, Fraction] | None:
        """(re, im) when the tree is a pure rational constant, else None."""
        if self.op == "const":
            return self.args
        if self.op in ("add", "sub", "mul", "div"):
            a = self.args[0].exact_rational()
            b = self.args[1].exact_rational()
            if a is None or b is None:
                return None
            ar, ai = a
            br, bi = b
            if self.op == "add":
                return ar + br, ai + bi
            if self.op == "sub":
                return ar - br, ai - bi
            if self.op == "mul":
                return ar * br - ai * bi, ar * bi + ai * br
            d = br * br + bi * bi
            if d == 0:
                raise ZeroDivisionError(self.text)
            return (ar * br + ai * bi) / d, (ai * br - ar * bi) / d
        return None

    def __repr__(self) -> str:
        return f"Enclosure({self.text})"


def _as_enclosure(v) -> Enclosure:
    if isinstance(v, Enclosure):
        return v
    return Enclosure.rational(v)
