"""Certified interval arithmetic with exact rational endpoints.

`Interval` is a closed real interval, `Box` a rectangle in C.  All endpoints
are Fractions, so containment claims are exact; `outward(prec)` rounds the
endpoints outward onto the dyadic grid of step 2^-prec to keep denominators
from compounding along long computations.  No floating point anywhere on
these paths.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import InputError
from .qpoly import rational_from_str, rational_to_str

Q = Fraction


def _floor_to_grid(x: Fraction, prec: int) -> Fraction:
    scale = 1 << prec
    return Q(x.numerator * scale // x.denominator, scale)


def _ceil_to_grid(x: Fraction, prec: int) -> Fraction:
    scale = 1 << prec
    return Q(-((-x.numerator * scale) // x.denominator), scale)


def sqrt_lower(x: Fraction, prec: int) -> Fraction:
    """Largest dyadic with denominator 2^prec whose square is <= x (x >= 0)."""
    if x < 0:
        raise InputError("sqrt of negative rational")
    scale = 1 << prec
    n = x.numerator * scale * scale
    return Q(isqrt(n // x.denominator), scale)


def sqrt_upper(x: Fraction, prec: int) -> Fraction:
    if x < 0:
        raise InputError("sqrt of negative rational")
    scale = 1 << prec
    num = x.numerator * scale * scale
    r = isqrt(-(-num // x.denominator))
    while Q(r, scale) ** 2 < x:
        r += 1
    return Q(r, scale)


class Interval:
    """Closed interval [lo, hi] with rational endpoints, lo <= hi."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo, hi = Q(lo), Q(hi)
        if lo > hi:
            raise InputError(f"inverted interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x) -> "Interval":
        x = Q(x)
        return cls(x, x)

    def __repr__(self) -> str:
        return f"Interval({float(self.lo):.6g}, {float(self.hi):.6g})"

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Q(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        return self + (-_as_interval(other))

    def __rsub__(self, other) -> "Interval":
        return _as_interval(other) - self

    def __mul__(self, other) -> "Interval":
        other = _as_interval(other)
        cands = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _as_interval(other)
        if other.contains(0):
            raise ZeroDivisionError("interval division by an interval containing 0")
        cands = (self.lo / other.lo, self.lo / other.hi, self.hi / other.lo, self.hi / other.hi)
        return Interval(min(cands), max(cands))

    def __rtruediv__(self, other) -> "Interval":
        return _as_interval(other) / self

    def sq(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(0, max(self.lo * self.lo, self.hi * self.hi))

    def sqrt(self, prec: int) -> "Interval":
        return Interval(sqrt_lower(self.lo, prec), sqrt_upper(self.hi, prec))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def mag(self) -> Fraction:
        """sup |x| over the interval."""
        return max(-self.lo, self.hi) if self.lo < 0 else self.hi

    def mig(self) -> Fraction:
        """inf |x| over the interval."""
        if self.contains(0):
            return Q(0)
        return self.lo if self.lo > 0 else -self.hi

    def sign(self) -> int:
        """1 / -1 when the interval certifies a sign, 0 when undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise InputError("empty interval intersection")
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def outward(self, prec: int) -> "Interval":
        return Interval(_floor_to_grid(self.lo, prec), _ceil_to_grid(self.hi, prec))

    def inflate(self, eps) -> "Interval":
        eps = Q(eps)
        return Interval(self.lo - eps, self.hi + eps)


def _as_interval(v) -> Interval:
    if isinstance(v, Interval):
        return v
    return Interval.point(v)


class Box:
    """Axis-aligned rectangle re + i*im in the complex plane."""

    __slots__ = ("re", "im")

    def __init__(self, re: Interval, im: Interval | None = None):
        self.re = re if isinstance(re, Interval) else Interval.point(re)
        self.im = im if isinstance(im, Interval) else Interval.point(im if im is not None else 0)

    @classmethod
    def point(cls, re, im=0) -> "Box":
        return cls(Interval.point(re), Interval.point(im))

    def __repr__(self) -> str:
        return f"Box(re={self.re!r}, im={self.im!r})"

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def mid(self) -> tuple[Fraction, Fraction]:
        return self.re.mid, self.im.mid

    def __add__(self, other) -> "Box":
        other = _as_box(other)
        return Box(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "Box":
        return Box(-self.re, -self.im)

    def __sub__(self, other) -> "Box":
        return self + (-_as_box(other))

    def __rsub__(self, other) -> "Box":
        return _as_box(other) - self

    def __mul__(self, other) -> "Box":
        other = _as_box(other)
        return Box(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self) -> "Box":
        return Box(self.re, -self.im)

    def norm_sq(self) -> Interval:
        return self.re.sq() + self.im.sq()

    def __truediv__(self, other) -> "Box":
        other = _as_box(other)
        d = other.norm_sq()
        if d.contains(0):
            raise ZeroDivisionError("box division by a box containing 0")
        num = self * other.conj()
        return Box(num.re / d, num.im / d)

    def __rtruediv__(self, other) -> "Box":
        return _as_box(other) / self

    def __pow__(self, n: int) -> "Box":
        if n < 0:
            return 1 / (self ** (-n))
        out, base = Box.point(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def contains_zero(self) -> bool:
        return self.re.contains(0) and self.im.contains(0)

    def contains_point(self, re, im=0) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def contains_box(self, other: "Box") -> bool:
        return self.re.contains_interval(other.re) and self.im.contains_interval(other.im)

    def strictly_contains(self, other: "Box") -> bool:
        return self.re.strictly_contains(other.re) and self.im.strictly_contains(other.im)

    def overlaps(self, other: "Box") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def intersect(self, other: "Box") -> "Box":
        return Box(self.re.intersect(other.re), self.im.intersect(other.im))

    def mag_upper(self, prec: int = 64) -> Fraction:
        """Rational upper bound on sup |z| over the box."""
        m = self.re.mag() ** 2 + self.im.mag() ** 2
        return sqrt_upper(m, prec)

    def mig_lower(self, prec: int = 64) -> Fraction:
        """Rational lower bound on inf |z| over the box (0 if it contains 0)."""
        m = self.re.mig() ** 2 + self.im.mig() ** 2
        return sqrt_lower(m, prec)

    def outward(self, prec: int) -> "Box":
        return Box(self.re.outward(prec), self.im.outward(prec))

    def inflate(self, eps) -> "Box":
        return Box(self.re.inflate(eps), self.im.inflate(eps))

    def is_real_line_free(self) -> bool:
        return not self.im.contains(0)


def _as_box(v) -> Box:
    if isinstance(v, Box):
        return v
    if isinstance(v, Interval):
        return Box(v, Interval.point(0))
    return Box.point(v)


def box_polyval(coeffs, z: Box, prec: int) -> Box:
    """Horner evaluation of a rational-coefficient polynomial on a box.

    coeffs ascending; quantizes outward at each step so endpoint denominators
    stay bounded by 2^prec.
    """
    if not coeffs:
        return Box.point(0)
    acc = Box.point(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = (acc * z + Box.point(c)).outward(prec)
    return acc


def interval_polyval(coeffs, x: Interval, prec: int) -> Interval:
    if not coeffs:
        return Interval.point(0)
    acc = Interval.point(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = (acc * x + Interval.point(c)).outward(prec)
    return acc


# -- serialization ------------------------------------------------------------


def interval_to_json(iv: Interval) -> list[str]:
    return [rational_to_str(iv.lo), rational_to_str(iv.hi)]


def interval_from_json(data) -> Interval:
    if not isinstance(data, list) or len(data) != 2:
        raise InputError("interval JSON must be a [lo, hi] pair")
    return Interval(rational_from_str(str(data[0])), rational_from_str(str(data[1])))


def box_to_json(b: Box) -> dict:
    return {"re": interval_to_json(b.re), "im": interval_to_json(b.im)}


def box_from_json(data) -> Box:
    if not isinstance(data, dict) or "re" not in data or "im" not in data:
        raise InputError("box JSON must have 're' and 'im' fields")
    return Box(interval_from_json(data["re"]), interval_from_json(data["im"]))
