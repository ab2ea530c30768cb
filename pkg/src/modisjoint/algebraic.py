"""Certified arithmetic in the field of algebraic numbers.

An AlgebraicNumber is a primitive squarefree integer polynomial together with
a complex box certified (by an interval-Newton contraction) to isolate exactly
one of its roots.  Root approximations come from mpmath and are never trusted:
every box is re-proved with exact rational interval arithmetic before use, and
refinement only ever shrinks a certified box.

Equality, minimal polynomials and zero tests reduce to exact factorization
plus certified root matching, so every answer here is a theorem about the
inputs, not a numerical judgement.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Literal

import mpmath

from .boxes import Box, Interval, box_polyval, box_from_json, box_to_json
from .errors import InputError, PreconditionError, Undecided
from .factorize import factor_rational_poly
from .qpoly import (
    UniPoly,
    rational_from_str,
    rational_to_str,
    resultant_in_x,
    squarefree_part,
)

Q = Fraction


def _bits_for(x: Fraction) -> int:
    """Smallest b with 2^-b <= x, clamped below by 0."""
    if x <= 0:
        return 1 << 16
    if x >= 1:
        return 0
    return (x.denominator // x.numerator).bit_length()


# ---------------------------------------------------------------------------
# Sturm sequences: exact real-root counting and isolation
# ---------------------------------------------------------------------------


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return [s for s in seq if not s.is_zero()]


def _sign_changes(values: list[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: UniPoly, a: Fraction, b: Fraction, seq: list[UniPoly] | None = None) -> int:
    """Number of distinct real roots in (a, b] for squarefree p."""
    if seq is None:
        seq = sturm_sequence(p)
    return _sign_changes([s(a) for s in seq]) - _sign_changes([s(b) for s in seq])


def root_magnitude_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: every complex root has |z| <= 1 + max |c_i / lc|."""
    if p.degree < 1:
        raise InputError("root bound needs degree >= 1")
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Q(0))


def isolate_real_roots(p: UniPoly) -> list[Interval]:
    """Disjoint rational intervals, one per distinct real root of squarefree p."""
    if p.is_zero():
        raise InputError("cannot isolate roots of zero")
    if p.degree == 0:
        return []
    seq = sturm_sequence(p)
    bound = root_magnitude_bound(p) + 1

    def off_root(x: Fraction, step: Fraction) -> Fraction:
        while p(x) == 0:
            x += step
        return x

    lo = off_root(-bound, -Q(1, 1 << 20))
    hi = off_root(bound, Q(1, 1 << 20))
    out: list[Interval] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = sturm_count(p, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(Interval(a, b))
            continue
        mid = (a + b) / 2
        if p(mid) == 0:
            # nudge the cut off the root, keeping it inside (a, b)
            mid = off_root(mid, (b - a) / (1 << 20))
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine_real_root(p: UniPoly, iv: Interval, target: Fraction) -> Interval:
    """Bisection refinement of a real isolating interval of squarefree p."""
    a, b = iv.lo, iv.hi
    if a == b:
        return iv
    fa = p(a)
    while b - a > target:
        m = (a + b) / 2
        fm = p(m)
        if fm == 0:
            return Interval(m, m)
        if (fa > 0) != (fm > 0):
            b = m
        else:
            a, fa = m, fm
    return Interval(a, b)


# ---------------------------------------------------------------------------
# interval-Newton certification
# ---------------------------------------------------------------------------


def _newton_image(p: UniPoly, dp: UniPoly, box: Box, prec: int) -> Box | None:
    """m - p(m)/p'(box); None when p'(box) cannot exclude zero."""
    mre, mim = box.mid()
    m = Box.point(mre, mim)
    pm = box_polyval(p.coeffs, m, prec)
    dpb = box_polyval(dp.coeffs, box, prec)
    if dpb.contains_zero():
        return None
    return (m - pm / dpb).outward(prec)


def certify_box(p: UniPoly, box: Box, prec: int) -> Box | None:
    """Certified isolating sub-box when interval Newton contracts, else None."""
    img = _newton_image(p, p.derivative(), box, prec)
    if img is not None and box.strictly_contains(img):
        return img.intersect(box)
    return None


def _exact_complex_eval(p: UniPoly, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    ar, ai = Q(0), Q(0)
    for c in reversed(p.coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _refine_certified(p: UniPoly, dp: UniPoly, box: Box, target: Fraction) -> Box:
    """Shrink a certified isolating box below the target width."""
    if box.width <= target:
        return box
    prec = max(64, _bits_for(target) + 32)
    while box.width > target:
        img = _newton_image(p, dp, box, prec)
        if img is None:
            prec += 64
            continue
        new = img.intersect(box)
        if new.width > box.width * Q(7, 8):
            prec += 64
        box = new
    return box


# ---------------------------------------------------------------------------
# root isolation
# ---------------------------------------------------------------------------

_ROOTS_CACHE: dict[tuple[int, ...], list["AlgebraicNumber"]] = {}


def _mpmath_roots(coeffs: list[int], dps: int):
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(
            [mpmath.mpf(c) for c in reversed(coeffs)], maxsteps=300, extraprec=200
        )
        return [(Q(mpmath.nstr(mpmath.mpc(r).real, dps)), Q(mpmath.nstr(mpmath.mpc(r).imag, dps))) for r in roots]


def isolate_roots(p: UniPoly, target_width: Fraction = Q(1, 1 << 32)) -> list["AlgebraicNumber"]:
    """One certified AlgebraicNumber per distinct complex root of p.

    Boxes are pairwise disjoint with width at most target_width; the list is
    ordered by (re, im) box corners so runs are reproducible.  Results are
    cached per squarefree primitive polynomial and refine in place.
    """
    if p.is_zero():
        raise InputError("cannot isolate roots of the zero polynomial")
    sqf = squarefree_part(p)
    ints = sqf.primitive_integer()
    cached = _ROOTS_CACHE.get(ints)
    if cached is None:
        cached = _isolate_squarefree(UniPoly(Q(c) for c in ints))
        _ROOTS_CACHE[ints] = cached
    for r in cached:
        r.refine(target_width)
    return list(cached)


def _isolate_squarefree(p: UniPoly) -> list["AlgebraicNumber"]:
    n = p.degree
    if n == 0:
        return []
    if n == 1:
        val = -p.coeffs[0] / p.coeffs[1]
        return [AlgebraicNumber._make(p, Box.point(val), sep=Q(1))]
    dps = 40
    while dps <= 20000:
        try:
            pairs = sorted(_mpmath_roots([int(c) for c in p.primitive_integer()], dps))
        except (mpmath.libmp.NoConvergence, ZeroDivisionError):
            dps *= 2
            continue
        sep_est = min(
            (
                max(abs(a[0] - b[0]), abs(a[1] - b[1]))
                for i, a in enumerate(pairs)
                for b in pairs[i + 1 :]
            ),
            default=Q(1),
        )
        if sep_est == 0:
            dps *= 2
            continue
        h = sep_est / 8
        prec = max(64, _bits_for(h) + 48)
        boxes: list[Box] = []
        ok = True
        for re, im in pairs:
            box = None
            hh = h
            for _ in range(6):
                cand = Box(Interval(re - hh, re + hh), Interval(im - hh, im + hh))
                img = certify_box(p, cand, prec)
                if img is not None:
                    box = img
                    break
                hh /= 4
                prec += 32
            if box is None:
                ok = False
                break
            boxes.append(box)
        if ok and len(boxes) == n and _pairwise_disjoint(boxes):
            roots = [AlgebraicNumber._make(p, b, sep=None) for b in boxes]
            _separate(roots)
            roots.sort(key=lambda r: (r.box.re.lo, r.box.im.lo))
            return roots
        dps *= 2
    raise Undecided(f"root isolation failed for degree {p.degree}")


def _pairwise_disjoint(boxes: list[Box]) -> bool:
    return all(not a.overlaps(b) for i, a in enumerate(boxes) for b in boxes[i + 1 :])


def _separate(roots: list["AlgebraicNumber"]) -> None:
    """Refine so pairwise center gaps dominate widths; record separation bounds.

    Afterwards each root's true distance to any sibling is at least 3/4 of the
    minimal center gap, and sep = gap/2 is a safe isolation margin: inflating a
    box by sep/4 still excludes every sibling root.
    """
    if len(roots) < 2:
        for r in roots:
            r.sep = Q(1)
        return
    while True:
        centers = [r.box.mid() for r in roots]
        gap = min(
            max(abs(a[0] - b[0]), abs(a[1] - b[1]))
            for i, a in enumerate(centers)
            for b in centers[i + 1 :]
        )
        if gap > 0 and all(r.box.width <= gap / 8 for r in roots):
            for r in roots:
                r.sep = gap / 2
            return
        target = gap / 16 if gap > 0 else min(r.box.width for r in roots) / 16
        for r in roots:
            r.refine(target)


# ---------------------------------------------------------------------------
# AlgebraicNumber
# ---------------------------------------------------------------------------


class AlgebraicNumber:
    """A certified element of the algebraic closure of Q inside C."""

    __slots__ = ("poly", "box", "sep", "_minpoly")

    def __init__(self, poly: UniPoly, box: Box):
        """Certify that box isolates exactly one root of poly, then wrap it."""
        if poly.is_zero() or poly.degree < 1:
            raise InputError("defining polynomial must have degree >= 1")
        sqf = UniPoly(Q(c) for c in squarefree_part(poly).primitive_integer())
        if box.width == 0:
            re, im = box.mid()
            vr, vi = _exact_complex_eval(sqf, re, im)
            if vr != 0 or vi != 0:
                raise PreconditionError("point box is not a root of the polynomial")
            certified = box
        else:
            certified = None
            prec = max(64, _bits_for(box.width) + 48)
            work = box
            for _ in range(12):
                img = _newton_image(sqf, sqf.derivative(), work, prec)
                if img is None:
                    prec += 64
                    continue
                if work.strictly_contains(img):
                    certified = img.intersect(work)
                    break
                try:
                    work = img.intersect(work)
                except InputError:
                    break
                prec += 32
            if certified is None:
                raise PreconditionError("box could not be certified to isolate a single root")
        self.poly = sqf
        self.box = certified
        self.sep = None
        self._minpoly = None

    @classmethod
    def _make(cls, poly: UniPoly, box: Box, sep: Fraction | None) -> "AlgebraicNumber":
        self = object.__new__(cls)
        self.poly = poly
        self.box = box
        self.sep = sep
        self._minpoly = None
        return self

    @classmethod
    def from_rational(cls, value) -> "AlgebraicNumber":
        value = Q(value)
        poly = UniPoly(Q(c) for c in UniPoly((-value, 1)).primitive_integer())
        out = cls._make(poly, Box.point(value), sep=Q(1))
        out._minpoly = UniPoly((-value, 1))
        return out

    @classmethod
    def root_of(cls, poly: UniPoly, near_re, near_im=0) -> "AlgebraicNumber":
        """The root of poly whose box center is closest to the given point."""
        roots = isolate_roots(poly)
        near_re, near_im = Q(near_re), Q(near_im)
        return min(
            roots,
            key=lambda r: max(abs(r.box.re.mid - near_re), abs(r.box.im.mid - near_im)),
        )

    # -- refinement -----------------------------------------------------------

    def refine(self, target_width: Fraction) -> Box:
        """Shrink the certified box below target_width; boxes only ever nest."""
        if self.box.width > target_width:
            self.box = _refine_certified(self.poly, self.poly.derivative(), self.box, target_width)
        return self.box

    def box_at(self, prec: int) -> Box:
        return self.refine(Q(1, 1 << prec))

    # -- structural queries -----------------------------------------------------

    def minimal_polynomial(self) -> UniPoly:
        """Monic irreducible polynomial over Q vanishing at this number."""
        if self._minpoly is not None:
            return self._minpoly
        _, factors = factor_rational_poly(self.poly)
        candidates = [f for f, _ in factors]
        prec = 64
        while len(candidates) > 1:
            live = []
            for f in candidates:
                if box_polyval(f.coeffs, self.box, prec).contains_zero():
                    live.append(f)
            candidates = live or candidates
            if len(candidates) > 1:
                self.refine(self.box.width / 16)
                prec += 64
        self._minpoly = candidates[0]
        return self._minpoly

    @property
    def degree(self) -> int:
        return self.minimal_polynomial().degree

    def to_rational(self) -> Fraction | None:
        if self.poly.degree == 1:
            return -self.poly.coeffs[0] / self.poly.coeffs[1]
        m = self.minimal_polynomial()
        return -m.coeffs[0] if m.degree == 1 else None

    def is_rational(self) -> bool:
        return self.to_rational() is not None

    def is_zero(self) -> bool:
        if self.poly(Q(0)) != 0 or not self.box.contains_zero():
            return False
        return self.minimal_polynomial() == UniPoly((0, 1))

    def _match_root(self, roots: list["AlgebraicNumber"]) -> int:
        """Index of the root this value equals; requires value in the root set.

        The true root's box always overlaps ours (both contain the value), and
        sibling boxes inflated by sep/4 still exclude it, so refining our box
        until one candidate remains is a certificate.
        """
        while True:
            hits = [
                i
                for i, r in enumerate(roots)
                if r.box.inflate(r.sep / 4 if r.sep else 0).overlaps(self.box)
            ]
            if len(hits) == 1:
                return hits[0]
            self.refine(self.box.width / 16)

    def equals(self, other: "AlgebraicNumber") -> bool:
        """Exact equality as complex numbers."""
        if not self.box.overlaps(other.box):
            return False
        ma, mb = self.minimal_polynomial(), other.minimal_polynomial()
        if ma != mb:
            return False
        roots = isolate_roots(ma)
        return self._match_root(roots) == other._match_root(roots)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AlgebraicNumber.from_rational(other)
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self) -> str:
        re, im = self.box.mid()
        return f"AlgebraicNumber(~{float(re):.8g}{float(im):+.8g}i, deg<={self.poly.degree})"

    # -- reality / half-plane -----------------------------------------------------

    def is_real(self) -> bool:
        """Exact reality test: Sturm real-root isolation plus root matching."""
        if not self.box.im.contains(0):
            return False
        m = self.minimal_polynomial()
        real_ivs = isolate_real_roots(m)
        if not real_ivs:
            return False
        roots = isolate_roots(m)
        mine = roots[self._match_root(roots)]
        ivs = list(real_ivs)
        while True:
            if not mine.box.im.contains(0):
                return False
            margin = mine.sep / 4 if mine.sep else Q(0)
            inflated = mine.box.inflate(margin)
            live = []
            for iv in ivs:
                if not Box(iv, Interval.point(0)).overlaps(inflated):
                    continue
                live.append(iv)
                if inflated.re.lo <= iv.lo and iv.hi <= inflated.re.hi:
                    # the real root inside iv lies in an inflated box that still
                    # isolates exactly one root of m, so it *is* our root
                    return True
            if not live:
                return False
            ivs = [refine_real_root(m, iv, iv.width / 4) for iv in live]
            mine.refine(mine.box.width / 16)

    def in_upper_half_plane(self) -> bool:
        """Certified Im > 0; reality is decided exactly, never by budget."""
        if self.is_real():
            return False
        while self.box.im.contains(0):
            self.refine(self.box.width / 16)
        return self.box.im.sign() > 0

    # -- arithmetic ----------------------------------------------------------------

    def __neg__(self) -> "AlgebraicNumber":
        poly = UniPoly(Q(c) for c in self.poly.neg_arg().primitive_integer())
        return AlgebraicNumber._make(poly, -self.box, self.sep)

    def __add__(self, other) -> "AlgebraicNumber":
        other = _as_alg(other)
        if other is NotImplemented:
            return NotImplemented
        if other.poly.degree == 1:
            return self._shift_by(other.to_rational())
        if self.poly.degree == 1:
            return other._shift_by(self.to_rational())
        return alg_arith(self, other, "add")

    __radd__ = __add__

    def __sub__(self, other) -> "AlgebraicNumber":
        other = _as_alg(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "AlgebraicNumber":
        return _as_alg(other) + (-self)

    def __mul__(self, other) -> "AlgebraicNumber":
        other = _as_alg(other)
        if other is NotImplemented:
            return NotImplemented
        if other.poly.degree == 1:
            return self._scale_by(other.to_rational())
        if self.poly.degree == 1:
            return other._scale_by(self.to_rational())
        return alg_arith(self, other, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other) -> "AlgebraicNumber":
        other = _as_alg(other)
        if other is NotImplemented:
            return NotImplemented
        return alg_arith(self, other, "div")

    def __rtruediv__(self, other) -> "AlgebraicNumber":
        return alg_arith(_as_alg(other), self, "div")

    def _shift_by(self, r: Fraction) -> "AlgebraicNumber":
        if r == 0:
            return self
        poly = UniPoly(Q(c) for c in self.poly.shift(-r).primitive_integer())
        return AlgebraicNumber._make(poly, self.box + Box.point(r), None)

    def _scale_by(self, r: Fraction) -> "AlgebraicNumber":
        if r == 0:
            return AlgebraicNumber.from_rational(0)
        if r == 1:
            return self
        poly = UniPoly(Q(c) for c in self.poly.scale_arg(Q(1) / r).primitive_integer())
        return AlgebraicNumber._make(poly, self.box * Box.point(r), None)

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of algebraic zero")
        poly = UniPoly(Q(c) for c in self._strip_zero_root().reverse().primitive_integer())
        while self.box.contains_zero():
            self.refine(self.box.width / 16)

        def rehint(p: int) -> Box:
            return (1 / self.refine(self.box.width / 8)).outward(p)

        return _locate(poly, (1 / self.box).outward(96), rehint)

    def _strip_zero_root(self) -> UniPoly:
        p = self.poly
        while p.coeffs and p.coeffs[0] == 0:
            p = UniPoly(p.coeffs[1:])
        return p

    # -- serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "poly": [rational_to_str(c) for c in self.poly.coeffs],
            "box": box_to_json(self.box),
        }

    @classmethod
    def from_json(cls, data) -> "AlgebraicNumber":
        if not isinstance(data, dict) or "poly" not in data or "box" not in data:
            raise InputError("algebraic number JSON needs 'poly' and 'box'")
        poly = UniPoly(rational_from_str(str(c)) for c in data["poly"])
        return cls(poly, box_from_json(data["box"]))


def _as_alg(v):
    if isinstance(v, AlgebraicNumber):
        return v
    if isinstance(v, (int, Fraction)):
        return AlgebraicNumber.from_rational(v)
    return NotImplemented


def _locate(poly: UniPoly, hint: Box, rehint: Callable[[int], Box]) -> AlgebraicNumber:
    """Pick the unique root of poly inside a shrinking certified hint box.

    The hint always contains the true value, and the true value is a root, so
    its box always stays in play; refinement separates it from the siblings.
    """
    roots = isolate_roots(poly)
    prec = 96
    while True:
        live = [r for r in roots if r.box.overlaps(hint)]
        if len(live) == 1:
            return live[0]
        if not live:
            raise PreconditionError("hint box lost the root; inconsistent inputs")
        for r in live:
            r.refine(r.box.width / 4)
        prec += 32
        hint = rehint(prec)


def alg_arith(
    a: AlgebraicNumber, b: AlgebraicNumber, op: Literal["add", "sub", "mul", "div"]
) -> AlgebraicNumber:
    """Field arithmetic by resultant elimination plus certified root matching."""
    if op == "sub":
        return alg_arith(a, -b, "add")
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("algebraic division by zero")
        return alg_arith(a, b.inverse(), "mul")
    if op == "add":
        pa, pb = a.poly, b.poly
        composed = resultant_in_x(pa, lambda x0: pb.compose(UniPoly((x0, -1))), pa.degree * pb.degree)
        composed = UniPoly(Q(c) for c in squarefree_part(composed).primitive_integer())

        def rehint_add(p: int) -> Box:
            return (a.refine(Q(1, 1 << p)) + b.refine(Q(1, 1 << p))).outward(p)

        return _locate(composed, (a.box + b.box).outward(96), rehint_add)
    if op == "mul":
        if a.is_zero() or b.is_zero():
            return AlgebraicNumber.from_rational(0)
        pa, pb = a._strip_zero_root(), b._strip_zero_root()
        m = pb.degree

        def b_at(x0):
            return UniPoly(pb.coeffs[m - j] * x0 ** (m - j) for j in range(m + 1))

        composed = resultant_in_x(pa, b_at, pa.degree * m)
        composed = UniPoly(Q(c) for c in squarefree_part(composed).primitive_integer())

        def rehint_mul(p: int) -> Box:
            return (a.refine(Q(1, 1 << p)) * b.refine(Q(1, 1 << p))).outward(p)

        return _locate(composed, (a.box * b.box).outward(96), rehint_mul)
    raise InputError(f"unknown op {op!r}")


def alg_equals(a: AlgebraicNumber, b: AlgebraicNumber) -> bool:
    return a.equals(b)


def minimal_polynomial(a: AlgebraicNumber) -> UniPoly:
    return a.minimal_polynomial()
