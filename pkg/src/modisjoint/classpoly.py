"""Binary quadratic forms, Hilbert class polynomials and singular moduli.

Reduced primitive forms of a negative discriminant enumerate the CM points
of that discriminant; the class polynomial is the exact integer polynomial
whose roots are their j-values.  Construction is by certified high-precision
evaluation of j at each CM point followed by integer rounding, gated by a
radius check, a second independent working precision, and disjointness of
the root enclosures; the returned singular moduli are certified algebraic
numbers (interval-Newton isolated roots of the class polynomial).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .algebraic import AlgebraicNumber, isolate_roots
from .boxes import Box
from .errors import InputError, Undecided
from .jfunc import eval_j
from .qpoly import UniPoly

Q = Fraction


@dataclass(frozen=True)
class BQF:
    """Reduced primitive positive-definite binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def cm_point(self) -> AlgebraicNumber:
        """tau = (-b + sqrt(D)) / (2a), the root of a X^2 + b X + c in H+."""
        poly = UniPoly((self.c, self.b, self.a))
        roots = isolate_roots(poly)
        for r in roots:
            if r.box.im.sign() > 0:
                return r
            if r.box.im.contains(0):
                r.refine(r.box.width / 16)
                if r.box.im.sign() > 0:
                    return r
        raise InputError(f"form {self} has no upper-half-plane root")

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.discriminant}


def is_valid_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def reduced_forms(D: int) -> list[BQF]:
    """All primitive reduced forms of discriminant D < 0; len = h(D)."""
    if not is_valid_discriminant(D):
        raise InputError("discriminant must be negative and 0 or 1 mod 4")
    out = []
    amax = isqrt(-D // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            if b * b - 4 * a * c != D:
                continue
            out.append(BQF(a, b, c))
    out.sort(key=lambda f: (f.a, f.b, f.c))
    return out


def class_number(D: int) -> int:
    return len(reduced_forms(D))


def _classpoly_at(D: int, prec: int) -> tuple[list[int], list[Box]] | None:
    """One construction pass; None when the rounding gate fails."""
    forms = reduced_forms(D)
    balls = [eval_j(f.cm_point(), prec) for f in forms]
    # product of (X - ball) with box coefficients
    coeffs: list[Box] = [Box.point(1)]
    for ball in balls:
        nxt = [Box.point(0)] * (len(coeffs) + 1)
        for k, co in enumerate(coeffs):
            nxt[k + 1] = nxt[k + 1] + co
            nxt[k] = nxt[k] - co * ball
        coeffs = [c.outward(prec + 32) for c in nxt]
    ints: list[int] = []
    for co in coeffs:
        if not co.im.contains(0):
            return None
        mid = co.re.mid
        n = int(mid) if mid == int(mid) else int(mid + (Q(1, 2) if mid > 0 else Q(-1, 2)))
        err = abs(co.re.mid - n) + co.re.width / 2 + co.im.mag()
        if err >= Q(1, 4) or not co.re.contains(n):
            return None
        ints.append(n)
    return ints, balls


def _estimate_bits(D: int) -> int:
    forms = reduced_forms(D)
    # |j(tau)| ~ exp(pi sqrt(|D|) / a); sum over forms, generous slack
    total = sum(5 * isqrt(-D) // a + 16 for f in forms for a in (f.a,))
    return max(96, total + 64)


_CLASSPOLY_CACHE: dict[int, UniPoly] = {}


def class_polynomial(D: int, dmax: int = 200) -> UniPoly:
    """The Hilbert class polynomial H_D, exact monic integer coefficients.

    Validated by dual-precision agreement before release; escalates precision
    on rounding ambiguity and reports persistent failure.
    """
    if not is_valid_discriminant(D):
        raise InputError("discriminant must be negative and 0 or 1 mod 4")
    if -D > dmax:
        raise InputError(f"|D| exceeds the configured bound {dmax}")
    cached = _CLASSPOLY_CACHE.get(D)
    if cached is not None:
        return cached
    prec = _estimate_bits(D)
    for _ in range(6):
        first = _classpoly_at(D, prec)
        second = _classpoly_at(D, prec + 64)
        if first is not None and second is not None and first[0] == second[0]:
            poly = UniPoly(Q(c) for c in first[0])
            _CLASSPOLY_CACHE[D] = poly
            return poly
        prec *= 2
    raise Undecided(f"class polynomial H_{D} did not stabilize under precision escalation")


def singular_modulus(form: BQF, dmax: int = 200) -> AlgebraicNumber:
    """j(tau_form) as a certified root of the class polynomial."""
    D = form.discriminant
    h = class_polynomial(D, dmax=dmax)
    tau = form.cm_point()

    def rehint(p: int) -> Box:
        return eval_j(tau, p)

    from .algebraic import _locate

    return _locate(h, eval_j(tau, 96), rehint)


def singular_modulus_of_point(x: AlgebraicNumber, discriminant: int, dmax: int = 200) -> AlgebraicNumber:
    """j(x) for a special point x with the given (order) discriminant."""
    h = class_polynomial(discriminant, dmax=dmax)

    def rehint(p: int) -> Box:
        return eval_j(x, p)

    from .algebraic import _locate

    return _locate(h, eval_j(x, 96), rehint)
