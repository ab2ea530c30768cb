"""Certified complex evaluation of j and its tau-derivatives.

Values are enclosed by truncated Eisenstein/eta sums with explicit tail
bounds: sigma_k(n) <= n^(k+1) turns each Eisenstein tail into a closed-form
polylogarithm bound, and the pentagonal series has a plain geometric tail.
Derivatives come from the Ramanujan closed forms

    Dj   = -E4^2 E6 / Delta
    D2j  = ( E4^4/2 + 2 E4 E6^2/3 - E2 E4^2 E6/6 ) / Delta
    D3j  = ( E2 E4^4/4 + E2 E4 E6^2/3 - 95 E4^3 E6/72
             - 2 E6^3/9 - E2^2 E4^2 E6/24 ) / Delta

with D = q d/dq and d/dtau = 2 pi i D; the identities are recertified against
the exact q-series in the test suite.
"""

from __future__ import annotations

from fractions import Fraction

from .algebraic import AlgebraicNumber
from .boxes import Box, Interval
from .enclosures import Enclosure, exp_box, pi_interval
from .errors import InputError, SingularPoint, Undecided
from .qexp import sigma_table

Q = Fraction

# Eulerian polynomials A_j: sum_{m>=0} (m+1)^j x^m = A_j(x) / (1-x)^(j+1)
_EULERIAN = {
    2: (1, 1),
    4: (1, 11, 11, 1),
    6: (1, 57, 302, 302, 57, 1),
}


def _tau_box(tau, prec: int) -> Box:
    if isinstance(tau, AlgebraicNumber):
        return tau.box_at(prec)
    if isinstance(tau, Enclosure):
        return tau.box(prec)
    if isinstance(tau, Box):
        return tau
    raise InputError("tau must be a Box, AlgebraicNumber or Enclosure")


def q_box(tau, prec: int) -> Box:
    """q = exp(2 pi i tau) with a certified upper-half-plane check."""
    t = _tau_box(tau, prec)
    if not t.im.lo > 0:
        raise InputError("tau is not certified to lie in the upper half plane")
    two_pi = pi_interval(prec + 16) * 2
    z = Box(-(two_pi * t.im), two_pi * t.re)
    return exp_box(z, prec)


def _q_mag(q: Box, prec: int) -> Fraction:
    r = q.mag_upper(prec)
    if r >= Q(97, 100):
        raise Undecided("Im(tau) too small: |q| too close to 1 for certified sums")
    return r


def _eisenstein_tail(j: int, mult: int, r: Fraction, m: int) -> Fraction:
    """Bound on |mult * sum_{n>m} sigma_{j-1}(n) q^n| via sigma_k(n) <= n^(j)."""
    num = sum(c * r**i for i, c in enumerate(_EULERIAN[j]))
    return abs(mult) * Q(m + 1) ** j * r ** (m + 1) * num / (1 - r) ** (j + 1)


def _eisenstein_value(weight: int, q: Box, prec: int) -> Box:
    params = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}
    mult, k = params[weight]
    r = _q_mag(q, prec)
    target = Q(1, 1 << (prec + 8))
    m = 8
    while _eisenstein_tail(k + 1, mult, r, m) > target and m < 100_000:
        m = m * 2
    tail = _eisenstein_tail(k + 1, mult, r, m)
    sig = sigma_table(k, m)
    acc = Box.point(1)
    qn = Box.point(1)
    for n in range(1, m + 1):
        qn = (qn * q).outward(prec + 16)
        acc = (acc + qn * Box.point(mult * sig[n])).outward(prec + 16)
    return acc.inflate(tail)


def _pentagonal_value(q: Box, prec: int) -> Box:
    """prod (1 - q^n) = sum of +-q^(k(3k+-1)/2), geometric tail bound."""
    r = _q_mag(q, prec)
    target = Q(1, 1 << (prec + 8))
    acc = Box.point(1)
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        tail = 2 * r**g1 / (1 - r)
        if tail <= target:
            return acc.inflate(tail)
        s = 1 if k % 2 == 0 else -1
        acc = (acc + (q**g1) * Box.point(s) + (q**g2) * Box.point(s)).outward(prec + 16)
        k += 1


def _delta_value(q: Box, prec: int) -> Box:
    p = _pentagonal_value(q, prec + 8)
    return ((p**24) * q).outward(prec)


class JValues:
    """Certified enclosures of q, E2, E4, E6, Delta at one point."""

    def __init__(self, tau, prec: int):
        wp = prec + 96
        self.prec = prec
        self.q = q_box(tau, wp)
        self.e2 = _eisenstein_value(2, self.q, wp)
        self.e4 = _eisenstein_value(4, self.q, wp)
        self.e6 = _eisenstein_value(6, self.q, wp)
        self.delta = _delta_value(self.q, wp)
        if self.delta.contains_zero():
            raise Undecided("Delta enclosure could not exclude zero at this precision")

    def j(self) -> Box:
        return ((self.e4**3) / self.delta).outward(self.prec)

    def dj(self) -> Box:
        """D j with D = q d/dq."""
        return (-(self.e4**2 * self.e6) / self.delta).outward(self.prec)

    def d2j(self) -> Box:
        a, b, e = self.e4, self.e6, self.e2
        num = (
            a**4 * Box.point(Q(1, 2))
            + (a * b**2) * Box.point(Q(2, 3))
            - (e * a**2 * b) * Box.point(Q(1, 6))
        )
        return (num / self.delta).outward(self.prec)

    def d3j(self) -> Box:
        a, b, e = self.e4, self.e6, self.e2
        num = (
            (e * a**4) * Box.point(Q(1, 4))
            + (e * a * b**2) * Box.point(Q(1, 3))
            - (a**3 * b) * Box.point(Q(95, 72))
            - (b**3) * Box.point(Q(2, 9))
            - (e**2 * a**2 * b) * Box.point(Q(1, 24))
        )
        return (num / self.delta).outward(self.prec)


def eval_j(tau, prec: int) -> Box:
    """Certified enclosure of j(tau); width shrinks as prec grows."""
    return JValues(tau, prec).j()


def eval_j_derivs(tau, prec: int) -> tuple[Box, Box, Box, Box]:
    """(j, j', j'', j''') with j' = dj/dtau = 2 pi i * q dj/dq."""
    v = JValues(tau, prec)
    wp = prec + 32
    two_pi_i = Box(Interval.point(0), pi_interval(wp) * 2)
    j0 = v.j()
    j1 = (two_pi_i * v.dj()).outward(prec)
    j2 = ((two_pi_i**2) * v.d2j()).outward(prec)
    j3 = ((two_pi_i**3) * v.d3j()).outward(prec)
    return j0, j1, j2, j3


def schwarzian_residual(tau, prec: int) -> Box:
    """Residual of the third-order equation satisfied by j; must enclose 0.

    residual = j'''/j' - (3/2)(j''/j')^2
               + (j^2 - 1968 j + 2654208) / (2 j^2 (j - 1728)^2) * (j')^2

    Note the 2 in the denominator of the rational coefficient: together with
    the tau-derivative convention this is the classical identity, recertified
    by exact series arithmetic in the test suite.  Points where the enclosure
    of j meets {0, 1728} are poles of the coefficient and are signaled.
    """
    j0, j1, j2, j3 = eval_j_derivs(tau, prec + 32)
    if j1.contains_zero():
        raise SingularPoint("j'(tau) enclosure cannot exclude zero")
    denom = (j0**2) * ((j0 - Box.point(1728)) ** 2) * Box.point(2)
    if denom.contains_zero():
        raise SingularPoint("j(tau) enclosure meets a pole of the rational coefficient")
    num = j0**2 - Box.point(1968) * j0 + Box.point(2654208)
    term = (num / denom) * (j1**2)
    resid = j3 / j1 - (j2 / j1) ** 2 * Box.point(Q(3, 2)) + term
    return resid.outward(prec)
