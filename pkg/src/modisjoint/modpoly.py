"""Modular polynomials Phi_N and exact isogeny-level detection.

Phi_N(X, j(tau)) = prod (X - j((a tau + b)/d)) over a d = N, 0 <= b < d,
gcd(a, b, d) = 1.  Each root expands as an exact-integer j-series twisted by
a root of unity: in x = q^(1/N), j((a tau + b)/d) = sum c(n) zeta_d^(bn)
x^(a^2 n).  The product is carried out on Laurent polynomials in x whose
coefficients are exact integers times certified root-of-unity enclosures, and
the symmetric functions are reduced against powers of the exact j-series to
polynomials in Y = j(tau).  Integrality of the resulting coefficients (with
enclosure radius below 1/4) is the correctness gate; construction repeats at
a second working precision and both integer outputs must agree exactly.

Isogeny levels are decided exactly: Phi_N(j(x), j(y)) is an element of the
finite ring Q[U,V]/(H_D1(U), H_D2(V)); its minimal polynomial has the values
at all conjugate pairs as roots, so either 0 is not a root (level excluded)
or a refinable enclosure isolates our pair's value among the roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .algebraic import AlgebraicNumber, isolate_roots
from .boxes import Box, Interval
from .classpoly import class_polynomial, singular_modulus_of_point
from .enclosures import exp_box, pi_interval
from .errors import InputError, PreconditionError, Undecided
from .fields import _first_dependence
from .jfunc import eval_j
from .moebius import is_special
from .qexp import j_qexp
from .qpoly import UniPoly

Q = Fraction

DEFAULT_N_BOUND = 10


@dataclass
class BiPoly:
    """Bivariate integer polynomial as an exact coefficient map on X^a Y^b."""

    terms: dict[tuple[int, int], int] = field(default_factory=dict)
    symmetric: bool = False

    def coefficient(self, i: int, j: int) -> int:
        if self.symmetric and (i, j) not in self.terms:
            return self.terms.get((j, i), 0)
        return self.terms.get((i, j), 0)

    def total_degree(self) -> int:
        return max((i + j for (i, j), c in self.terms.items() if c), default=0)

    def degrees(self) -> tuple[int, int]:
        dx = max((i for (i, j), c in self.terms.items() if c), default=0)
        dy = max((j for (i, j), c in self.terms.items() if c), default=0)
        if self.symmetric:
            m = max(dx, dy)
            return m, m
        return dx, dy

    def all_terms(self) -> dict[tuple[int, int], int]:
        if not self.symmetric:
            return {k: v for k, v in self.terms.items() if v}
        out: dict[tuple[int, int], int] = {}
        for (i, j), c in self.terms.items():
            if c:
                out[(i, j)] = c
                if (j, i) not in self.terms:
                    out[(j, i)] = c
        return out

    def is_symmetric(self) -> bool:
        t = self.all_terms()
        return all(t.get((j, i), 0) == c for (i, j), c in t.items())

    def eval_box(self, x: Box, y: Box, prec: int) -> Box:
        xs = _power_boxes(x, self.degrees()[0], prec)
        ys = _power_boxes(y, self.degrees()[1], prec)
        acc = Box.point(0)
        for (i, j), c in self.all_terms().items():
            acc = (acc + xs[i] * ys[j] * Box.point(c)).outward(prec)
        return acc

    def eval_exact(self, x: Fraction, y: Fraction) -> Fraction:
        acc = Q(0)
        for (i, j), c in self.all_terms().items():
            acc += c * x**i * y**j
        return acc

    def to_json(self) -> dict:
        items = sorted(self.all_terms().items())
        return {"terms": [{"e": [i, j], "c": str(c)} for (i, j), c in items]}

    @classmethod
    def from_json(cls, data) -> "BiPoly":
        if not isinstance(data, dict) or "terms" not in data:
            raise InputError("BiPoly JSON needs a 'terms' list")
        terms = {}
        for t in data["terms"]:
            i, j = int(t["e"][0]), int(t["e"][1])
            terms[(i, j)] = int(t["c"])
        return cls(terms=terms)


def _power_boxes(x: Box, n: int, prec: int) -> list[Box]:
    out = [Box.point(1)]
    for _ in range(n):
        out.append((out[-1] * x).outward(prec))
    return out


# ---------------------------------------------------------------------------
# Phi_N construction
# ---------------------------------------------------------------------------


def _triples(N: int) -> list[tuple[int, int, int]]:
    out = []
    for a in range(1, N + 1):
        if N % a:
            continue
        d = N // a
        for b in range(d):
            if gcd(gcd(a, b), d) == 1:
                out.append((a, b, d))
    return out


def _zeta_balls(d: int, prec: int) -> list[Box]:
    """exp(2 pi i k / d) for k < d, certified."""
    out = []
    two_pi = pi_interval(prec + 16) * 2
    for k in range(d):
        z = Box(Interval.point(0), two_pi * Q(k, d))
        out.append(exp_box(z, prec))
    return out


def _series_mul(sa: dict[int, Box], sb: dict[int, Box], cutoff: int, prec: int) -> dict[int, Box]:
    out: dict[int, Box] = {}
    for ea, ca in sa.items():
        for eb, cb in sb.items():
            e = ea + eb
            if e > cutoff:
                continue
            v = ca * cb
            out[e] = (out[e] + v).outward(prec) if e in out else v.outward(prec)
    return out


def _phi_pass(N: int, prec: int) -> dict[tuple[int, int], int] | None:
    """One construction pass at a working precision; None if a gate fails."""
    triples = _triples(N)
    poles = [a * a for a, _, _ in triples]
    total_pole = sum(poles)
    ord_need = max((total_pole - p) // p for p in poles) + 2
    jq = j_qexp(ord_need + 1)
    zetas = {d: _zeta_balls(d, prec) for d in {t[2] for t in triples}}

    # polynomial in X whose coefficients are Laurent series in x (dict exp->Box)
    poly: list[dict[int, Box]] = [{0: Box.point(1)}]
    remaining = total_pole
    for (a, b, d), pole in zip(triples, poles):
        remaining -= pole
        n_hi = (total_pole - pole) // pole
        series: dict[int, Box] = {}
        zs = zetas[d]
        for n in range(-1, n_hi + 1):
            c = jq[n]
            if c:
                series[pole * n] = zs[(b * n) % d] * Box.point(c)
        cutoff = remaining
        new: list[dict[int, Box]] = [dict() for _ in range(len(poly) + 1)]
        for k, s in enumerate(poly):
            for e, c in s.items():  # X * s
                if e <= cutoff:
                    new[k + 1][e] = (new[k + 1][e] + c).outward(prec) if e in new[k + 1] else c
            prod = _series_mul(s, series, cutoff, prec)
            for e, c in prod.items():
                new[k][e] = (new[k][e] - c).outward(prec) if e in new[k] else (-c)
        poly = new

    deg_y_max = total_pole // N + 1
    jpows = _exact_j_powers(N, deg_y_max)

    out: dict[tuple[int, int], int] = {}
    for k, s in enumerate(poly):
        s = dict(s)
        min_e = min((e for e in s), default=0)
        t = (-min_e) // N if min_e < 0 else 0
        while t >= 0:
            e = -N * t
            ball = s.get(e)
            if ball is None:
                gamma = 0
            else:
                gamma = _round_gate(ball)
                if gamma is None:
                    return None
            if gamma:
                out[(k, t)] = gamma
                for ej, cj in jpows[t].items():
                    if e <= ej <= 0:
                        add = Box.point(-gamma * cj)
                        s[ej] = (s[ej] + add).outward(prec) if ej in s else add
            t -= 1
        for e, ball in s.items():
            if not ball.contains_zero():
                return None
    return out


def _exact_j_powers(N: int, tmax: int) -> list[dict[int, int]]:
    """Exact integer x-series of j^t for t <= tmax, complete on exponents <= 0.

    Power t can still fall by N per remaining factor, so intermediate series
    keep exponents up to N*(tmax - t); the exponent-<=0 window of every power
    is then exact.
    """
    jq = j_qexp(tmax + 3)
    base = {N * n: jq[n] for n in range(-1, tmax + 2) if jq[n]}
    pows = [{0: 1}]
    for t in range(1, tmax + 1):
        cap = N * (tmax - t)
        prev = pows[-1]
        nxt: dict[int, int] = {}
        for e1, c1 in prev.items():
            for e2, c2 in base.items():
                e = e1 + e2
                if e > cap:
                    continue
                nxt[e] = nxt.get(e, 0) + c1 * c2
        pows.append(nxt)
    return pows


def _round_gate(ball: Box) -> int | None:
    if not ball.im.contains(0) or ball.im.mag() >= Q(1, 4):
        return None
    mid = ball.re.mid
    n = int(mid) if mid == int(mid) else int(mid + (Q(1, 2) if mid > 0 else Q(-1, 2)))
    if abs(mid - n) + ball.re.width / 2 >= Q(1, 4):
        return None
    if not ball.re.contains(n):
        return None
    return n


_PHI_CACHE: dict[int, BiPoly] = {}


def phi_n(N: int, nmax: int = DEFAULT_N_BOUND) -> BiPoly:
    """The modular polynomial Phi_N; validated before release.

    Gates: dual working precisions agree exactly, Phi is symmetric for N >= 2,
    the total degree is at least 2N, and Phi_N(j(tau), j(N tau)) encloses 0 at
    two sample points.
    """
    if N < 1 or N > nmax:
        raise InputError(f"N must lie in [1, {nmax}]")
    if N in _PHI_CACHE:
        return _PHI_CACHE[N]
    if N == 1:
        phi = BiPoly(terms={(1, 0): 1, (0, 1): -1}, symmetric=False)
        _PHI_CACHE[1] = phi
        return phi
    import math

    prec = 160 + int(8 * len(_triples(N)) * math.log2(N + 1))
    phi = None
    for _ in range(5):
        first = _phi_pass(N, prec)
        second = _phi_pass(N, prec + 64)
        if first is not None and second is not None and first == second:
            # first is Phi_N(X, Y) with the X-free part keyed (0, t)
            phi = BiPoly(terms=first, symmetric=False)
            break
        prec *= 2
    if phi is None:
        raise Undecided(f"Phi_{N} construction did not stabilize")
    if not phi.is_symmetric():
        raise PreconditionError(f"Phi_{N} failed the symmetry gate")
    phi.symmetric = True
    if phi.total_degree() < 2 * N:
        raise PreconditionError(f"Phi_{N} failed the total-degree gate")
    for tau_re, tau_im in ((Q(1, 10), Q(23, 20)), (Q(3, 10), Q(17, 10))):
        tau = Box(Interval.point(tau_re), Interval.point(tau_im))
        ntau = Box(Interval.point(N * tau_re), Interval.point(N * tau_im))
        val = phi.eval_box(eval_j(tau, 128), eval_j(ntau, 128), 128)
        if not val.contains_zero():
            raise PreconditionError(f"Phi_{N} failed the functional-equation gate")
    _PHI_CACHE[N] = phi
    return phi


# ---------------------------------------------------------------------------
# exact zero test of Phi_N at a pair of singular moduli
# ---------------------------------------------------------------------------


class _TensorRing:
    """Q[U, V] / (H1(U), H2(V)); elements are h1 x h2 rational matrices."""

    def __init__(self, h1: UniPoly, h2: UniPoly):
        self.h1 = h1
        self.h2 = h2
        self.d1 = h1.degree
        self.d2 = h2.degree
        self.u_red = self._power_table(h1, 2 * self.d1 - 1)
        self.v_red = self._power_table(h2, 2 * self.d2 - 1)

    @staticmethod
    def _power_table(h: UniPoly, upto: int) -> list[list[Fraction]]:
        """X^k mod h for 0 <= k < upto, as dense coordinate rows."""
        d = h.degree
        rows = []
        cur = UniPoly.const(1)
        x = UniPoly.x()
        for _ in range(max(upto, 1)):
            r = cur % h
            rows.append([r.coeffs[i] if i < len(r.coeffs) else Q(0) for i in range(d)])
            cur = cur * x
        return rows

    def _ensure_tables(self, du: int, dv: int) -> None:
        if len(self.u_red) <= du:
            self.u_red = self._power_table(self.h1, du + 1)
        if len(self.v_red) <= dv:
            self.v_red = self._power_table(self.h2, dv + 1)

    def zero(self):
        return [[Q(0)] * self.d2 for _ in range(self.d1)]

    def mul(self, A, B):
        d1, d2 = self.d1, self.d2
        conv = [[Q(0)] * (2 * d2 - 1) for _ in range(2 * d1 - 1)]
        for i1 in range(d1):
            row = A[i1]
            for j1 in range(d2):
                a = row[j1]
                if not a:
                    continue
                for i2 in range(d1):
                    brow = B[i2]
                    for j2 in range(d2):
                        b = brow[j2]
                        if b:
                            conv[i1 + i2][j1 + j2] += a * b
        out = self.zero()
        for i in range(2 * d1 - 1):
            ured = self.u_red[i]
            for j in range(2 * d2 - 1):
                c = conv[i][j]
                if not c:
                    continue
                vred = self.v_red[j]
                for ii in range(d1):
                    ui = ured[ii]
                    if not ui:
                        continue
                    cui = c * ui
                    row = out[ii]
                    for jj in range(d2):
                        vj = vred[jj]
                        if vj:
                            row[jj] += cui * vj
        return out

    def from_bipoly(self, phi: BiPoly):
        dx, dy = phi.degrees()
        self._ensure_tables(dx, dy)
        out = self.zero()
        for (i, j), c in phi.all_terms().items():
            ured = self.u_red[i]
            vred = self.v_red[j]
            for ii in range(self.d1):
                if ured[ii]:
                    for jj in range(self.d2):
                        if vred[jj]:
                            out[ii][jj] += c * ured[ii] * vred[jj]
        return out

    def minpoly(self, z) -> UniPoly:
        """Minimal polynomial of z over Q; its roots are z's values at all
        conjugate pairs (U, V) -> (root of h1, root of h2)."""
        dim = self.d1 * self.d2
        flat = lambda m: tuple(m[i][j] for i in range(self.d1) for j in range(self.d2))
        powers = [flat([[Q(1) if (i, j) == (0, 0) else Q(0) for j in range(self.d2)] for i in range(self.d1)])]
        cur = [[Q(1) if (i, j) == (0, 0) else Q(0) for j in range(self.d2)] for i in range(self.d1)]
        for _ in range(dim + 1):
            dep = _first_dependence(powers)
            if dep is not None:
                return UniPoly(dep).monic()
            cur = self.mul(cur, z)
            powers.append(flat(cur))
        raise PreconditionError("tensor-ring minimal polynomial not found")


def find_isogeny_level(
    x: AlgebraicNumber,
    y: AlgebraicNumber,
    n_max: int,
    nbound: int = DEFAULT_N_BOUND,
    dmax: int = 400,
) -> int | None:
    """Smallest N <= n_max with Phi_N(j(x), j(y)) = 0, decided exactly.

    x and y must be special; their j-values are certified class-polynomial
    roots, and each candidate level is settled by the tensor-ring minimal
    polynomial of Phi_N(j(x), j(y)) plus enclosure isolation of its value.
    """
    sx = is_special(x)
    sy = is_special(y)
    if not (sx.special and sy.special):
        raise PreconditionError("isogeny level is defined for special points")
    jx = singular_modulus_of_point(x, sx.discriminant, dmax=dmax)
    jy = singular_modulus_of_point(y, sy.discriminant, dmax=dmax)
    h1 = class_polynomial(sx.discriminant, dmax=dmax)
    h2 = class_polynomial(sy.discriminant, dmax=dmax)
    ring = _TensorRing(h1, h2)
    for N in range(1, n_max + 1):
        phi = phi_n(N, nmax=max(nbound, n_max))
        z = ring.from_bipoly(phi)
        mu = ring.minpoly(z)
        if mu(Q(0)) != 0:
            continue
        if _value_is_zero(phi, jx, jy, mu):
            return N
    return None


def _value_is_zero(phi: BiPoly, jx: AlgebraicNumber, jy: AlgebraicNumber, mu: UniPoly) -> bool:
    """Is Phi(jx, jy) = 0?  Its value is a root of mu; isolate which."""
    roots = isolate_roots(mu)
    zero_roots = [r for r in roots if r.box.contains_zero()]
    if not zero_roots:
        return False
    prec = 96
    while True:
        val = phi.eval_box(jx.box_at(prec), jy.box_at(prec), prec)
        if not val.contains_zero():
            return False
        live = [r for r in roots if r.box.overlaps(val)]
        if len(live) == 1:
            return live[0].is_zero()
        for r in live:
            r.refine(r.box.width / 8)
        prec += 64
