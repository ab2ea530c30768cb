"""Factorization in Q[X] by the classical Zassenhaus route.

Squarefree decomposition, factorization modulo a small good prime
(distinct-degree plus Cantor-Zassenhaus equal-degree splitting), quadratic
Hensel lifting past a Mignotte-style coefficient bound, and subset
recombination with trial division over Z.  Deterministic: the equal-degree
splitting draws from a local PRNG with a fixed seed.

Adequate for the desk scale this package targets (degrees in the dozens);
deliberately no LLL and no multivariate support.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import comb, gcd as int_gcd, isqrt
from typing import Iterator, Sequence

from .errors import InputError
from .qpoly import UniPoly, squarefree_decomposition

# ---------------------------------------------------------------------------
# dense Z/p arithmetic: ascending coefficient lists of ints in [0, p)
# ---------------------------------------------------------------------------


def _gf_strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_sub(a, b, p):
    n = max(len(a), len(b))
    return _gf_strip([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _gf_strip(out)


def _gf_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("division by zero polynomial mod p")
    a = [c % p for c in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * bj) % p
    return _gf_strip(q), _gf_strip(a)


def _gf_rem(a, b, p):
    return _gf_divmod(a, b, p)[1]


def _gf_gcd(a, b, p):
    while b:
        a, b = b, _gf_rem(a, b, p)
    return _gf_monic(a, p)


def _gf_monic(a, p):
    if not a or a[-1] == 1:
        return list(a)
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gf_pow_mod(a, n, m, p):
    out = [1]
    a = _gf_rem(a, m, p)
    while n:
        if n & 1:
            out = _gf_rem(_gf_mul(out, a, p), m, p)
        a = _gf_rem(_gf_mul(a, a, p), m, p)
        n >>= 1
    return out


def _gf_deriv(a, p):
    return _gf_strip([i * c % p for i, c in enumerate(a)][1:])


def _gf_gcdex_pair(g, h, p):
    """s, t with s*g + t*h = 1 mod p for coprime g, h."""
    r0, r1 = [c % p for c in g], [c % p for c in h]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _gf_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _gf_sub(s0, _gf_mul(q, s1, p), p)
        t0, t1 = t1, _gf_sub(t0, _gf_mul(q, t1, p), p)
    if len(r0) != 1:
        raise InputError("polynomials not coprime mod p")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def _gf_squarefree_p(a, p) -> bool:
    return len(_gf_gcd(a, _gf_deriv(a, p), p)) == 1


def _gf_distinct_degree(f, p):
    """[(product of the degree-d irreducible factors, d)] for monic squarefree f."""
    out = []
    x = [0, 1]
    h = list(x)
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _gf_pow_mod(h, p, f, p)
        g = _gf_gcd(_gf_sub(h, x, p), f, p)
        if len(g) > 1:
            out.append((g, d))
            f = _gf_divmod(f, g, p)[0]
            h = _gf_rem(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _gf_equal_degree_split(f, d, p, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles, p odd."""
    n = len(f) - 1
    if n == d:
        return [_gf_monic(f, p)]
    while True:
        a = _gf_strip([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        g = _gf_gcd(a, f, p)
        if 1 < len(g) < len(f):
            parts = [g, _gf_divmod(f, g, p)[0]]
        else:
            b = _gf_pow_mod(a, (p**d - 1) // 2, f, p)
            g = _gf_gcd(_gf_sub(b, [1], p), f, p)
            if 1 < len(g) < len(f):
                parts = [g, _gf_divmod(f, g, p)[0]]
            else:
                continue
        out = []
        for piece in parts:
            out.extend(_gf_equal_degree_split(_gf_monic(piece, p), d, p, rng))
        return out


def gf_factor_squarefree(f: Sequence[int], p: int, seed: int = 0x5EED) -> list[list[int]]:
    """Monic irreducible factors mod p of a squarefree polynomial, sorted."""
    rng = random.Random(seed)
    out = []
    for g, d in _gf_distinct_degree(_gf_monic(list(f), p), p):
        out.extend(_gf_equal_degree_split(g, d, p, rng))
    return sorted(out)


# ---------------------------------------------------------------------------
# integer polynomial helpers (plain int coefficient lists, ascending)
# ---------------------------------------------------------------------------


def _z_strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _z_add(a, b):
    n = max(len(a), len(b))
    return _z_strip([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _z_sub(a, b):
    n = max(len(a), len(b))
    return _z_strip([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _z_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _z_strip(out)


def _z_trunc(a, m):
    """Coefficients reduced to the symmetric residue range modulo m."""
    out = []
    half = m // 2
    for c in a:
        c %= m
        if c > half:
            c -= m
        out.append(c)
    return _z_strip(out)


def _z_divmod_monic(a, b):
    """Integer division with remainder by a monic polynomial; always exact."""
    a = list(a)
    db = len(b) - 1
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            q[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] -= c * bj
    return _z_strip(q), _z_strip(a)


def _int_primitive(f: Sequence[int]) -> list[int]:
    g = 0
    for c in f:
        g = int_gcd(g, c)
    if g == 0:
        return []
    out = [c // g for c in f]
    if out[-1] < 0:
        out = [-c for c in out]
    return out


def _z_divides(a: list[int], b: list[int]) -> bool:
    """Does a divide b over Z (both nonzero)?"""
    if not a or not b or (len(b) - 1) < (len(a) - 1):
        return False
    bb = [Fraction(c) for c in b]
    da = len(a) - 1
    for i in range(len(bb) - 1, da - 1, -1):
        c = bb[i] / a[-1]
        if c:
            for j, aj in enumerate(a):
                bb[i - da + j] -= c * aj
            bb[i] = Fraction(0)
    return all(c == 0 for c in bb[:da])


def _z_exact_div(b: list[int], a: list[int]) -> list[int]:
    bb = [Fraction(c) for c in b]
    da = len(a) - 1
    q = [Fraction(0)] * (len(bb) - da)
    for i in range(len(bb) - 1, da - 1, -1):
        c = bb[i] / a[-1]
        q[i - da] = c
        if c:
            for j, aj in enumerate(a):
                bb[i - da + j] -= c * aj
    if any(c != 0 for c in bb[:da]) or any(c.denominator != 1 for c in q):
        raise InputError("inexact division during recombination")
    return _z_strip([int(c) for c in q])


# ---------------------------------------------------------------------------
# Hensel lifting (quadratic, factor-tree)
# ---------------------------------------------------------------------------


def _hensel_step(m, f, g, h, s, t):
    """Quadratic lift from f = g*h, s*g + t*h = 1 (mod m) to the same mod m^2.

    h is monic, deg(s) < deg(h), deg(t) < deg(g).
    """
    mm = m * m
    e = _z_trunc(_z_sub(f, _z_mul(g, h)), mm)
    q, r = _z_divmod_monic(_z_mul(s, e), h)
    q, r = _z_trunc(q, mm), _z_trunc(r, mm)
    g1 = _z_trunc(_z_add(g, _z_add(_z_mul(t, e), _z_mul(q, g))), mm)
    h1 = _z_trunc(_z_add(h, r), mm)
    b = _z_trunc(_z_sub(_z_add(_z_mul(s, g1), _z_mul(t, h1)), [1]), mm)
    c, d = _z_divmod_monic(_z_mul(s, b), h1)
    c, d = _z_trunc(c, mm), _z_trunc(d, mm)
    s1 = _z_trunc(_z_sub(s, d), mm)
    t1 = _z_trunc(_z_sub(t, _z_add(_z_mul(t, b), _z_mul(c, g1))), mm)
    return g1, h1, s1, t1


def _hensel_lift(p: int, f: list[int], f_list: list[list[int]], steps: int) -> list[list[int]]:
    """Lift f = lc(f) * prod(f_list) (mod p) to monic factors mod p^(2^steps)."""
    r = len(f_list)
    lc = f[-1]
    modulus = p ** (2**steps)
    if r == 1:
        inv = pow(lc % modulus, -1, modulus)
        return [_z_trunc([c * inv for c in f], modulus)]
    k = r // 2
    g = [lc % p]
    for fi in f_list[:k]:
        g = [c % p for c in _z_mul(g, fi)]
    h = [1]
    for fi in f_list[k:]:
        h = [c % p for c in _z_mul(h, fi)]
    s, t = _gf_gcdex_pair(g, h, p)
    g, h = _z_trunc(g, p), _z_trunc(h, p)
    s, t = _z_trunc(s, p), _z_trunc(t, p)
    m = p
    for _ in range(steps):
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m *= m
    return _hensel_lift(p, g, f_list[:k], steps) + _hensel_lift(p, h, f_list[k:], steps)


# ---------------------------------------------------------------------------
# Zassenhaus over Z
# ---------------------------------------------------------------------------


def _primes() -> Iterator[int]:
    yield from (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)
    n = 53
    while True:
        n += 2
        if all(n % q for q in range(3, isqrt(n) + 1, 2)):
            yield n


def _factor_bound(f: Sequence[int]) -> int:
    """Bound on |coefficients| of lc(f) * (any monic rational factor of f)."""
    n = len(f) - 1
    norm = isqrt(sum(c * c for c in f)) + 1
    return comb(n, n // 2) * norm * abs(f[-1])


def _factor_squarefree_integer(f: list[int]) -> list[list[int]]:
    """Irreducible factors over Z of a primitive squarefree integer polynomial."""
    n = len(f) - 1
    if n == 1:
        return [list(f)]
    best = None
    tried = 0
    for p in _primes():
        if f[-1] % p == 0:
            continue
        fp = _gf_strip([c % p for c in f])
        if len(fp) - 1 != n or not _gf_squarefree_p(fp, p):
            continue
        facs = gf_factor_squarefree(fp, p)
        tried += 1
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) == 1 or tried >= 4:
            break
    assert best is not None  # infinitely many good primes for a squarefree poly
    p, modular = best
    if len(modular) == 1:
        return [list(f)]

    target = 2 * _factor_bound(f) + 1
    steps = 0
    while p ** (2**steps) <= target:
        steps += 1
    modulus = p ** (2**steps)
    lifted = _hensel_lift(p, f, [_z_trunc(g, p) for g in modular], steps)

    result: list[list[int]] = []
    rem = list(f)
    live = list(lifted)
    k = 1
    while 2 * k <= len(live):
        progress = True
        while progress and 2 * k <= len(live):
            progress = False
            for subset in combinations(range(len(live)), k):
                cand = [rem[-1]]
                for idx in subset:
                    cand = _z_trunc(_z_mul(cand, live[idx]), modulus)
                cand = _int_primitive(cand)
                if cand and _z_divides(cand, rem):
                    result.append(cand)
                    rem = _z_exact_div(rem, cand)
                    chosen = set(subset)
                    live = [g for i, g in enumerate(live) if i not in chosen]
                    progress = True
                    break
        k += 1
    if len(rem) > 1:
        result.append(_int_primitive(rem))
    return result


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def factor_rational_poly(a: UniPoly) -> tuple[Fraction, list[tuple[UniPoly, int]]]:
    """Complete factorization over Q: (unit, [(monic irreducible, multiplicity)]).

    unit * prod(f_i^m_i) reconstructs the input exactly.
    """
    if a.is_zero():
        raise InputError("cannot factor the zero polynomial")
    unit = a.lc
    factors: list[tuple[UniPoly, int]] = []
    for sqf, mult in squarefree_decomposition(a):
        ints = list(sqf.primitive_integer())
        for fac in _factor_squarefree_integer(ints):
            factors.append((UniPoly(Fraction(c) for c in fac).monic(), mult))
    factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs, fm[1]))
    return unit, factors


def is_irreducible(a: UniPoly) -> bool:
    if a.degree < 1:
        return False
    _, factors = factor_rational_poly(a)
    return len(factors) == 1 and factors[0][1] == 1
