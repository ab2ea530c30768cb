"""The GL2 action on the projective line and its exact orbit theory.

Moebius actions with full projective conventions, primitive integer forms and
their determinants, orbit-equivalence solving over arbitrary presented fields,
specialness (imaginary-quadratic) detection with a fixing-matrix witness,
relative orbit counts dim_G(A|B), and the constructive descent of a G(F)
equivalence to a G(E) equivalence across a linearly disjoint extension.

Orbit equivalence over F reduces to one F-linear constraint in the compositum
K = F(x, y): the vanishing of c*x*y - a*x + d*y - b.  The determinant is a
quadratic form on the constraint kernel; a nonzero symmetric form cannot
vanish on all e_i and e_i + e_j, so searching those suffices.  Over Q with
both points imaginary quadratic the kernel is a rank-2 lattice on which the
determinant is definite, and Gauss reduction returns the witness of minimal
primitive determinant -- the same N the modular polynomials detect.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .algebraic import AlgebraicNumber
from .errors import InputError, PreconditionError
from .fields import FieldElement, PresentedField, RelativeExtension, primitive_element
from .fieldlin import find_E_dependence_elements, linearly_disjoint, nullspace

Q = Fraction


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Infinity()


class Moebius:
    """An invertible 2x2 matrix acting by fractional linear maps."""

    __slots__ = ("a", "b", "c", "d", "field")

    def __init__(self, a, b, c, d, field: PresentedField | None = None, check: bool = True):
        self.a = _alg(a)
        self.b = _alg(b)
        self.c = _alg(c)
        self.d = _alg(d)
        self.field = field
        if check and self.det().is_zero():
            raise InputError("Moebius matrix must be invertible")

    @classmethod
    def identity(cls) -> "Moebius":
        return cls(1, 0, 0, 1, check=False)

    def det(self) -> AlgebraicNumber:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple[AlgebraicNumber, AlgebraicNumber, AlgebraicNumber, AlgebraicNumber]:
        return self.a, self.b, self.c, self.d

    def rational_entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction] | None:
        vals = [e.to_rational() for e in self.entries()]
        if any(v is None for v in vals):
            return None
        return tuple(vals)  # type: ignore[return-value]

    def is_scalar(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and (self.a - self.d).is_zero()

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a, field=self.field, check=False)

    def compose(self, other: "Moebius") -> "Moebius":
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            field=self.field,
        )

    def __repr__(self) -> str:
        return f"Moebius([[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]])"

    def to_json(self) -> dict:
        def enc(e: AlgebraicNumber):
            r = e.to_rational()
            return str(r) if r is not None else e.to_json()

        out = {"entries": [[enc(self.a), enc(self.b)], [enc(self.c), enc(self.d)]]}
        if self.field is not None:
            out["field"] = self.field.describe()
        return out


def _alg(v) -> AlgebraicNumber:
    if isinstance(v, AlgebraicNumber):
        return v
    if isinstance(v, (int, Fraction)):
        return AlgebraicNumber.from_rational(v)
    raise InputError(f"cannot use {type(v).__name__} as a matrix entry")


def act(g: Moebius, x):
    """(a x + b) / (c x + d) with projective conventions; total on P^1."""
    if x is INF:
        if g.c.is_zero():
            return INF
        return g.a / g.c
    x = _alg(x)
    den = g.c * x + g.d
    if den.is_zero():
        return INF
    return (g.a * x + g.b) / den


@dataclass
class PrimitiveIntegerForm:
    """Coprime-integer rescaling r*g (r > 0) of a rational matrix."""

    matrix: tuple[tuple[int, int], tuple[int, int]]

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    @property
    def level(self) -> int:
        """N = det(g~); positive for upper-half-plane orbit matrices."""
        return self.det

    def to_json(self) -> dict:
        return {"matrix": [list(self.matrix[0]), list(self.matrix[1])], "det": self.det}


def primitive_form(g: Moebius) -> PrimitiveIntegerForm:
    """The unique positive rational rescaling with coprime integer entries."""
    vals = g.rational_entries()
    if vals is None:
        raise InputError("primitive form requires rational entries")
    a, b, c, d = vals
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g0 = 0
    for v in ints:
        g0 = gcd(g0, abs(v))
    ints = [v // g0 for v in ints]
    return PrimitiveIntegerForm(matrix=((ints[0], ints[1]), (ints[2], ints[3])))


# ---------------------------------------------------------------------------
# orbit equivalence
# ---------------------------------------------------------------------------


def _embed(F_elem: FieldElement, rel: RelativeExtension):
    """Image of an F-element inside the big field of a RelativeExtension."""
    M = rel.M
    acc = M.zero()
    tpow = M.one()
    for co in F_elem.coeffs:
        acc = acc + co * tpow
        tpow = tpow * rel.theta_f
    return acc


def orbit_equiv(x: AlgebraicNumber, y: AlgebraicNumber, F: PresentedField) -> Moebius | None:
    """Some g in GL2(F) with g x = y, or None when no such matrix exists.

    The returned matrix always satisfies an exact action check.  Over Q with
    both points imaginary quadratic the witness has minimal det(g~) among all
    primitive integer solutions (Gauss-reduced definite lattice minimum).
    """
    M = primitive_element([F.theta, x, y])
    rel = RelativeExtension(M, F)
    x_m, y_m = M.gen_coords[1], M.gen_coords[2]
    cols = [-x_m, -M.one(), x_m * y_m, y_m]  # coefficients of a, b, c, d
    col_coords = [rel.coords(u) for u in cols]
    rows = [[col_coords[j][i] for j in range(4)] for i in range(rel.rel_degree)]
    kernel = nullspace(rows, F, 4)
    if not kernel:
        return None

    if F.degree == 1 and x.degree == 2 and y.degree == 2 and not x.is_real() and not y.is_real():
        vec_q = _reduced_rational_witness(rows)
        if vec_q is not None:
            vec = [F.from_rational(v) for v in vec_q]
            _verify_vec(vec, x_m, y_m, rel)
            return Moebius(*(Q(v) for v in vec_q), field=F)

    # generic witness search: e_i and e_i + e_j
    def det_of(vec: list[FieldElement]) -> FieldElement:
        return vec[0] * vec[3] - vec[1] * vec[2]

    candidates = list(kernel)
    for i in range(len(kernel)):
        for j in range(i + 1, len(kernel)):
            candidates.append([p + q for p, q in zip(kernel[i], kernel[j])])
    for vec in candidates:
        if not det_of(vec).is_zero():
            _verify_vec(vec, x_m, y_m, rel)
            return Moebius(
                F.to_algebraic(vec[0]),
                F.to_algebraic(vec[1]),
                F.to_algebraic(vec[2]),
                F.to_algebraic(vec[3]),
                field=F,
            )
    return None


def _verify_vec(vec: list[FieldElement], x_m: FieldElement, y_m: FieldElement, rel: RelativeExtension) -> None:
    """Exact check of c*x*y - a*x + d*y - b = 0 inside the compositum."""
    a, b, c, d = (_embed(v, rel) for v in vec)
    resid = c * (x_m * y_m) - a * x_m + d * y_m - b
    if not resid.is_zero():
        raise PreconditionError("orbit witness failed its exact action check")


def _integer_kernel(A: list[list[int]]) -> list[list[int]]:
    """Saturated basis of the integer kernel, by unimodular column reduction."""
    m, n = len(A), len(A[0]) if A else 0
    mat = [list(row) for row in A]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    active = list(range(n))
    for row in range(m):
        live = [c for c in active if mat[row][c] != 0]
        while len(live) > 1:
            live.sort(key=lambda c: abs(mat[row][c]))
            base = live[0]
            for c in live[1:]:
                q = mat[row][c] // mat[row][base]
                for r in range(m):
                    mat[r][c] -= q * mat[r][base]
                for r in range(n):
                    u[r][c] -= q * u[r][base]
            live = [c for c in active if mat[row][c] != 0]
        if live:
            active.remove(live[0])
    return [[u[r][c] for r in range(n)] for c in active]


def _reduced_rational_witness(rows: list[list[FieldElement]]) -> list[Fraction] | None:
    """Gauss-reduced minimal-determinant kernel vector for rational special pairs.

    The determinant is a definite quadratic form on the saturated rank-2
    integer kernel when both points are imaginary quadratic, and the reduced
    minimum is exactly the least det(g~) over all primitive witnesses.
    """
    int_rows = []
    for r in rows:
        den = 1
        vals = [c.coeffs[0] for c in r]
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        int_rows.append([int(v * den) for v in vals])
    kernel = _integer_kernel(int_rows)
    if len(kernel) != 2:
        return None

    def detv(v: list[int]) -> int:
        return v[0] * v[3] - v[1] * v[2]

    w1, w2 = kernel
    sign = 1 if detv(w1) > 0 else -1

    def q(v: list[int]) -> int:
        return sign * detv(v)

    if q(w1) <= 0 or q(w2) <= 0:
        return None  # not definite; leave to the generic search
    for _ in range(10_000):
        A = q(w1)
        C = q(w2)
        B = q([p + r for p, r in zip(w1, w2)]) - A - C
        t = round(Fraction(B, 2 * A))
        if t:
            w2 = [p - t * r for p, r in zip(w2, w1)]
            C = q(w2)
        if C < A:
            w1, w2 = w2, w1
            continue
        break
    else:
        return None
    g0 = 0
    for v in w1:
        g0 = gcd(g0, abs(v))
    return [Q(v, g0) for v in w1]


# ---------------------------------------------------------------------------
# special points
# ---------------------------------------------------------------------------


@dataclass
class SpecialResult:
    special: bool
    witness: Moebius | None
    discriminant: int | None

    def to_json(self) -> dict:
        out = {"special": self.special}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.discriminant is not None:
            out["discriminant"] = self.discriminant
        return out


def is_special(x: AlgebraicNumber) -> SpecialResult:
    """Schneider's criterion: special iff imaginary quadratic; with a fixer.

    For minimal polynomial a X^2 + b X + c the matrix [[-b, -c], [a, 0]] is a
    non-scalar rational matrix fixing x.
    """
    if not x.in_upper_half_plane():
        raise PreconditionError("specialness is defined for certified upper-half-plane points")
    m = x.minimal_polynomial()
    if m.degree != 2:
        return SpecialResult(False, None, None)
    c0, c1, c2 = m.primitive_integer()
    witness = Moebius(Q(-c1), Q(-c0), Q(c2), Q(0), field=None)
    if not act(witness, x).equals(x):
        raise PreconditionError("fixer witness failed its action check")
    disc = c1 * c1 - 4 * c2 * c0
    return SpecialResult(True, witness, disc)


# ---------------------------------------------------------------------------
# orbit counting
# ---------------------------------------------------------------------------


def dim_G(
    A: Sequence[AlgebraicNumber],
    F: PresentedField,
    B: Sequence[AlgebraicNumber] = (),
    exclude_special: bool = False,
) -> int:
    """Number of GL2(F)-orbit classes of A, minus excluded classes.

    A class is excluded when it contains an element of B, or (with
    exclude_special, F = Q only) when its representative is special.
    """
    A = list(A)
    if exclude_special and F.degree != 1:
        raise InputError("the special-point exclusion is a GL2(Q) notion")
    if not A:
        return 0
    parent = list(range(len(A)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            if find(i) == find(j):
                continue
            if orbit_equiv(A[i], A[j], F) is not None:
                parent[find(j)] = find(i)
    reps = sorted({find(i) for i in range(len(A))})
    count = 0
    for r in reps:
        if exclude_special and _class_meets_special(A[r]):
            continue
        if any(orbit_equiv(A[r], b, F) is not None for b in B):
            continue
        count += 1
    return count


def _class_meets_special(rep: AlgebraicNumber) -> bool:
    """Does the GL2(Q)-orbit of rep contain a special point?

    Negative determinants swap the half-planes (z -> -z is in GL2(Q)), so the
    orbit meets the special set exactly when rep is imaginary quadratic.
    """
    return rep.degree == 2 and not rep.is_real()


# ---------------------------------------------------------------------------
# descent (G(F)-equivalence to G(E)-equivalence)
# ---------------------------------------------------------------------------


def descend(
    g: Moebius,
    l1: AlgebraicNumber,
    l2: AlgebraicNumber,
    E: PresentedField,
    L: PresentedField,
    F: PresentedField | None = None,
    check_disjoint: bool = True,
) -> Moebius:
    """Replace a G(F) equivalence g l1 = l2 by an h in G(E) with h l1 = l2.

    Preconditions (violations raise, never silently patched): g l1 = l2
    exactly, l1 and l2 lie in L, and F is linearly disjoint from L over E
    (which forces F n L = E).  The construction takes an E-dependence of
    (1, l1, l2, l1 l2) and branches: a nonsingular rearranged matrix acts
    directly; otherwise l1 and l2 both land in E and a translation works.
    """
    F = F or g.field
    if F is None:
        raise InputError("descend needs the field of definition of g")
    img = act(g, l1)
    if img is INF or not img.equals(l2):
        raise PreconditionError("descend requires act(g, l1) = l2 exactly")
    if L.express(l1) is None or L.express(l2) is None:
        raise PreconditionError("descend requires l1, l2 in L")
    if check_disjoint:
        rep = linearly_disjoint(E, [F.theta], [L.theta])
        if not rep.disjoint:
            raise PreconditionError("descend requires F linearly disjoint from L over E")

    one = AlgebraicNumber.from_rational(1)
    prod = l1 * l2
    dep = find_E_dependence_elements(E, [one, l1, l2, prod])
    if dep is None:
        raise PreconditionError(
            "no E-dependence among (1, l1, l2, l1*l2); disjointness hypothesis broken"
        )
    c0, c1, c2, c3 = dep
    alpha, beta, gamma, delta = -c1, -c0, c3, c2
    det = alpha * delta - beta * gamma
    if not det.is_zero():
        h = Moebius(
            E.to_algebraic(alpha),
            E.to_algebraic(beta),
            E.to_algebraic(gamma),
            E.to_algebraic(delta),
            field=E,
        )
        out = act(h, l1)
        if out is INF or not out.equals(l2):
            raise PreconditionError("descent matrix failed its exact action check")
        return h
    # degenerate branch: both endpoints lie in E = F n L
    e1 = E.express(l1)
    e2 = E.express(l2)
    if e1 is None or e2 is None:
        raise PreconditionError("descent degenerate case outside E; F n L != E?")
    shift = e2 - e1
    h = Moebius(1, E.to_algebraic(shift), 0, 1, field=E)
    out = act(h, l1)
    if out is INF or not out.equals(l2):
        raise PreconditionError("translation descent failed its action check")
    return h
