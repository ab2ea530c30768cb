"""Finitely generated number fields presented by a primitive element.

A PresentedField is Q[Y]/(m) for a monic irreducible m together with a
certified AlgebraicNumber embedding of the class of Y into C.  Elements are
coordinate vectors in the power basis, so zero tests, inverses and linear
algebra are exact polynomial arithmetic — no interval judgement anywhere.

Fields are built by adjoining one generator at a time: theta' = g + c*theta
for a small integer c making the composition resultant squarefree, with the
coordinates of theta and g recovered from a linear gcd (the classical
primitive-element argument made effective).  Membership of an arbitrary
algebraic number is decided by Trager's norm trick plus certified root
matching.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebraic import AlgebraicNumber, _locate
from .boxes import Box, box_polyval
from .errors import InputError, PreconditionError
from .factorize import factor_rational_poly
from .qpoly import UniPoly, poly_gcd, rational_to_str, resultant_in_x, squarefree_part

Q = Fraction


class FieldElement:
    """Element of a PresentedField: a polynomial of degree < d in theta."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "PresentedField", coeffs: Sequence[Fraction]):
        d = field.degree
        cs = [Q(c) for c in coeffs]
        if len(cs) > d:
            raise InputError("coordinate vector longer than the field degree")
        cs += [Q(0)] * (d - len(cs))
        self.field = field
        self.coeffs = tuple(cs)

    def __repr__(self) -> str:
        return f"FieldElement({list(map(str, self.coeffs))})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction | None:
        return self.coeffs[0] if self.is_rational() else None

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElement) or other.field is not self.field:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __add__(self, other) -> "FieldElement":
        other = self.field._coerce(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other) -> "FieldElement":
        return self + (-self.field._coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return self.field._coerce(other) - self

    def __mul__(self, other) -> "FieldElement":
        other = self.field._coerce(other)
        prod = UniPoly(self.coeffs) * UniPoly(other.coeffs)
        return FieldElement(self.field, (prod % self.field.minpoly).coeffs)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        g, s, _ = _gcdex(UniPoly(self.coeffs), self.field.minpoly)
        if g.degree != 0:
            raise InputError("minimal polynomial is not irreducible")
        return FieldElement(self.field, (s.scale(1 / g.coeffs[0]) % self.field.minpoly).coeffs)

    def __truediv__(self, other) -> "FieldElement":
        return self * self.field._coerce(other).inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        return self.field._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def box_at(self, prec: int) -> Box:
        """Certified enclosure from the primitive element's box."""
        theta_box = self.field.theta.box_at(prec + 16)
        return box_polyval(self.coeffs, theta_box, prec + 16).outward(prec)

    def to_algebraic(self) -> AlgebraicNumber:
        return self.field.to_algebraic(self)

    def to_json(self) -> list[str]:
        return [rational_to_str(c) for c in self.coeffs]


def _gcdex(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    r0, r1 = a, b
    s0, s1 = UniPoly.const(1), UniPoly()
    t0, t1 = UniPoly(), UniPoly.const(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


class PresentedField:
    """Q(theta) with an exact power-basis presentation and a certified theta."""

    def __init__(self, minpoly: UniPoly, theta: AlgebraicNumber):
        if minpoly.degree < 1 or minpoly.lc != 1:
            raise InputError("presentation needs a monic minimal polynomial")
        self.minpoly = minpoly
        self.theta = theta
        self.degree = minpoly.degree
        self.generators: list[AlgebraicNumber] = []
        self.gen_coords: list[FieldElement] = []
        self.combo: list[int] = []
        self._minpoly_cache: dict = {}

    # -- construction ----------------------------------------------------------

    @classmethod
    def rationals(cls) -> "PresentedField":
        one = AlgebraicNumber.from_rational(1)
        f = cls(UniPoly((-1, 1)), one)
        return f

    @classmethod
    def of_element(cls, a: AlgebraicNumber) -> "PresentedField":
        m = a.minimal_polynomial()
        theta = _reroot(m, a)
        return cls(m, theta)

    def __repr__(self) -> str:
        return f"PresentedField(degree={self.degree}, minpoly={self.minpoly!r})"

    # -- element constructors -----------------------------------------------------

    def zero(self) -> FieldElement:
        return FieldElement(self, [])

    def one(self) -> FieldElement:
        return FieldElement(self, [Q(1)])

    def from_rational(self, c) -> FieldElement:
        return FieldElement(self, [Q(c)])

    def gen(self) -> FieldElement:
        """The class of Y, i.e. theta itself."""
        if self.degree == 1:
            return FieldElement(self, [-self.minpoly.coeffs[0]])
        return FieldElement(self, [0, 1])

    def element(self, coeffs) -> FieldElement:
        return FieldElement(self, coeffs)

    def _coerce(self, v) -> FieldElement:
        if isinstance(v, FieldElement):
            if v.field is not self:
                raise InputError("field elements from different presentations")
            return v
        if isinstance(v, (int, Fraction)):
            return self.from_rational(v)
        raise InputError(f"cannot coerce {type(v).__name__} into the field")

    # -- semantics ------------------------------------------------------------------

    def to_algebraic(self, elem: FieldElement) -> AlgebraicNumber:
        """The complex value of an element, as a certified AlgebraicNumber."""
        r = elem.to_rational()
        if r is not None:
            return AlgebraicNumber.from_rational(r)
        m = self.element_minpoly(elem)

        def rehint(p: int) -> Box:
            return elem.box_at(p)

        return _locate(m, elem.box_at(96), rehint)

    def element_minpoly(self, elem: FieldElement) -> UniPoly:
        """Minimal polynomial over Q of an element, by power linear algebra."""
        key = elem.coeffs
        hit = self._minpoly_cache.get(key)
        if hit is not None:
            return hit
        d = self.degree
        powers: list[tuple[Fraction, ...]] = []
        acc = self.one()
        for _ in range(d + 1):
            powers.append(acc.coeffs)
            acc = acc * elem
            dep = _first_dependence(powers)
            if dep is not None:
                m = UniPoly(dep).monic()
                self._minpoly_cache[key] = m
                return m
        raise InputError("element minimal polynomial not found (broken presentation)")

    def express(self, a: AlgebraicNumber) -> FieldElement | None:
        """Exact coordinates of an algebraic number, or None if not a member."""
        r = a.to_rational()
        if r is not None:
            return self.from_rational(r)
        ma = a.minimal_polynomial()
        if self.degree % ma.degree != 0:
            return None
        for u in self.roots_of(ma):
            ua = self.to_algebraic(u)
            if ua.equals(a):
                return u
        return None

    def roots_of(self, f: UniPoly) -> list[FieldElement]:
        """All roots of a squarefree rational polynomial that lie in the field."""
        if f.degree < 1:
            return []
        if self.degree == 1:
            return [self.from_rational(-g.coeffs[0]) for g, _ in factor_rational_poly(f)[1] if g.degree == 1]
        out = []
        for h in self.factor_over(f):
            if h.degree() == 1:
                c0, c1 = h.coeffs[0], h.coeffs[1]
                out.append(-c0 / c1)
        return out

    def factor_over(self, f: UniPoly) -> list["FPoly"]:
        """Trager factorization over the field of a squarefree rational polynomial."""
        fp = FPoly.from_rational_poly(self, f)
        s = 0
        while True:
            s += 1

            def norm_at(x0, s=s):
                return f.compose(UniPoly((x0, -s)))

            norm = resultant_in_x(self.minpoly, norm_at, self.degree * f.degree)
            if poly_gcd(norm, norm.derivative()).degree == 0:
                break
            if s > 40:
                raise PreconditionError("no squarefree Trager shift found; is f squarefree?")
        _, factors = factor_rational_poly(norm)
        out = []
        for n_i, _ in factors:
            shifted = FPoly.from_rational_poly(self, n_i).compose_linear(self.gen() * s, self.one())
            h = fp.gcd(shifted)
            if h.degree() >= 1:
                out.append(h.monic())
        return out

    # -- serialization -----------------------------------------------------------------

    def describe(self) -> dict:
        return {
            "degree": self.degree,
            "minpoly": [rational_to_str(c) for c in self.minpoly.coeffs],
            "theta": self.theta.to_json(),
        }


class FPoly:
    """Polynomial with FieldElement coefficients (ascending); Euclid-capable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PresentedField, coeffs: Sequence[FieldElement]):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def from_rational_poly(cls, field: PresentedField, f: UniPoly) -> "FPoly":
        return cls(field, [field.from_rational(c) for c in f.coeffs])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def monic(self) -> "FPoly":
        if self.is_zero():
            return self
        inv = self.coeffs[-1].inverse()
        return FPoly(self.field, [c * inv for c in self.coeffs])

    def __mul__(self, other: "FPoly") -> "FPoly":
        if self.is_zero() or other.is_zero():
            return FPoly(self.field, [])
        out = [self.field.zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return FPoly(self.field, out)

    def __add__(self, other: "FPoly") -> "FPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()
        return FPoly(
            self.field,
            [
                (self.coeffs[i] if i < len(self.coeffs) else z)
                + (other.coeffs[i] if i < len(other.coeffs) else z)
                for i in range(n)
            ],
        )

    def __sub__(self, other: "FPoly") -> "FPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()
        return FPoly(
            self.field,
            [
                (self.coeffs[i] if i < len(self.coeffs) else z)
                - (other.coeffs[i] if i < len(other.coeffs) else z)
                for i in range(n)
            ],
        )

    def rem(self, other: "FPoly") -> "FPoly":
        if other.is_zero():
            raise ZeroDivisionError("FPoly division by zero")
        rem = list(self.coeffs)
        db = other.degree()
        inv = other.coeffs[-1].inverse()
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] * inv
            if c.is_zero():
                continue
            for j, oc in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - c * oc
        return FPoly(self.field, rem[:db])

    def gcd(self, other: "FPoly") -> "FPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.rem(b)
        return a.monic() if not a.is_zero() else a

    def compose_linear(self, const_term: FieldElement, linear_coeff: FieldElement) -> "FPoly":
        """Substitute (linear_coeff * Z + const_term) for the variable."""
        z = FPoly(self.field, [const_term, linear_coeff])
        acc = FPoly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * z + FPoly(self.field, [c])
        return acc

    def eval_elem(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _first_dependence(rows: list[tuple[Fraction, ...]]) -> list[Fraction] | None:
    """Coefficients c with sum c_i * rows[i] = 0 and c_last = 1, if they exist."""
    n = len(rows)
    if n == 0:
        return None
    width = len(rows[0])
    # solve rows[:-1]^T x = rows[-1]
    mat = [[rows[i][j] for i in range(n - 1)] + [rows[-1][j]] for j in range(width)]
    sol = _solve_exact(mat, n - 1)
    if sol is None:
        return None
    return [-c for c in sol] + [Q(1)]


def _solve_exact(aug: list[list[Fraction]], nvars: int) -> list[Fraction] | None:
    """Gaussian elimination on an augmented matrix; None when inconsistent."""
    rows = [list(r) for r in aug]
    m = len(rows)
    piv_cols = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][nvars] != 0:
            return None
    sol = [Q(0)] * nvars
    for row_idx, c in enumerate(piv_cols):
        sol[c] = rows[row_idx][nvars]
    # verify free variables are genuinely free (any solution works); pick zeros
    return sol


def _reroot(minpoly: UniPoly, source: AlgebraicNumber) -> AlgebraicNumber:
    """An AlgebraicNumber equal to source but presented by its minimal polynomial."""
    for _ in range(200):
        try:
            return AlgebraicNumber(minpoly, source.box)
        except PreconditionError:
            source.refine(source.box.width / 16)
    raise PreconditionError("could not certify the minimal-polynomial presentation")


# ---------------------------------------------------------------------------
# field tower construction
# ---------------------------------------------------------------------------


def primitive_element(gens: Sequence[AlgebraicNumber]) -> PresentedField:
    """Present Q(gens) by one primitive element theta = sum(c_i * g_i).

    The c_i are small integers; every generator's exact coordinates in the
    power basis of theta are recorded on the returned field.
    """
    if not gens:
        raise InputError("primitive_element needs at least one generator")
    field = PresentedField.rationals()
    field.combo = []
    for g in gens:
        field = _adjoin(field, g)
    _verify_presentation(field, gens)
    return field


def _adjoin(field: PresentedField, g: AlgebraicNumber) -> PresentedField:
    mg = g.minimal_polynomial()
    if mg.degree == 1:
        field.generators.append(g)
        field.gen_coords.append(field.from_rational(-mg.coeffs[0]))
        field.combo = field.combo + [0]
        return field
    inside = field.express(g) if field.degree > 1 else None
    if inside is not None:
        field.generators.append(g)
        field.gen_coords.append(inside)
        field.combo = field.combo + [0]
        return field
    if field.degree == 1:
        new = PresentedField.of_element(g)
        new.generators = list(field.generators)
        new.gen_coords = [new.from_rational(c.to_rational()) for c in field.gen_coords]
        new.generators.append(g)
        new.gen_coords.append(new.gen())
        new.combo = [0] * len(field.combo) + [1]
        return new

    mt = field.minpoly
    for c in (1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 7, -7, 11, -11, 13, -13):
        comp = resultant_in_x(mt, lambda x0, c=c: mg.compose(UniPoly((x0, -c))), mt.degree * mg.degree)
        if poly_gcd(comp, comp.derivative()).degree != 0:
            continue
        # theta' = g + c * theta; comp is squarefree so Q(theta') = Q(theta, g)
        theta_new_val = g + c * field.theta
        m_new = theta_new_val.minimal_polynomial()
        theta_new = _reroot(m_new, theta_new_val)
        new = PresentedField(m_new, theta_new)
        # recover theta in the new presentation: the unique common root of
        # m_theta(Z) and m_g(theta' - c Z) over Q(theta') is Z = theta
        a = FPoly.from_rational_poly(new, mt)
        b_coeffs = [new.from_rational(co) for co in mg.coeffs]
        shifted = FPoly(new, b_coeffs).compose_linear(new.gen(), new.from_rational(-c))
        lin = a.gcd(shifted)
        if lin.degree() != 1:
            continue
        theta_old_in_new = -lin.coeffs[0] / lin.coeffs[1]
        g_in_new = new.gen() - c * theta_old_in_new
        new.generators = list(field.generators)
        new.gen_coords = [
            _subst(coord, theta_old_in_new, new) for coord in field.gen_coords
        ]
        new.generators.append(g)
        new.gen_coords.append(g_in_new)
        new.combo = [c * x for x in field.combo] + [1]
        return new
    raise PreconditionError("no squarefree primitive-element shift found")


def _subst(coord: FieldElement, theta_image: FieldElement, new: PresentedField) -> FieldElement:
    acc = new.zero()
    for co in reversed(coord.coeffs):
        acc = acc * theta_image + new.from_rational(co)
    return acc


def _verify_presentation(field: PresentedField, gens: Sequence[AlgebraicNumber]) -> None:
    if len(field.combo) != len(gens) or len(field.gen_coords) != len(gens):
        raise PreconditionError("presentation bookkeeping out of sync")
    if field.degree == 1:
        return  # all generators rational; theta = 1 independently of them
    acc = field.zero()
    for c, coord in zip(field.combo, field.gen_coords):
        acc = acc + c * coord
    if not (acc == field.gen()):
        raise PreconditionError("primitive element combination check failed")


# ---------------------------------------------------------------------------
# relative extensions: F-coordinates inside a bigger presented field
# ---------------------------------------------------------------------------


class RelativeExtension:
    """M as a vector space over a subfield F, with exact coordinate maps."""

    def __init__(self, M: PresentedField, F: PresentedField):
        if M.degree % F.degree != 0:
            raise PreconditionError("degrees rule out a subfield embedding")
        theta_f = M.express(F.theta) if F.degree > 1 else M.from_rational(1)
        if theta_f is None:
            raise PreconditionError("purported subfield does not embed")
        self.M = M
        self.F = F
        self.theta_f = theta_f
        self.rel_degree = M.degree // F.degree
        dM, dF, e = M.degree, F.degree, M.degree // F.degree
        # basis of M over Q: theta_f^t * theta_m^j, t < dF, j < e
        cols: list[tuple[Fraction, ...]] = []
        tm = M.gen()
        tf_pows = [M.one()]
        for _ in range(dF - 1):
            tf_pows.append(tf_pows[-1] * theta_f)
        tm_pows = [M.one()]
        for _ in range(e - 1):
            tm_pows.append(tm_pows[-1] * tm)
        for j in range(e):
            for t in range(dF):
                cols.append((tf_pows[t] * tm_pows[j]).coeffs)
        self._basis_cols = cols
        # invert the dM x dM change of basis once
        mat = [[cols[k][row] for k in range(dM)] for row in range(dM)]
        self._inverse = _invert_exact(mat)
        if self._inverse is None:
            raise PreconditionError("power products do not form a basis; embedding broken")

    def coords(self, elem: FieldElement) -> list[FieldElement]:
        """F-coordinates of an M-element in the basis theta_m^j, j < [M:F]."""
        if elem.field is not self.M:
            raise InputError("element does not live in the big field")
        dM, dF, e = self.M.degree, self.F.degree, self.rel_degree
        x = [
            sum((self._inverse[k][row] * elem.coeffs[row] for row in range(dM)), Q(0))
            for k in range(dM)
        ]
        out = []
        for j in range(e):
            out.append(FieldElement(self.F, x[j * dF : (j + 1) * dF]))
        return out

    def assemble(self, coords: list[FieldElement]) -> FieldElement:
        """Inverse of coords: rebuild the M-element."""
        tm = self.M.gen()
        acc = self.M.zero()
        for j, cf in enumerate(coords):
            lift = self.M.zero()
            tf_pow = self.M.one()
            for t, co in enumerate(cf.coeffs):
                lift = lift + co * tf_pow
                tf_pow = tf_pow * self.theta_f
            acc = acc + lift * tm**j
        return acc


def _invert_exact(mat: list[list[Fraction]]) -> list[list[Fraction]] | None:
    n = len(mat)
    aug = [list(row) + [Q(1) if i == j else Q(0) for j in range(n)] for i, row in enumerate(mat)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        r += 1
    return [row[n:] for row in aug]


def express_in_basis(field: PresentedField, a: AlgebraicNumber) -> list[Fraction] | None:
    """Exact power-basis coordinates of a over Q, or None when not a member."""
    elem = field.express(a)
    return list(elem.coeffs) if elem is not None else None
