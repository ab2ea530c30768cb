"""Linear algebra over presented number fields.

Ranks, relative linear dimension ldim_F(A|B), linear-disjointness with
explicit witnesses, extraction of E-linear dependences, and the bounded-height
certified search for linear relations among refinable complex enclosures.

Every rank/nullspace question routes through one exact elimination routine
parameterized by the field's arithmetic; entries are FieldElements with exact
zero tests, so ranks are theorems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .algebraic import AlgebraicNumber
from .boxes import Box
from .enclosures import Enclosure
from .errors import InputError, PreconditionError, Undecided
from .fields import FieldElement, PresentedField, RelativeExtension, primitive_element

Q = Fraction

MAX_COMPOSITUM_DEGREE = 64


# ---------------------------------------------------------------------------
# the one elimination kernel
# ---------------------------------------------------------------------------


def exact_rref(rows: list[list[FieldElement]], field: PresentedField) -> tuple[list[list[FieldElement]], list[int]]:
    """Reduced row echelon form over the field; returns (rref, pivot columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    if any(len(r) != ncols for r in mat):
        raise InputError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if not mat[i][c].is_zero()), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [vi - f * vr for vi, vr in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def exact_rank(rows: list[list[FieldElement]], field: PresentedField) -> int:
    return len(exact_rref(rows, field)[1])


def nullspace(rows: list[list[FieldElement]], field: PresentedField, ncols: int) -> list[list[FieldElement]]:
    """Basis of the right kernel of the matrix (rows of length ncols)."""
    rref, pivots = exact_rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero()] * ncols
        vec[fc] = field.one()
        for ri, pc in enumerate(pivots):
            vec[pc] = -rref[ri][fc]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# working extensions
# ---------------------------------------------------------------------------


@dataclass
class WorkingExtension:
    """Compositum M of a base field and a batch of algebraic numbers."""

    M: PresentedField
    base: PresentedField
    rel: RelativeExtension
    element_coords: list[FieldElement]  # coordinates of the batch inside M

    def f_coords(self, idx: int) -> list[FieldElement]:
        return self.rel.coords(self.element_coords[idx])


def build_working_extension(field: PresentedField, elements: Sequence[AlgebraicNumber]) -> WorkingExtension:
    gens = [field.theta] + list(elements)
    M = primitive_element(gens)
    if M.degree > MAX_COMPOSITUM_DEGREE:
        raise PreconditionError(
            f"working extension degree {M.degree} exceeds the desk-scale cap {MAX_COMPOSITUM_DEGREE}"
        )
    rel = RelativeExtension(M, field)
    return WorkingExtension(M=M, base=field, rel=rel, element_coords=M.gen_coords[1:])


# ---------------------------------------------------------------------------
# rank / ldim
# ---------------------------------------------------------------------------


def rank_over(field: PresentedField, vectors: Sequence[Sequence[AlgebraicNumber]]) -> int:
    """Exact rank over the field of tuples of algebraic numbers."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 0
    width = len(vectors[0])
    if any(len(v) != width for v in vectors):
        raise InputError("vectors of differing lengths")
    flat = [x for v in vectors for x in v]
    ext = build_working_extension(field, flat)
    rows = []
    k = 0
    for v in vectors:
        row: list[FieldElement] = []
        for _ in v:
            row.extend(ext.f_coords(k))
            k += 1
        rows.append(row)
    return exact_rank(rows, field)


def ldim(field: PresentedField, A: Sequence[AlgebraicNumber], B: Sequence[AlgebraicNumber] = ()) -> int:
    """l.dim_field(A | B) = rank(A u B) - rank(B), computed in one extension."""
    A, B = list(A), list(B)
    if not A:
        return 0
    ext = build_working_extension(field, A + B)
    rows_ab = [ext.f_coords(i) for i in range(len(A) + len(B))]
    rows_b = rows_ab[len(A) :]
    return exact_rank(rows_ab, field) - exact_rank(rows_b, field)


# ---------------------------------------------------------------------------
# linear disjointness
# ---------------------------------------------------------------------------


@dataclass
class DisjointnessWitness:
    """An E-independent tuple of F-elements with an explicit L-dependence."""

    elements: list[AlgebraicNumber]
    coefficients: list[FieldElement]  # over the L-side field, not all zero

    def to_json(self) -> dict:
        return {
            "elements": [e.to_json() for e in self.elements],
            "coefficients": [c.to_json() for c in self.coefficients],
        }


@dataclass
class DisjointnessReport:
    disjoint: bool
    deg_F_over_E: int
    rank_over_L: int
    witness: DisjointnessWitness | None


def linearly_disjoint(
    E: PresentedField, F_gens: Sequence[AlgebraicNumber], L_gens: Sequence[AlgebraicNumber]
) -> DisjointnessReport:
    """Is Q(E, F_gens) linearly disjoint from Q(E, L_gens) over E?

    Decided by comparing [F:E] with the L-rank of the E-power-basis of F
    inside the compositum; a failure comes with an explicit dependence.
    """
    F_field = primitive_element([E.theta] + list(F_gens))
    L_field = primitive_element([E.theta] + list(L_gens))
    if F_field.degree % E.degree or L_field.degree % E.degree:
        raise PreconditionError("E is not a subfield of both sides")
    d_fe = F_field.degree // E.degree
    M = primitive_element([E.theta, F_field.theta, L_field.theta])
    if M.degree > MAX_COMPOSITUM_DEGREE:
        raise PreconditionError("compositum exceeds the desk-scale degree cap")
    rel = RelativeExtension(M, L_field)
    theta_f_in_M = M.gen_coords[1]
    powers = [M.one()]
    for _ in range(d_fe - 1):
        powers.append(powers[-1] * theta_f_in_M)
    rows = [rel.coords(p) for p in powers]
    rank = exact_rank(rows, L_field)
    if rank == d_fe:
        return DisjointnessReport(True, d_fe, rank, None)
    kernel = nullspace([list(col) for col in zip(*rows)], L_field, len(rows))
    coeffs = kernel[0]
    # exact re-check inside the compositum: sum c_j * theta_F^j = 0
    total = M.zero()
    theta_l_in_M = M.gen_coords[2]
    for c, p in zip(coeffs, powers):
        lift = M.zero()
        tpow = M.one()
        for co in c.coeffs:
            lift = lift + co * tpow
            tpow = tpow * theta_l_in_M
        total = total + lift * p
    if not total.is_zero():
        raise PreconditionError("dependence reconstruction failed; presentation bug")
    witness = DisjointnessWitness(
        elements=[F_field.to_algebraic(F_field.gen() ** j) for j in range(d_fe)],
        coefficients=coeffs,
    )
    return DisjointnessReport(False, d_fe, rank, witness)


def find_E_dependence(E: PresentedField, elements: Sequence[AlgebraicNumber]) -> list[Fraction] | None:
    """Nonzero E-coefficient vector annihilating the elements, else None.

    Coefficients are returned as power-basis coordinate lists when E is not Q;
    for rational E they collapse to plain Fractions.
    """
    vec = find_E_dependence_elements(E, elements)
    if vec is None:
        return None
    if E.degree == 1:
        return [c.coeffs[0] for c in vec]
    raise InputError("rational-coefficient view requires E = Q; use find_E_dependence_elements")


def find_E_dependence_elements(
    E: PresentedField, elements: Sequence[AlgebraicNumber]
) -> list[FieldElement] | None:
    elements = list(elements)
    if not elements:
        return None
    ext = build_working_extension(E, elements)
    cols = [ext.f_coords(i) for i in range(len(elements))]
    rows = [list(r) for r in zip(*cols)]
    kernel = nullspace(rows, E, len(elements))
    if not kernel:
        return None
    vec = kernel[0]
    # exact annihilation re-check in the compositum
    total = ext.M.zero()
    theta_e = ext.rel.theta_f
    for c, idx in zip(vec, range(len(elements))):
        lift = ext.M.zero()
        tpow = ext.M.one()
        for co in c.coeffs:
            lift = lift + co * tpow
            tpow = tpow * theta_e
        total = total + lift * ext.element_coords[idx]
    if not total.is_zero():
        raise PreconditionError("dependence failed exact re-check; presentation bug")
    return vec


# ---------------------------------------------------------------------------
# bounded-height relation search over refinable enclosures
# ---------------------------------------------------------------------------


@dataclass
class RelationReport:
    verdict: str  # "verified" | "relation-found" | "undecided"
    coefficients: list[Fraction] | None = None
    height: int = 0
    combinations_checked: int = 0

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "height": self.height, "checked": self.combinations_checked}
        if self.coefficients is not None:
            out["coefficients"] = [str(c) for c in self.coefficients]
        return out


def _boxer(value):
    if isinstance(value, AlgebraicNumber) or isinstance(value, FieldElement):
        return value.box_at
    if isinstance(value, Enclosure):
        return value.box
    if isinstance(value, (int, Fraction)):
        return lambda prec: Box.point(Q(value))
    raise InputError(f"value of type {type(value).__name__} is not a refinable enclosure")


def _exact_value(value) -> AlgebraicNumber | None:
    if isinstance(value, AlgebraicNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return AlgebraicNumber.from_rational(value)
    if isinstance(value, FieldElement):
        return value.to_algebraic()
    if isinstance(value, Enclosure):
        r = value.exact_rational()
        if r is not None and r[1] == 0:
            return AlgebraicNumber.from_rational(r[0])
    return None

_SEARCH_BUDGET = 8_000_000


def _bounded_rationals(height: int) -> list[Fraction]:
    """All reduced p/q with |p| <= height and 1 <= q <= height, plus zero."""
    out = {Q(0)}
    for q in range(1, height + 1):
        for p in range(1, height + 1):
            if gcd(p, q) == 1:
                out.add(Q(p, q))
                out.add(Q(-p, q))
    return sorted(out)


def no_small_linear_relation(
    values: Sequence, height: int, field: PresentedField | None = None
) -> RelationReport:
    """Certified bounded-height search for a linear relation among enclosures.

    Coefficient tuples range over all rationals p/q with |p| <= height and
    q <= height (the field argument must present Q; richer coefficient fields
    are out of scope for the exhaustive search).

    verified: every nonzero candidate's enclosure excludes zero -- a theorem.
    relation-found: an exact confirmation succeeded; coefficients returned.
    undecided: the precision budget ran out on some candidate first.
    """
    if field is not None and field.degree != 1:
        raise InputError("bounded-height relation search is over Q coefficients")
    values = list(values)
    n = len(values)
    if height < 1:
        raise InputError("height must be positive")
    if n == 0:
        return RelationReport("verified", height=height)
    coeff_pool = _bounded_rationals(height)
    total_combos = len(coeff_pool) ** n - 1
    if total_combos > _SEARCH_BUDGET:
        raise Undecided("bounded-height search space exceeds the budget")
    boxers = [_boxer(v) for v in values]

    # rigorous float prescreen: clear a combo only when the float value beats a
    # conservative bound covering box widths, float conversion and dot rounding
    prec0 = 192
    mids = []
    rads = []
    for b in boxers:
        box = b(prec0)
        mre, mim = box.mid()
        fr, fi = float(mre), float(mim)
        err = abs(Q(fr) - mre) + abs(Q(fi) - mim) + box.re.width / 2 + box.im.width / 2
        mids.append((fr, fi))
        rads.append(float(err) * (1 + 2.0**-30) + 1e-290)
    mr = np.array([m[0] for m in mids])
    mi = np.array([m[1] for m in mids])
    slack = np.array(rads) + (np.abs(mr) + np.abs(mi)) * 2.0**-40

    pool_f = np.array([float(c) for c in coeff_pool])
    pool_n = len(coeff_pool)
    zero_idx = coeff_pool.index(Q(0))
    all_zero = (zero_idx,) * n
    suspects: list[tuple[int, ...]] = []
    checked = 0
    # chunk over all but the last axis to bound memory
    head_shape = (pool_n,) * (n - 1)
    tail = np.arange(pool_n)
    for head in np.ndindex(head_shape) if n > 1 else [()]:
        cf = np.empty((pool_n, n))
        for j, hidx in enumerate(head):
            cf[:, j] = pool_f[hidx]
        cf[:, n - 1] = pool_f[tail]
        s_re = cf @ mr
        s_im = cf @ mi
        bound = np.abs(cf) @ slack + 1e-280
        sus = (s_re * s_re + s_im * s_im) <= (16.0 * bound * bound)
        checked += pool_n
        for t in np.nonzero(sus)[0]:
            combo = tuple(head) + (int(t),)
            if combo != all_zero:
                suspects.append(combo)

    exact_vals = [_exact_value(v) for v in values]
    all_exact = all(v is not None for v in exact_vals)

    any_undecided = False
    for combo in suspects:
        cs = [coeff_pool[k] for k in combo]
        cleared = False
        for prec in (192, 384, 768):
            box_total = Box.point(0)
            for c, b in zip(cs, boxers):
                if c:
                    box_total = box_total + b(prec) * Box.point(c)
            if not box_total.contains_zero():
                cleared = True
                break
        if cleared:
            continue
        if all_exact:
            alg_total = AlgebraicNumber.from_rational(0)
            for c, v in zip(cs, exact_vals):
                if c:
                    alg_total = alg_total + v * c
            if alg_total.is_zero():
                return RelationReport(
                    "relation-found", coefficients=cs, height=height, combinations_checked=checked
                )
            continue  # exactly nonzero even though the enclosure was tight
        any_undecided = True
    if any_undecided:
        return RelationReport("undecided", height=height, combinations_checked=checked)
    return RelationReport("verified", height=height, combinations_checked=checked)
