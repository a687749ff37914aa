"""Exact rational arithmetic in the graded rings A_s = Q[x, v]/(x^(3s+3), (x+v)^(2s+2) v^(s+1)).

Both relation generators have total degree 3s+3, so membership of a
homogeneous class in the ideal is a single exact rational linear system per
degree, solved with certificates: on membership the cofactor pair (p, q) with
c = x^(3s+3) p + (x+v)^(2s+2) v^(s+1) q is returned, on non-membership the
dimension the class adds to the span. The quotient is Artinian with its
one-dimensional socle in degree 6s+4, generated by the fundamental class
x^(3s+2) (x+v)^(2s+2) v^s.

``tsen_certificate`` packages the existence argument: the section class
(5x + 2v)^E is tested for non-vanishing, and (when the complementary power of
v is nonnegative) the socle coefficient gamma with

    (5x + 2v)^E * v^(6s+4-E)  =  gamma * x^(3s+2) (x+v)^(2s+2) v^s   (mod ideal)

is extracted exactly. gamma's sign and integrality are reported as data; the
suite documents where the positivity expectation fails.

Classes are plain bivariate polynomials (variables x = x0 and v = x1 of the
underlying representation); ``multiply`` and ``power`` never reduce — only
``is_zero`` / ``normal_form`` consult the relations. The third display
generator u = x + v is eliminated on input and available for output via
``display_xu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import Integer, Matrix, Rational

from .errors import InvalidParams, NotHomogeneous
from .poly import QQ, MultiPoly, multidegree, print_poly, standard_grading, substitute


def _frac(r) -> Fraction:
    return Fraction(int(r.p), int(r.q))


def _rat(f) -> Rational:
    f = Fraction(f)
    return Rational(f.numerator, f.denominator)


# --------------------------------------------------------------------------
# ring spec and classes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ChowRingSpec:
    """The ring Q[x, v]/(x^(3s+3), (x+v)^(2s+2) v^(s+1)) for one s >= 0."""

    s: int

    def __post_init__(self) -> None:
        if self.s < 0:
            raise InvalidParams(f"s must be >= 0, got {self.s}")

    @property
    def relation_degree(self) -> int:
        return 3 * self.s + 3

    @property
    def top_degree(self) -> int:
        return 6 * self.s + 4


def class_x() -> MultiPoly:
    return MultiPoly.variable(0, 2, QQ)


def class_v() -> MultiPoly:
    return MultiPoly.variable(1, 2, QQ)


def class_u() -> MultiPoly:
    return class_x() + class_v()


@lru_cache(maxsize=None)
def relations(spec: ChowRingSpec) -> tuple[MultiPoly, MultiPoly]:
    """(x^(3s+3), (x+v)^(2s+2) v^(s+1)) in expanded form."""
    s = spec.s
    x, v = class_x(), class_v()
    return (x ** (3 * s + 3), (x + v) ** (2 * s + 2) * v ** (s + 1))


@lru_cache(maxsize=None)
def fundamental_class(spec: ChowRingSpec) -> MultiPoly:
    """x^(3s+2) (x+v)^(2s+2) v^s — spans the socle in degree 6s+4."""
    s = spec.s
    x, v = class_x(), class_v()
    return x ** (3 * s + 2) * (x + v) ** (2 * s + 2) * v ** s


def hyperplane_class(d1: int, d2: int) -> MultiPoly:
    """The degree-1 class d1*x + d2*v (for (5,2): 5x + 2v = 3x + 2u)."""
    if d1 < 0 or d2 < 0 or (d1 == 0 and d2 == 0):
        raise InvalidParams(f"need (d1, d2) >= (0, 0) and not both zero, got ({d1}, {d2})")
    return MultiPoly.from_dict(2, QQ, {(1, 0): d1, (0, 1): d2})


def class_degree(c: MultiPoly) -> int | None:
    """Total degree of a homogeneous class; None for the zero class."""
    if c.nvars != 2 or c.domain is not QQ:
        raise InvalidParams("classes are bivariate polynomials over the rationals")
    if c.is_zero:
        return None
    return multidegree(c, standard_grading(2))[0]  # NotHomogeneous on mixed degrees


def multiply(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def power(a: MultiPoly, n: int) -> MultiPoly:
    if n < 0:
        raise InvalidParams(f"power must be >= 0, got {n}")
    return a ** n


def display_xv(c: MultiPoly) -> str:
    return print_poly(c, names=("x", "v"))


def display_xu(c: MultiPoly) -> str:
    """The same class written in x and u = x + v (substitute v = u - x)."""
    x = MultiPoly.variable(0, 2, QQ)
    u = MultiPoly.variable(1, 2, QQ)
    return print_poly(substitute(c, [x, u - x]), names=("x", "u"))


# --------------------------------------------------------------------------
# graded linear algebra
# --------------------------------------------------------------------------

def _vector(c: MultiPoly, degree: int) -> list[Rational]:
    """Coefficients of c in the degree-d basis x^d, x^(d-1)v, ..., v^d."""
    out = [Rational(0)] * (degree + 1)
    for (i, j), coeff in c.terms:
        if i + j != degree:
            raise NotHomogeneous(f"term x^{i}v^{j} is not of degree {degree}")
        out[j] = _rat(coeff)
    return out


def _from_vector(vec, degree: int) -> MultiPoly:
    mapping = {}
    for j, val in enumerate(vec):
        fr = _frac(Rational(val))
        if fr:
            mapping[(degree - j, j)] = fr
    return MultiPoly.from_dict(2, QQ, mapping)


@lru_cache(maxsize=None)
def _ideal_columns(spec: ChowRingSpec, degree: int) -> Matrix:
    """Columns: each relation times each monomial of degree d - (3s+3)."""
    k = degree - spec.relation_degree
    cols: list[list[Rational]] = []
    if k >= 0:
        x, v = class_x(), class_v()
        for g in relations(spec):
            for i in range(k + 1):
                m = x ** (k - i) * v ** i
                cols.append(_vector(g * m, degree))
    if not cols:
        return Matrix.zeros(degree + 1, 0)
    return Matrix([[col[row] for col in cols] for row in range(degree + 1)])


@dataclass(frozen=True)
class MembershipResult:
    """Certified verdict: cofactors on membership, added rank on failure."""

    in_ideal: bool
    degree: int | None
    cofactors: tuple[MultiPoly, MultiPoly] | None = None
    quotient_dim: int | None = None


def ideal_membership(c: MultiPoly, spec: ChowRingSpec) -> MembershipResult:
    """Exact membership of a homogeneous class in (x^(3s+3), (x+v)^(2s+2)v^(s+1)).

    Membership always comes with cofactors (p, q) reproducing c, including
    above the socle degree where the system is always solvable.
    """
    D = class_degree(c)
    zero2 = MultiPoly.zero(2, QQ)
    if D is None:
        return MembershipResult(in_ideal=True, degree=None, cofactors=(zero2, zero2))
    k = D - spec.relation_degree
    if k < 0:
        return MembershipResult(in_ideal=False, degree=D, quotient_dim=D + 1)
    A = _ideal_columns(spec, D)
    b = Matrix(_vector(c, D))
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        rank = A.rank()
        return MembershipResult(in_ideal=False, degree=D, quotient_dim=D + 1 - rank)
    sol = sol.xreplace({p: Integer(0) for p in params})
    m = k + 1
    p = _from_vector([sol[i] for i in range(m)], k)
    q = _from_vector([sol[m + i] for i in range(m)], k)
    return MembershipResult(in_ideal=True, degree=D, cofactors=(p, q))


def is_zero(c: MultiPoly, spec: ChowRingSpec) -> bool:
    return ideal_membership(c, spec).in_ideal


def check_cofactors(c: MultiPoly, spec: ChowRingSpec, result: MembershipResult) -> bool:
    """Recompute c from the certificate by exact multiplication."""
    if not result.in_ideal or result.cofactors is None:
        return False
    g1, g2 = relations(spec)
    p, q = result.cofactors
    return g1 * p + g2 * q == c


def normal_form(c: MultiPoly, spec: ChowRingSpec) -> MultiPoly:
    """Canonical representative: c reduced by the row space of the ideal's graded piece."""
    D = class_degree(c)
    if D is None or D < spec.relation_degree:
        return c
    A = _ideal_columns(spec, D)
    rref, pivots = A.T.rref()
    vec = Matrix([_vector(c, D)]).T
    for row_idx, col in enumerate(pivots):
        coeff = vec[col]
        if coeff != 0:
            for j in range(D + 1):
                vec[j] = vec[j] - coeff * rref[row_idx, j]
    return _from_vector([vec[j] for j in range(D + 1)], D)


def socle_dimension(spec: ChowRingSpec, degree: int | None = None) -> int:
    """Dimension of the degree-d graded piece of the quotient (default: top degree)."""
    D = spec.top_degree if degree is None else degree
    if D < 0:
        raise InvalidParams(f"degree must be >= 0, got {D}")
    if D < spec.relation_degree:
        return D + 1
    A = _ideal_columns(spec, D)
    return D + 1 - A.rank()


# --------------------------------------------------------------------------
# the existence certificate
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TsenCertificate:
    """Non-vanishing verdict for (5x+2v)^E in A_s plus the socle coefficient."""

    s: int
    c: int
    E: int
    default_E: bool
    nonzero: bool
    within_socle: bool
    gamma: Fraction | None
    gamma_positive: bool | None
    gamma_integral: bool | None
    equations: int
    unknowns: int
    socle_dim: int

    def to_dict(self) -> dict:
        gamma: int | str | None
        if self.gamma is None:
            gamma = None
        elif self.gamma.denominator == 1:
            gamma = int(self.gamma)
        else:
            gamma = str(self.gamma)
        return {
            "s": self.s,
            "c": self.c,
            "E": self.E,
            "default_E": self.default_E,
            "nonzero": self.nonzero,
            "within_socle": self.within_socle,
            "gamma": gamma,
            "gamma_positive": self.gamma_positive,
            "gamma_integral": self.gamma_integral,
            "equations": self.equations,
            "unknowns": self.unknowns,
            "socle_dim": self.socle_dim,
        }


def tsen_certificate(s: int, c: int, E_override: int | None = None) -> TsenCertificate:
    """Certify (5x+2v)^E != 0 in A_s and extract gamma from the socle.

    E defaults to 5s+c+1. gamma is defined by
    (5x+2v)^E * v^(6s+4-E) = gamma * fundamental_class (mod ideal) and is
    extracted whenever the v-exponent 6s+4-E is nonnegative, else None.
    """
    if s < 0 or c < 0:
        raise InvalidParams(f"need s >= 0 and c >= 0, got ({s}, {c})")
    E = 5 * s + c + 1 if E_override is None else E_override
    if E <= 0:
        raise InvalidParams(f"exponent E must be >= 1, got {E}")
    spec = ChowRingSpec(s)
    H = hyperplane_class(5, 2)
    HE = H ** E
    nonzero = not is_zero(HE, spec)
    gamma: Fraction | None = None
    k = spec.top_degree - E
    if k >= 0:
        target = HE * class_v() ** k
        gamma = _socle_coefficient(target, spec)
    return TsenCertificate(
        s=s,
        c=c,
        E=E,
        default_E=E_override is None,
        nonzero=nonzero,
        within_socle=E <= spec.top_degree,
        gamma=gamma,
        gamma_positive=None if gamma is None else gamma > 0,
        gamma_integral=None if gamma is None else gamma.denominator == 1,
        equations=E,
        unknowns=6 * s + 6,
        socle_dim=socle_dimension(spec),
    )


def _socle_coefficient(target: MultiPoly, spec: ChowRingSpec) -> Fraction:
    """The unique gamma with target = gamma * fundamental_class (mod ideal).

    Well defined because the top graded piece is one-dimensional and the
    fundamental class is not in the ideal; every solution of the augmented
    system shares the same gamma coordinate.
    """
    D = spec.top_degree
    if not target.is_zero and class_degree(target) != D:
        raise NotHomogeneous(f"socle extraction needs degree {D}")
    A = _ideal_columns(spec, D)
    fund = Matrix(_vector(fundamental_class(spec), D))
    augmented = A.row_join(fund)
    b = Matrix(_vector(target, D)) if not target.is_zero else Matrix.zeros(D + 1, 1)
    sol, params = augmented.gauss_jordan_solve(b)
    sol = sol.xreplace({p: Integer(0) for p in params})
    return _frac(Rational(sol[augmented.cols - 1]))


def min_section_degree(c: int, s_max: int) -> int | None:
    """Least s <= s_max whose certificate is nonzero, or None."""
    if c < 0:
        raise InvalidParams(f"c must be >= 0, got {c}")
    for s in range(max(0, s_max) + 1):
        if tsen_certificate(s, c).nonzero:
            return s
    return None


# --------------------------------------------------------------------------
# equation/unknown accounting
# --------------------------------------------------------------------------

#: variable multiplicities of the three monomial families of the strict
#: transform: (fixed factors, degree of the cubic/quartic part in x1..x3)
_FAMILIES = (
    ("x0^2*P3", ((0, 2),), 3),
    ("x0*x4*Q3", ((0, 1), (4, 1)), 3),
    ("x4*x5*Q4", ((4, 1), (5, 1)), 4),
)


def dimension_count(s: int, c: int, degree_vector: tuple[int, ...] | None = None) -> dict:
    """Unknown/equation accounting for coordinate sections of degree_vector.

    equations uses the honest per-family maximum T-degree (+1); the dict also
    carries the headline accounting (claimed_*) of 5s+c+1 equations against
    6s+6 unknowns for cross-reference.
    """
    if s < 0 or c < 0:
        raise InvalidParams(f"need s >= 0 and c >= 0, got ({s}, {c})")
    d = tuple(degree_vector) if degree_vector is not None else (s,) * 6
    if len(d) != 6 or any(x < 0 for x in d):
        raise InvalidParams(f"degree_vector needs 6 entries >= 0, got {d!r}")
    cubic_max = max(d[1], d[2], d[3])
    family_bounds = {}
    for name, fixed, part_degree in _FAMILIES:
        t = sum(d[i] * m for i, m in fixed) + part_degree * cubic_max
        family_bounds[name] = c + t
    equations = max(family_bounds.values()) + 1
    unknowns = sum(x + 1 for x in d)
    return {
        "equations": equations,
        "unknowns": unknowns,
        "slack": unknowns - equations,
        "family_degree_bounds": family_bounds,
        "claimed_equations": 5 * s + c + 1,
        "claimed_unknowns": 6 * s + 6,
        "degree_vector": list(d),
    }
