"""Independent reference implementations used to validate the package.

Everything here recomputes results through a different code path than the
module under test: counting by per-point evaluation over term data, orbit
counting by explicit orbit-set construction, and socle coefficients by
Groebner-basis reduction in sympy.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from toricount.fan import Space
from toricount.ff import FieldElement, FieldSpec, enumerate_field
from toricount.poly import MultiPoly


def _eval_term(coeff: FieldElement, exps, point) -> FieldElement:
    acc = coeff
    for e, x in zip(exps, point):
        for _ in range(e):
            acc = acc * x
    return acc


def eval_poly(P: MultiPoly, point) -> FieldElement:
    total = P.domain.zero()
    for exps, coeff in P.as_dict().items():
        total = total + _eval_term(coeff, exps, point)
    return total


def naive_affine_count(P: MultiPoly, spec: FieldSpec) -> int:
    """Point-by-point count using only field-element multiplication."""
    count = 0
    for point in itertools.product(enumerate_field(spec), repeat=P.nvars):
        if eval_poly(P, point).is_zero:
            count += 1
    return count


def naive_power_sum(spec: FieldSpec, alpha: int) -> FieldElement:
    total = spec.zero()
    for x in enumerate_field(spec):
        term = spec.one()
        for _ in range(alpha):
            term = term * x
        total = total + term
    return total


def naive_toric_orbits(P: MultiPoly, space: Space, spec: FieldSpec) -> int:
    """Count orbits by building each orbit as an explicit frozenset of points."""
    G = space.grading
    elements = enumerate_field(spec)
    units = [e for e in elements if not e.is_zero]
    group = list(itertools.product(units, repeat=G.r))

    def act(mu, point):
        out = []
        for i, x in enumerate(point):
            scale = spec.one()
            for j, m in enumerate(mu):
                for _ in range(G.weights[i][j]):
                    scale = scale * m
            out.append(scale * x)
        return tuple(out)

    def exceptional(point):
        return any(all(point[i].is_zero for i in stratum) for stratum in space.exceptional.strata)

    orbits: set[frozenset] = set()
    for point in itertools.product(elements, repeat=G.rho):
        if exceptional(point):
            continue
        if not (P.is_zero or eval_poly(P, point).is_zero):
            continue
        orbits.add(frozenset(act(mu, point) for mu in group))
    return len(orbits)


def groebner_gamma(s: int, c: int, E: int | None = None) -> Fraction | None:
    """Socle coefficient of (5x+2v)^E v^(6s+4-E) via Groebner normal forms."""
    x, v = sympy.symbols("x v")
    if E is None:
        E = 5 * s + c + 1
    k = 6 * s + 4 - E
    if k < 0:
        return None
    basis = sympy.groebner(
        [x ** (3 * s + 3), (x + v) ** (2 * s + 2) * v ** (s + 1)], x, v, order="grevlex"
    )
    target = sympy.expand((5 * x + 2 * v) ** E * v ** k)
    fund = sympy.expand(x ** (3 * s + 2) * (x + v) ** (2 * s + 2) * v ** s)
    nf_t = basis.reduce(target)[1]
    nf_f = basis.reduce(fund)[1]
    pt = sympy.Poly(nf_t, x, v)
    pf = sympy.Poly(nf_f, x, v)
    ratios = set()
    td = dict(pt.terms())
    for mono, coeff in pf.terms():
        ratios.add(sympy.Rational(td.get(mono, sympy.Integer(0)), coeff))
    extra = set(td) - {m for m, _ in pf.terms()}
    assert not extra, f"target normal form has monomials outside the socle span: {extra}"
    assert len(ratios) == 1, f"normal forms are not proportional: {ratios}"
    r = ratios.pop()
    return Fraction(int(r.p), int(r.q))


def groebner_is_zero(poly_xv: MultiPoly, s: int) -> bool:
    """Ideal membership via Groebner reduction (independent of the linear algebra)."""
    x, v = sympy.symbols("x v")
    basis = sympy.groebner(
        [x ** (3 * s + 3), (x + v) ** (2 * s + 2) * v ** (s + 1)], x, v, order="grevlex"
    )
    expr = sympy.Integer(0)
    for (i, j), coeff in poly_xv.as_dict().items():
        fr = Fraction(coeff)
        expr += sympy.Rational(fr.numerator, fr.denominator) * x ** i * v ** j
    return basis.reduce(sympy.expand(expr))[1] == 0
