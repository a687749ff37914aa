"""Integer fan combinatorics and Cox multigradings.

A simplicial fan is stored as primitive integer rays plus index sets of
maximal cones. From the rays we derive the multigrading of the homogeneous
coordinate ring: the grading group is the cokernel of x -> (<n_i, x>)_i,
computed by Smith normal form; its free part gives one weight row per ray.
Primitive collections (minimal ray sets lying in no cone) describe the
exceptional locus removed before the torus quotient.

Weight matrices are only canonical up to unimodular column operations. We
normalize deterministically: Hermite normal form of the column lattice, then
a bounded search for the entrywise-nonnegative representative with smallest
entry sum, columns sorted in descending lexicographic order. Effective
gradings (all weights >= 0) are required by the counting theorems.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from .errors import (
    InvalidParams,
    NonEffectiveGrading,
    NonPrimitiveRay,
    NonSimplicialFan,
    TorsionClassGroup,
)

#: Primitive-collection search is subset enumeration; keep fans tiny.
MAX_RAYS = 16

#: Bound on column-combination coefficients in the nonnegative-representative search.
_NONNEG_SEARCH_BOUND = 6


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    """Simplicial fan: lattice dimension, primitive rays, maximal cones (ray index sets)."""

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @property
    def rho(self) -> int:
        return len(self.rays)


@dataclass(frozen=True)
class GradingData:
    """Multigrading of the coordinate ring: one weight row per variable."""

    rho: int
    r: int
    weights: tuple[tuple[int, ...], ...]  # rho rows, r entries each
    torsion: tuple[int, ...] = ()

    @property
    def is_effective(self) -> bool:
        return all(w >= 0 for row in self.weights for w in row)


@dataclass(frozen=True)
class ExceptionalSet:
    """Union of coordinate subspaces {x_i = 0 for i in S}, one S per stratum."""

    strata: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Space:
    """A quotient space presentation: grading + exceptional set (+ fan when available)."""

    name: str
    grading: GradingData
    exceptional: ExceptionalSet
    fan: Fan | None = None


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

def _gcd_all(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def validate(fan: Fan) -> Fan:
    """Check all fan invariants; returns the fan for chaining."""
    if fan.dim < 1:
        raise InvalidParams(f"lattice dimension must be >= 1, got {fan.dim}")
    if fan.rho > MAX_RAYS:
        raise InvalidParams(f"at most {MAX_RAYS} rays supported, got {fan.rho}")
    for i, ray in enumerate(fan.rays):
        if len(ray) != fan.dim:
            raise InvalidParams(f"ray {i} has length {len(ray)}, expected {fan.dim}")
        if _gcd_all(ray) != 1:
            raise NonPrimitiveRay(f"ray {i} = {ray} is zero or imprimitive")
    seen = set(fan.rays)
    if len(seen) != fan.rho:
        raise InvalidParams("duplicate rays")
    cone_sets = [frozenset(c) for c in fan.max_cones]
    for idx, cone in enumerate(fan.max_cones):
        if len(set(cone)) != len(cone):
            raise InvalidParams(f"cone {idx} repeats a ray index")
        for i in cone:
            if not 0 <= i < fan.rho:
                raise InvalidParams(f"cone {idx} references invalid ray index {i}")
        rows = [fan.rays[i] for i in cone]
        if Matrix(rows).rank() != len(cone):
            raise NonSimplicialFan(f"cone {idx} = {cone} has linearly dependent rays")
    for a, b in itertools.combinations(range(len(cone_sets)), 2):
        if cone_sets[a] <= cone_sets[b] or cone_sets[b] <= cone_sets[a]:
            raise InvalidParams(f"maximal cones {a} and {b} are nested")
    return fan


def make_fan(dim: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]) -> Fan:
    """Construct and validate a fan from plain sequences; cone order is canonicalized."""
    fan = Fan(
        dim=dim,
        rays=tuple(tuple(int(x) for x in ray) for ray in rays),
        max_cones=tuple(sorted(tuple(sorted(int(i) for i in cone)) for cone in max_cones)),
    )
    return validate(fan)


# --------------------------------------------------------------------------
# primitive collections and the exceptional set
# --------------------------------------------------------------------------

def primitive_collections(fan: Fan) -> tuple[tuple[int, ...], ...]:
    """All minimal ray-index sets contained in no single cone (sorted, deterministic)."""
    cones = [frozenset(c) for c in fan.max_cones]

    def in_some_cone(s: frozenset[int]) -> bool:
        return any(s <= c for c in cones)

    found: list[frozenset[int]] = []
    for size in range(1, fan.rho + 1):
        for combo in itertools.combinations(range(fan.rho), size):
            s = frozenset(combo)
            if any(f < s for f in found):
                continue  # not minimal
            if in_some_cone(s):
                continue
            # every proper subset of size-1 less is in some cone (downward closure
            # makes this equivalent to all proper subsets being in cones)
            if all(in_some_cone(s - {i}) for i in s):
                found.append(s)
    return tuple(sorted(tuple(sorted(s)) for s in found))


def exceptional_set(fan: Fan) -> ExceptionalSet:
    return ExceptionalSet(strata=primitive_collections(fan))


def count_exceptional(obj, spec_or_q) -> int:
    """#Z(F_q): inclusion-exclusion over the union of coordinate subspaces.

    `obj` may be a Fan, Space, or ExceptionalSet; `spec_or_q` a FieldSpec or int q.
    """
    strata, rho = _strata_and_rho(obj)
    q = spec_or_q if isinstance(spec_or_q, int) else spec_or_q.q
    return _union_subspace_count(strata, rho, q)


def _strata_and_rho(obj) -> tuple[tuple[tuple[int, ...], ...], int]:
    if isinstance(obj, Fan):
        return exceptional_set(obj).strata, obj.rho
    if isinstance(obj, Space):
        return obj.exceptional.strata, obj.grading.rho
    raise InvalidParams(f"expected Fan or Space, got {type(obj).__name__}")


def _union_subspace_count(strata: Sequence[Sequence[int]], rho: int, q: int) -> int:
    if len(strata) > 20:
        raise InvalidParams("too many exceptional strata for inclusion-exclusion")
    total = 0
    for k in range(1, len(strata) + 1):
        for combo in itertools.combinations(strata, k):
            union = set().union(*combo)
            total += (-1) ** (k + 1) * q ** (rho - len(union))
    return total


# --------------------------------------------------------------------------
# grading derivation (Smith normal form of the ray relation)
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def grading_from_fan(fan: Fan, require_free: bool = True) -> GradingData:
    """Cokernel of x -> (<n_i, x>)_i as a weight matrix, canonically normalized.

    The free part of the cokernel has rank r = rho - rank(rays); row i of the
    returned matrix is the class of the i-th coordinate. Invariant factors > 1
    are reported in `torsion` (or raised when `require_free`).
    """
    validate(fan)
    N = Matrix([list(ray) for ray in fan.rays])  # rho x d
    D, U, V = smith_normal_decomp(N)
    # sanity: exact decomposition with unimodular transforms
    assert (U * N * V - D).is_zero_matrix
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [D[i, i] for i in range(min(D.shape))]
    rank = sum(1 for d in diag if d != 0)
    torsion = tuple(int(abs(d)) for d in diag if d != 0 and abs(d) != 1)
    if torsion and require_free:
        raise TorsionClassGroup(
            f"grading group has invariant factors {torsion}; free grading required"
        )
    rho = fan.rho
    r = rho - rank
    if r == 0:
        return GradingData(rho=rho, r=0, weights=tuple(() for _ in range(rho)), torsion=torsion)
    W = U[rank:, :].T  # rho x r; row i = free-part coordinates of [e_i]
    W = _normalize_weights(W)
    weights = tuple(tuple(int(W[i, j]) for j in range(r)) for i in range(rho))
    return GradingData(rho=rho, r=r, weights=weights, torsion=torsion)


def _normalize_weights(W: Matrix) -> Matrix:
    """Deterministic nonnegative representative of the column lattice of W.

    Candidate columns are small integer combinations of the HNF basis; we pick
    the first unimodular r-subset in (entry-sum, lex) order and sort the chosen
    columns in descending lexicographic order.
    """
    rho, r = W.shape
    H = hermite_normal_form(W)
    if H.shape[1] != r:
        raise InvalidParams("weight matrix does not have full column rank")
    candidates: list[tuple[tuple[int, ...], tuple[int, ...]]] = []  # (column, coeffs)
    seen: set[tuple[int, ...]] = set()
    for bound in range(1, _NONNEG_SEARCH_BOUND + 1):
        for t in itertools.product(range(-bound, bound + 1), repeat=r):
            if max((abs(x) for x in t), default=0) != bound:
                continue  # only new shell
            col = H * Matrix(r, 1, list(t))
            vec = tuple(int(col[i]) for i in range(rho))
            if vec in seen or any(x < 0 for x in vec) or all(x == 0 for x in vec):
                continue
            seen.add(vec)
            candidates.append((vec, t))
        if len(candidates) >= 4 * r + 8 and bound >= 2:
            break
    candidates.sort(key=lambda cv: (sum(cv[0]), cv[0]))
    candidates = candidates[:60]
    for combo in itertools.combinations(candidates, r):
        T = Matrix([list(cv[1]) for cv in combo]).T
        if abs(T.det()) == 1:
            cols = sorted((cv[0] for cv in combo), reverse=True)
            return Matrix([list(c) for c in cols]).T
    raise NonEffectiveGrading(
        f"no nonnegative unimodular representative found; HNF basis = {H.tolist()}"
    )


def unimodular_column_equivalent(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> bool:
    """True iff the two integer matrices have the same column lattice."""
    MA, MB = Matrix([list(r) for r in A]), Matrix([list(r) for r in B])
    if MA.shape != MB.shape:
        return False
    return hermite_normal_form(MA) == hermite_normal_form(MB)


# --------------------------------------------------------------------------
# builtin spaces
# --------------------------------------------------------------------------

def projective_fan(d: int) -> Fan:
    """P^d: rays n0 = -(e1+...+ed), ni = ei; maximal cones = all d-subsets."""
    if d < 1:
        raise InvalidParams(f"projective dimension must be >= 1, got {d}")
    rays = [tuple(-1 for _ in range(d))] + [
        tuple(1 if j == i else 0 for j in range(d)) for i in range(d)
    ]
    cones = [tuple(sorted(set(range(d + 1)) - {i})) for i in range(d + 1)]
    return make_fan(d, rays, cones)


def blowup_p2_fan() -> Fan:
    """P^2 blown up at the torus-fixed point of <n1, n2>; n3 = n1 + n2."""
    rays = [(-1, -1), (1, 0), (0, 1), (1, 1)]
    cones = [(0, 1), (0, 2), (1, 3), (2, 3)]
    return make_fan(2, rays, cones)


def blowup_p4_line_fan() -> Fan:
    """P^4 blown up along the line {x1 = x2 = x3 = 0}; n5 = e1 + e2 + e3."""
    rays = [
        (-1, -1, -1, -1),
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 0, 1),
        (1, 1, 1, 0),
    ]
    # P^4 cones not containing {1,2,3}, plus the star subdivision of the two that do
    cones = [
        (0, 1, 2, 4),
        (0, 1, 3, 4),
        (0, 2, 3, 4),
        (0, 2, 3, 5),
        (0, 1, 3, 5),
        (0, 1, 2, 5),
        (2, 3, 4, 5),
        (1, 3, 4, 5),
        (1, 2, 4, 5),
    ]
    return make_fan(4, rays, cones)


def weighted_space(*weights: int) -> Space:
    """Weighted projective space P(a_0..a_d), grading-first (no ray arithmetic).

    deg x_i = a_i, rank-1 grading; exceptional set = {origin}.
    """
    if len(weights) < 2 or any(a < 1 for a in weights):
        raise InvalidParams(f"weights must be >= 1 integers, got {weights}")
    rho = len(weights)
    grading = GradingData(rho=rho, r=1, weights=tuple((int(a),) for a in weights))
    return Space(
        name=f"weighted({','.join(str(a) for a in weights)})",
        grading=grading,
        exceptional=ExceptionalSet(strata=(tuple(range(rho)),)),
        fan=None,
    )


def space_from_fan(fan: Fan, name: str = "") -> Space:
    return Space(
        name=name or f"fan(dim={fan.dim},rho={fan.rho})",
        grading=grading_from_fan(fan),
        exceptional=exceptional_set(fan),
        fan=fan,
    )


_BUILTIN_RE = re.compile(r"^([a-z_0-9]+)\s*(?:\(\s*([-0-9,\s]*)\s*\))?$")


def builtin(name: str) -> Space:
    """Builtin space by name: projective(d), weighted(a0,...,ad), blowup_p2, blowup_p4_line."""
    m = _BUILTIN_RE.match(name.strip())
    if not m:
        raise InvalidParams(f"unrecognized space name: {name!r}")
    head, args_str = m.group(1), m.group(2)
    args = [int(x) for x in args_str.split(",")] if args_str else []
    if head == "projective":
        if len(args) != 1:
            raise InvalidParams("projective(d) takes exactly one parameter")
        return space_from_fan(projective_fan(args[0]), name=f"projective({args[0]})")
    if head == "weighted":
        return weighted_space(*args)
    if head == "blowup_p2":
        if args:
            raise InvalidParams("blowup_p2 takes no parameters")
        return space_from_fan(blowup_p2_fan(), name="blowup_p2")
    if head == "blowup_p4_line":
        if args:
            raise InvalidParams("blowup_p4_line takes no parameters")
        return space_from_fan(blowup_p4_line_fan(), name="blowup_p4_line")
    raise InvalidParams(f"unknown builtin space: {name!r}")


BUILTIN_TEMPLATES = ("projective(d)", "weighted(a0,...,ad)", "blowup_p2", "blowup_p4_line")


# --------------------------------------------------------------------------
# fan file format
# --------------------------------------------------------------------------

def parse_fan_text(text: str) -> Fan:
    """Plain-text fan: `dim d`, `ray a1 .. ad`, `cone i1 .. ik`, `#` comments."""
    dim: int | None = None
    rays: list[tuple[int, ...]] = []
    cones: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, rest = parts[0], parts[1:]
        try:
            values = [int(x) for x in rest]
        except ValueError as exc:
            raise InvalidParams(f"line {lineno}: non-integer field in {raw!r}") from exc
        if kind == "dim":
            if dim is not None or len(values) != 1:
                raise InvalidParams(f"line {lineno}: bad or repeated dim line")
            dim = values[0]
        elif kind == "ray":
            rays.append(tuple(values))
        elif kind == "cone":
            cones.append(tuple(values))
        else:
            raise InvalidParams(f"line {lineno}: unknown directive {kind!r}")
    if dim is None:
        raise InvalidParams("missing `dim` line")
    return make_fan(dim, rays, cones)


def fan_to_text(fan: Fan) -> str:
    lines = [f"dim {fan.dim}"]
    lines += ["ray " + " ".join(str(x) for x in ray) for ray in fan.rays]
    lines += ["cone " + " ".join(str(i) for i in cone) for cone in fan.max_cones]
    return "\n".join(lines) + "\n"
