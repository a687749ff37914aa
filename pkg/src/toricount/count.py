"""Exhaustive exact point counting and congruence verdicts.

Counts are exact Python integers. The affine kernel enumerates F_q^rho in
odometer order (x0 most significant, field elements in enumeration order) and
is vectorized two ways: prime fields reduce products mod p on int64 blocks;
small extension fields (q <= 256) use precomputed add/mul index tables. A pure
Python path serves as oracle and fallback. Results are independent of the
block partitioning, which `block_vars` exposes for testing.

Congruence checks returned as :class:`CongruenceReport`:

* ``check_cw``       - N ≡ 0 (mod p) when some degree bound d_j < a_j.
* ``check_cw_projective`` - #X(F_q) ≡ 1 (mod p) for projective hypersurfaces.
* ``check_ax``       - q^mu | N with mu from the grading.
* ``check_esnault``  - quotient count of the blown-up quintic ≡ 1 (mod q).

The degree hypotheses consume componentwise degree *bounds*, so inhomogeneous
inputs (e.g. y^2 - P(x) under a weighted grading) are accepted; exact
homogeneity is enforced only where orbits must be well defined (the toric
quotient and orbit counts).
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import quintic as quintic_mod
from .errors import (
    CapExceeded,
    FieldMismatch,
    HypothesisNotMet,
    InvalidParams,
    NonEffectiveGrading,
    NonIntegralQuotient,
    TorsionClassGroup,
)
from .fan import Fan, GradingData, Space, builtin, grading_from_fan, space_from_fan
from .ff import (
    FieldSpec,
    arithmetic_tables,
    enumerate_field,
    power_index_table,
    power_mod_table,
)
from .poly import (
    MultiPoly,
    ax_exponent,
    classical_ax_exponent,
    degree_bounds,
    multidegree,
    standard_grading,
    total_generator_degree,
)

DEFAULT_WORK_CAP = 10 ** 9
_WORK_CAP_ENV = "TORICOUNT_WORK_CAP"

#: target suffix-block size for the vectorized kernels
_BLOCK_TARGET = 1 << 20

#: orbit enumeration materializes solution points; keep the full box modest
_ORBIT_POINT_CAP = 1 << 22


def effective_work_cap(work_cap: int | None = None) -> int:
    if work_cap is not None:
        return work_cap
    env = os.environ.get(_WORK_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidParams(f"bad {_WORK_CAP_ENV} value {env!r}") from exc
    return DEFAULT_WORK_CAP


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

@dataclass
class CongruenceReport:
    """Outcome of one congruence check; `residue` is the checked count mod `modulus`."""

    kind: str
    q: int
    p: int
    f: int
    n_affine: int
    modulus: int
    residue: int
    passed: bool
    n_exceptional: int | None = None
    n_toric: int | None = None
    mu: int | None = None
    mu_classical: int | None = None
    ax_pass: bool | None = None
    elapsed: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        out: dict = {
            "kind": self.kind,
            "q": self.q,
            "p": self.p,
            "f": self.f,
            "n_affine": self.n_affine,
        }
        if self.n_exceptional is not None:
            out["n_exceptional"] = self.n_exceptional
        if self.n_toric is not None:
            out["n_toric"] = self.n_toric
        out["modulus"] = self.modulus
        out["residue"] = self.residue
        out["pass"] = self.passed
        if self.mu is not None:
            out["mu"] = self.mu
        if self.mu_classical is not None:
            out["mu_classical"] = self.mu_classical
        if self.ax_pass is not None:
            out["ax_pass"] = self.ax_pass
        if include_timing:
            out["timing"] = {"elapsed_s": self.elapsed}
        return out

    CSV_FIELDS = (
        "kind", "q", "p", "f", "n_affine", "n_exceptional", "n_toric",
        "modulus", "residue", "pass", "mu", "mu_classical", "ax_pass",
    )

    def to_csv_row(self) -> list[str]:
        d = self.to_dict()
        row = []
        for key in self.CSV_FIELDS:
            v = d.get(key)
            row.append("" if v is None else str(v).lower() if isinstance(v, bool) else str(v))
        return row


# --------------------------------------------------------------------------
# space / grading coercion
# --------------------------------------------------------------------------

def as_space(obj) -> Space:
    if isinstance(obj, Space):
        return obj
    if isinstance(obj, Fan):
        return space_from_fan(obj)
    if isinstance(obj, str):
        return builtin(obj)
    raise InvalidParams(f"expected a Space or Fan, got {type(obj).__name__}")


def as_grading(obj) -> GradingData:
    if isinstance(obj, GradingData):
        return obj
    if isinstance(obj, Space):
        return obj.grading
    if isinstance(obj, Fan):
        return grading_from_fan(obj)
    if isinstance(obj, str):
        return builtin(obj).grading
    raise InvalidParams(f"expected a grading-like object, got {type(obj).__name__}")


# --------------------------------------------------------------------------
# the affine counting kernel
# --------------------------------------------------------------------------

def _check_poly_field(P: MultiPoly, spec: FieldSpec) -> None:
    if P.domain != spec:
        raise FieldMismatch(
            f"polynomial over {getattr(P.domain, 'name', P.domain)!s}, counting over {spec.name}"
        )


def _choose_block_vars(q: int, rho: int, block_vars: int | None) -> int:
    if block_vars is not None:
        if not 0 <= block_vars <= rho:
            raise InvalidParams(f"block_vars must be in [0, {rho}]")
        return block_vars
    k = 0
    while k < rho and q ** (rho - k) > _BLOCK_TARGET:
        k += 1
    return k


def _suffix_value_arrays(q: int, m: int) -> list[np.ndarray]:
    """Value of each of the m suffix variables along the block (first var most significant)."""
    n = q ** m
    base = np.arange(n, dtype=np.int64)
    return [(base // q ** (m - 1 - j)) % q for j in range(m)]


def affine_count(
    P: MultiPoly,
    spec: FieldSpec,
    *,
    method: str = "auto",
    work_cap: int | None = None,
    block_vars: int | None = None,
) -> int:
    """Exact #{x in F_q^rho : P(x) = 0}; deterministic, partition independent."""
    _check_poly_field(P, spec)
    rho = P.nvars
    q = spec.q
    cap = effective_work_cap(work_cap)
    points = q ** rho
    if points > cap:
        raise CapExceeded(f"{q}^{rho} = {points} evaluations exceed the work cap {cap}")
    if rho == 0:
        return 1 if P.is_zero else 0
    if P.is_zero:
        return points
    if method == "auto":
        if spec.f == 1:
            method = "modp"
        elif q <= 256:
            method = "table"
        else:
            method = "python"
    if method == "modp":
        if spec.f != 1:
            raise InvalidParams("method 'modp' requires a prime field")
        return _count_modp(P, spec, block_vars)
    if method == "table":
        return _count_table(P, spec, block_vars)
    if method == "python":
        return _count_python(P, spec)
    raise InvalidParams(f"unknown counting method {method!r}")


def _count_modp(P: MultiPoly, spec: FieldSpec, block_vars: int | None) -> int:
    p = spec.p
    rho = P.nvars
    terms = [
        (c.coeffs[0], [(i, e) for i, e in enumerate(exps) if e]) for exps, c in P.terms
    ]
    max_exp = max((e for _, ve in terms for _, e in ve), default=0)
    pow_tab = power_mod_table(p, max_exp)
    k = _choose_block_vars(p, rho, block_vars)
    m = rho - k
    suffix = _suffix_value_arrays(p, m)
    count = 0
    for prefix in itertools.product(range(p), repeat=k):
        acc = np.zeros(p ** m, dtype=np.int64)
        for coeff, ve in terms:
            scalar = coeff
            arr: np.ndarray | None = None
            for i, e in ve:
                if i < k:
                    scalar = scalar * pow(prefix[i], e, p) % p
                else:
                    part = pow_tab[e][suffix[i - k]]
                    arr = part if arr is None else (arr * part) % p
            if scalar == 0:
                continue
            if arr is None:
                acc = (acc + scalar) % p
            else:
                acc = (acc + scalar * arr) % p
        count += int(np.count_nonzero(acc == 0))
    return count


def _count_table(P: MultiPoly, spec: FieldSpec, block_vars: int | None) -> int:
    q = spec.q
    rho = P.nvars
    add_t, mul_t = arithmetic_tables(spec)
    terms = [
        (c.to_index(), [(i, e) for i, e in enumerate(exps) if e]) for exps, c in P.terms
    ]
    max_exp = max((e for _, ve in terms for _, e in ve), default=0)
    pow_tab = power_index_table(spec, max_exp)
    k = _choose_block_vars(q, rho, block_vars)
    m = rho - k
    suffix = _suffix_value_arrays(q, m)
    count = 0
    for prefix in itertools.product(range(q), repeat=k):
        acc = np.zeros(q ** m, dtype=np.uint16)
        for coeff_idx, ve in terms:
            cur: np.ndarray | int = coeff_idx
            for i, e in ve:
                factor = pow_tab[e][prefix[i]] if i < k else pow_tab[e][suffix[i - k]]
                cur = mul_t[cur, factor]
            acc = add_t[acc, cur]
        count += int(np.count_nonzero(acc == 0))
    return count


def _count_python(P: MultiPoly, spec: FieldSpec) -> int:
    elements = enumerate_field(spec)
    terms = P.terms
    count = 0
    for point in itertools.product(elements, repeat=P.nvars):
        total = spec.zero()
        for exps, coeff in terms:
            acc = coeff
            for i, e in enumerate(exps):
                if e:
                    acc = acc * point[i] ** e
            total = total + acc
        if total.is_zero:
            count += 1
    return count


# --------------------------------------------------------------------------
# exceptional-set restricted counts
# --------------------------------------------------------------------------

def _restrict_to_zero_set(P: MultiPoly, zero_vars: frozenset[int]) -> MultiPoly:
    """P with x_i = 0 for i in zero_vars, as a polynomial in the remaining variables."""
    keep = [i for i in range(P.nvars) if i not in zero_vars]
    acc: dict[tuple[int, ...], object] = {}
    for exps, coeff in P.terms:
        if any(exps[i] for i in zero_vars):
            continue
        e = tuple(exps[i] for i in keep)
        prev = acc.get(e)
        acc[e] = coeff if prev is None else prev + coeff
    return MultiPoly.from_dict(len(keep), P.domain, acc)


def exceptional_on_hypersurface(
    P: MultiPoly, space_like, spec: FieldSpec, *, work_cap: int | None = None
) -> int:
    """#{x in Z(F_q) : P(x) = 0} by inclusion-exclusion over the strata."""
    space = as_space(space_like)
    _check_poly_field(P, spec)
    if P.nvars != space.grading.rho:
        raise InvalidParams(f"polynomial has {P.nvars} vars, space has {space.grading.rho}")
    strata = space.exceptional.strata
    if len(strata) > 20:
        raise InvalidParams("too many exceptional strata for inclusion-exclusion")
    total = 0
    for k in range(1, len(strata) + 1):
        for combo in itertools.combinations(strata, k):
            union = frozenset().union(*combo)
            restricted = _restrict_to_zero_set(P, union)
            n = affine_count(restricted, spec, work_cap=work_cap)
            total += (-1) ** (k + 1) * n
    return total


# --------------------------------------------------------------------------
# toric point counts (quotient formula and direct orbit enumeration)
# --------------------------------------------------------------------------

def _require_free_effective(G: GradingData) -> None:
    if G.torsion:
        raise TorsionClassGroup(f"grading has invariant factors {G.torsion}")
    if not G.is_effective:
        raise NonEffectiveGrading("grading has negative weights")


def _require_homogeneous_or_zero(P: MultiPoly, G: GradingData) -> None:
    if not P.is_zero:
        multidegree(P, G)  # raises NotHomogeneous on mixed degrees


def toric_count_quotient(
    P: MultiPoly, space_like, spec: FieldSpec, *, work_cap: int | None = None
) -> int:
    """(N_affine - N_exceptional) / (q-1)^r with exact divisibility enforced."""
    space = as_space(space_like)
    G = space.grading
    _require_free_effective(G)
    _require_homogeneous_or_zero(P, G)
    n_aff = affine_count(P, spec, work_cap=work_cap)
    n_exc = exceptional_on_hypersurface(P, space, spec, work_cap=work_cap)
    denom = (spec.q - 1) ** G.r
    diff = n_aff - n_exc
    if diff % denom:
        raise NonIntegralQuotient(
            f"(N_affine - N_exceptional) = {diff} is not divisible by (q-1)^{G.r} = {denom}"
        )
    return diff // denom


def toric_count_orbits(
    P: MultiPoly, space_like, spec: FieldSpec, *, work_cap: int | None = None
) -> int:
    """Number of torus orbits on {P = 0} minus the exceptional set.

    Each solution is mapped to its canonical orbit representative (minimum
    under the enumeration order, over all (q-1)^r group elements); the count
    is the number of distinct representatives.
    """
    space = as_space(space_like)
    G = space.grading
    _require_free_effective(G)
    _require_homogeneous_or_zero(P, G)
    q = spec.q
    rho = G.rho
    cap = effective_work_cap(work_cap)
    points = q ** rho
    if points > min(cap, _ORBIT_POINT_CAP):
        raise CapExceeded(f"{points} points exceed the orbit-enumeration cap")
    solutions = _solution_indices(P, spec, rho)
    # drop exceptional points
    if space.exceptional.strata:
        coords = _index_coordinates(solutions, q, rho)
        exc_mask = np.zeros(len(solutions), dtype=bool)
        for stratum in space.exceptional.strata:
            m = np.ones(len(solutions), dtype=bool)
            for i in stratum:
                m &= coords[i] == 0
            exc_mask |= m
        solutions = solutions[~exc_mask]
    group_size = (q - 1) ** G.r
    if group_size * len(solutions) > cap:
        raise CapExceeded("orbit canonicalization exceeds the work cap")
    coords = _index_coordinates(solutions, q, rho)
    pts = np.stack(coords, axis=1) if rho else np.zeros((len(solutions), 0), dtype=np.int64)
    _, mul_t = arithmetic_tables(spec)
    reps: set[tuple[int, ...]] = set()
    multipliers = _group_multipliers(G, spec)
    for row in pts:
        best: tuple[int, ...] | None = None
        for mult in multipliers:
            scaled = tuple(int(mul_t[mult[i], row[i]]) for i in range(rho))
            if best is None or scaled < best:
                best = scaled
        reps.add(best if best is not None else tuple(int(x) for x in row))
    return len(reps)


@lru_cache(maxsize=None)
def _group_multipliers(G: GradingData, spec: FieldSpec) -> tuple[tuple[int, ...], ...]:
    """Per-coordinate multiplier indices for every torus element mu in (F_q*)^r."""
    units = [e for e in enumerate_field(spec) if not e.is_zero]
    out = []
    for mu in itertools.product(units, repeat=G.r):
        mult = []
        for i in range(G.rho):
            m = spec.one()
            for j, mj in enumerate(mu):
                w = G.weights[i][j]
                if w:
                    m = m * mj ** w
            mult.append(m.to_index())
        out.append(tuple(mult))
    return tuple(out)


def _solution_indices(P: MultiPoly, spec: FieldSpec, rho: int) -> np.ndarray:
    """Indices (odometer order) of all points with P = 0, via the vectorized kernels."""
    q = spec.q
    n = q ** rho
    if P.is_zero:
        return np.arange(n, dtype=np.int64)
    suffix = _suffix_value_arrays(q, rho)
    if spec.f == 1:
        p = spec.p
        terms = [(c.coeffs[0], [(i, e) for i, e in enumerate(exps) if e]) for exps, c in P.terms]
        max_exp = max((e for _, ve in terms for _, e in ve), default=0)
        pow_tab = power_mod_table(p, max_exp)
        acc = np.zeros(n, dtype=np.int64)
        for coeff, ve in terms:
            arr: np.ndarray | None = None
            for i, e in ve:
                part = pow_tab[e][suffix[i]]
                arr = part if arr is None else (arr * part) % p
            acc = (acc + coeff * (arr if arr is not None else 1)) % p
        return np.nonzero(acc == 0)[0].astype(np.int64)
    add_t, mul_t = arithmetic_tables(spec)
    terms_t = [(c.to_index(), [(i, e) for i, e in enumerate(exps) if e]) for exps, c in P.terms]
    max_exp = max((e for _, ve in terms_t for _, e in ve), default=0)
    pow_tab = power_index_table(spec, max_exp)
    acc = np.zeros(n, dtype=np.uint16)
    for coeff_idx, ve in terms_t:
        cur: np.ndarray | int = coeff_idx
        for i, e in ve:
            cur = mul_t[cur, pow_tab[e][suffix[i]]]
        acc = add_t[acc, cur]
    return np.nonzero(acc == 0)[0].astype(np.int64)


def _index_coordinates(indices: np.ndarray, q: int, rho: int) -> list[np.ndarray]:
    """Coordinate element-indices of odometer point numbers (x0 most significant)."""
    return [(indices // q ** (rho - 1 - i)) % q for i in range(rho)]


# --------------------------------------------------------------------------
# congruence checks
# --------------------------------------------------------------------------

def check_cw(
    P: MultiPoly, grading_like, spec: FieldSpec, *, work_cap: int | None = None
) -> CongruenceReport:
    """N ≡ 0 (mod p) whenever some degree bound d_j is below the weight sum a_j."""
    start = time.monotonic()
    G = as_grading(grading_like)
    _require_free_effective(G)
    d = degree_bounds(P, G)
    a = total_generator_degree(G)
    if not any(d[j] < a[j] for j in range(G.r)):
        raise HypothesisNotMet(f"degree bounds {d} not below weight sums {a} in any component")
    n = affine_count(P, spec, work_cap=work_cap)
    residue = n % spec.p
    return CongruenceReport(
        kind="CW",
        q=spec.q,
        p=spec.p,
        f=spec.f,
        n_affine=n,
        modulus=spec.p,
        residue=residue,
        passed=residue == 0,
        elapsed=time.monotonic() - start,
    )


def check_cw_projective(
    P: MultiPoly, spec: FieldSpec, *, work_cap: int | None = None
) -> CongruenceReport:
    """#X(F_q) = (N - 1)/(q - 1) ≡ 1 (mod p) for degree d <= n hypersurfaces in P^n."""
    start = time.monotonic()
    G = standard_grading(P.nvars)
    d = multidegree(P, G)[0]  # strict homogeneity: the projective count needs orbits
    n_minus = P.nvars - 1
    if d > n_minus:
        raise HypothesisNotMet(f"degree {d} exceeds projective dimension {n_minus}")
    n_aff = affine_count(P, spec, work_cap=work_cap)
    if (n_aff - 1) % (spec.q - 1):
        raise NonIntegralQuotient("(N_affine - 1) not divisible by q - 1")
    n_proj = (n_aff - 1) // (spec.q - 1)
    residue = n_proj % spec.p
    return CongruenceReport(
        kind="CW-projective",
        q=spec.q,
        p=spec.p,
        f=spec.f,
        n_affine=n_aff,
        n_toric=n_proj,
        modulus=spec.p,
        residue=residue,
        passed=residue == 1,
        elapsed=time.monotonic() - start,
    )


def check_ax(
    P: MultiPoly, grading_like, spec: FieldSpec, *, work_cap: int | None = None
) -> CongruenceReport:
    """q^mu | N with mu computed from the grading and the degree bounds."""
    start = time.monotonic()
    G = as_grading(grading_like)
    _require_free_effective(G)
    d = degree_bounds(P, G)
    mu = ax_exponent(G, d)
    modulus = spec.q ** mu
    n = affine_count(P, spec, work_cap=work_cap)
    residue = n % modulus
    mu_classical = None
    if G.r == 1 and all(row == (1,) for row in G.weights):
        mu_classical = classical_ax_exponent(G.rho, d[0])
    return CongruenceReport(
        kind="Ax",
        q=spec.q,
        p=spec.p,
        f=spec.f,
        n_affine=n,
        modulus=modulus,
        residue=residue,
        passed=residue == 0,
        mu=mu,
        mu_classical=mu_classical,
        elapsed=time.monotonic() - start,
    )


_BLOWUP_SPACE: Space | None = None


def blowup_p4_space() -> Space:
    global _BLOWUP_SPACE
    if _BLOWUP_SPACE is None:
        _BLOWUP_SPACE = builtin("blowup_p4_line")
    return _BLOWUP_SPACE


def check_esnault(
    inst: "quintic_mod.QuinticInstance", spec: FieldSpec | None = None, *, work_cap: int | None = None
) -> CongruenceReport:
    """Quotient count of the blown-up quintic ≡ 1 (mod q); records the q | N verdict."""
    start = time.monotonic()
    if spec is None:
        spec = inst.field
    elif spec != inst.field:
        raise FieldMismatch(f"instance over {inst.field.name}, check over {spec.name}")
    space = blowup_p4_space()
    P = quintic_mod.strict_transform(inst)
    G = space.grading
    d = multidegree(P, G)
    mu = ax_exponent(G, d)
    q = spec.q
    n_aff = affine_count(P, spec, work_cap=work_cap)
    n_exc = exceptional_on_hypersurface(P, space, spec, work_cap=work_cap)
    denom = (q - 1) ** G.r
    diff = n_aff - n_exc
    if diff % denom:
        raise NonIntegralQuotient(
            f"(N_affine - N_exceptional) = {diff} not divisible by (q-1)^{G.r} = {denom}"
        )
    n_toric = diff // denom
    residue = n_toric % q
    return CongruenceReport(
        kind="Esnault",
        q=q,
        p=spec.p,
        f=spec.f,
        n_affine=n_aff,
        n_exceptional=n_exc,
        n_toric=n_toric,
        modulus=q,
        residue=residue,
        passed=residue == 1,
        mu=mu,
        ax_pass=n_aff % q ** mu == 0,
        elapsed=time.monotonic() - start,
    )
