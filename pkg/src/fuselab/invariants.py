"""Modular invariants: exact commutant computation, bounded lattice
enumeration, the TM dimension formulas, and the diagonal-matching verdict.

The commutant is the rational solution space of Z*S = S*Z intersected with
the T-compatibility conditions (Z_IJ = 0 unless t_I = t_J). The T filter is
applied first, so the unknowns are only the label pairs in matching T
classes; each remaining commutation constraint is expanded over a canonical
cyclotomic basis into exact rational rows. A float SVD supplies the
expected nullity so elimination can stop once enough pivots are found; the
result never rests on floats, because every basis element is re-verified in
exact arithmetic and any discrepancy forces a full exact scan.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm

import numpy as np

from .cyclo import ONE, ZERO, CycloNumber, basis_coordinates, embed_complex
from .errors import SearchBudgetExceeded, ShapeMismatch
from .modular import ModularData
from .nimrep import NimRep, character, multiplicity_profile
from .verdict import Check, Verdict, failed, passed

DEFAULT_ENTRY_BOUND = 3
DEFAULT_SEARCH_CAP = 10_000_000
SEARCH_CAP_ENV = "FUSELAB_SEARCH_CAP"

_PROVENANCE = ("user", "enumerated", "diagonal-built")


@dataclass(frozen=True)
class InvariantMatrix:
    """A candidate Z. Entries may be None: a partial matrix records only
    what K-theory determines (the (I, dual I) diagonal); nothing here ever
    fabricates the other entries."""

    entries: tuple[tuple[int | None, ...], ...]
    provenance: str = "user"

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ShapeMismatch("invariant matrix must be square")
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x is not None and not isinstance(x, int):
                    raise ShapeMismatch(f"entry ({i},{j}) must be an integer or unknown")
        if self.provenance not in _PROVENANCE:
            raise ShapeMismatch(f"unknown provenance {self.provenance!r}")

    @classmethod
    def from_rows(cls, rows, provenance: str = "user") -> "InvariantMatrix":
        return cls(entries=tuple(tuple(row) for row in rows), provenance=provenance)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def complete(self) -> bool:
        return all(x is not None for row in self.entries for x in row)


@dataclass(frozen=True)
class CommutantBasis:
    """Reduced-echelon rational basis of the T-filtered commutant.

    basis[k] has value 1 at freePositions[k] and 0 at the other free
    positions, so the coordinates of any member are literally its entries
    at the free positions.
    """

    basis: tuple[tuple[tuple[Fraction, ...], ...], ...]
    freePositions: tuple[tuple[int, int], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def rep_dimension(chi, md: ModularData) -> CycloNumber:
    """<chi, d> = sum_S chi[S] * d(dual S)."""
    if len(chi) != md.rank:
        raise ShapeMismatch("character length must match the rank")
    dual = md.ring.dual
    total = ZERO
    for s, k in enumerate(chi):
        k = int(k)
        if k:
            total = total + md.d[dual[s]] * k
    return total


@dataclass(frozen=True)
class TMDimensionReport:
    dTM: CycloNumber
    multOfUnit: int
    indecomposable: bool
    routes: tuple[tuple[str, bool], ...]


def _support_connected(nr: NimRep) -> bool:
    size = nr.size
    reach = [False] * size
    reach[0] = True
    frontier = [0]
    total = np.zeros((size, size), dtype=np.int64)
    for m in nr.mats:
        total = total + m
    while frontier:
        i = frontier.pop()
        for j in range(size):
            if not reach[j] and (total[i, j] or total[j, i]):
                reach[j] = True
                frontier.append(j)
    return all(reach)


def tm_dimension_report(nr: NimRep, md: ModularData) -> TMDimensionReport:
    """dTM = <chi, d>, the unit multiplicity, and the indecomposability
    verdict, with three independent routes that must agree:
    support-connectivity of the module matrices, multOfUnit = 1, and
    dTM = d(C). Also enforces the chain dTM = multOfUnit * d(C)."""
    chi = character(nr)
    dTM = rep_dimension(chi, md)
    mult = multiplicity_profile(nr, md)[0]
    routes = (
        ("support-connectivity", _support_connected(nr)),
        ("unit-multiplicity", mult == 1),
        ("dimension-formula", dTM == md.globalDim),
    )
    if dTM != md.globalDim * mult:
        raise AssertionError(
            f"dimension chain broken: dTM != {mult} * d(C) for this module"
        )
    answers = {flag for _, flag in routes}
    if len(answers) != 1:
        raise AssertionError(f"indecomposability routes disagree: {routes}")
    return TMDimensionReport(
        dTM=dTM, multOfUnit=mult, indecomposable=mult == 1, routes=routes
    )


def diagonal_profile_as_Z(nr: NimRep, md: ModularData) -> InvariantMatrix:
    """Z_{I, dual(I)} = multiplicity of lambda_I; all other entries unknown."""
    m = multiplicity_profile(nr, md)
    r = md.rank
    dual = md.ring.dual
    rows = [[None] * r for _ in range(r)]
    for I in range(r):
        rows[I][dual[I]] = m[I]
    return InvariantMatrix.from_rows(rows, provenance="diagonal-built")


def _as_entries(Z) -> tuple[tuple[int | None, ...], ...]:
    if isinstance(Z, InvariantMatrix):
        return Z.entries
    return InvariantMatrix.from_rows(Z).entries


def verify_invariant(Z, md: ModularData) -> Verdict:
    """Four independent checks: integer entries (known, non-negative),
    Z_{00} = 1, exact commutation with S-tilde, and the T predicate
    Z_IJ != 0 => t_I = t_J. Each check reports its own witness."""
    entries = _as_entries(Z)
    r = md.rank
    if len(entries) != r:
        raise ShapeMismatch(f"matrix is {len(entries)}x{len(entries)}, rank is {r}")
    checks: list[Check] = []

    witness = None
    for i in range(r):
        for j in range(r):
            x = entries[i][j]
            if x is None:
                witness = f"entry ({i},{j}) is unknown"
            elif x < 0:
                witness = f"entry ({i},{j}) = {x} is negative"
            if witness:
                break
        if witness:
            break
    checks.append(passed("integrality") if witness is None else failed("integrality", witness))

    z00 = entries[0][0]
    checks.append(
        passed("unit-normalization")
        if z00 == 1
        else failed("unit-normalization", f"Z[0,0] = {z00}")
    )

    if all(x is not None for row in entries for x in row):
        S = md.S
        ZS = [[ZERO] * r for _ in range(r)]
        SZ = [[ZERO] * r for _ in range(r)]
        for i in range(r):
            for k in range(r):
                z = entries[i][k]
                if z:
                    row_k = S[k]
                    target = ZS[i]
                    for j in range(r):
                        target[j] = target[j] + row_k[j] * z
        for k in range(r):
            for j in range(r):
                z = entries[k][j]
                if z:
                    for i in range(r):
                        SZ[i][j] = SZ[i][j] + S[i][k] * z
        witness = next(
            (
                f"(Z*S - S*Z) nonzero at ({i},{j})"
                for i in range(r)
                for j in range(r)
                if ZS[i][j] != SZ[i][j]
            ),
            None,
        )
        checks.append(
            passed("s-commutation") if witness is None else failed("s-commutation", witness)
        )
    else:
        checks.append(failed("s-commutation", "matrix has unknown entries"))

    witness = next(
        (
            f"Z[{i},{j}] != 0 but t[{i}] != t[{j}]"
            for i in range(r)
            for j in range(r)
            if entries[i][j] and md.t[i] != md.t[j]
        ),
        None,
    )
    checks.append(
        passed("t-compatibility") if witness is None else failed("t-compatibility", witness)
    )
    return Verdict(tuple(checks))


def _rref_insert(row: dict[int, Fraction], pivots: dict[int, dict[int, Fraction]]) -> bool:
    """Reduce a sparse row against the pivot set; install it if independent.

    Pivot rows are kept fully reduced (true RREF: a pivot row holds its own
    column plus free columns only), so every pivot column present anywhere
    in the incoming row must be eliminated, not just its leading one.
    """
    while row:
        hit = next((c for c in sorted(row) if c in pivots), None)
        if hit is None:
            break
        f = row.pop(hit)
        for c, v in pivots[hit].items():
            if c == hit:
                continue
            nv = row.get(c, Fraction(0)) - f * v
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    if not row:
        return False
    lead = min(row)
    inv = Fraction(1) / row.pop(lead)
    new = {c: v * inv for c, v in row.items()}
    new[lead] = Fraction(1)
    for existing in pivots.values():
        f = existing.get(lead)
        if f is not None:
            del existing[lead]
            for c, v in new.items():
                if c == lead:
                    continue
                nv = existing.get(c, Fraction(0)) - f * v
                if nv:
                    existing[c] = nv
                else:
                    existing.pop(c, None)
    pivots[lead] = new
    return True


def _constraint_terms(md: ModularData, unknown_index, i: int, j: int):
    """The (i,j) entry of Z*S - S*Z as cyclotomic coefficients over the
    unknown positions: coeff S_kj on Z_ik, coeff -S_ik on Z_kj."""
    r = md.rank
    S = md.S
    terms: dict[int, CycloNumber] = {}
    for k in range(r):
        u = unknown_index.get((i, k))
        if u is not None:
            c = S[k][j]
            if not c.is_zero:
                prev = terms.get(u)
                terms[u] = c if prev is None else prev + c
        u = unknown_index.get((k, j))
        if u is not None:
            c = S[i][k]
            if not c.is_zero:
                prev = terms.get(u)
                terms[u] = -c if prev is None else prev - c
    return {u: c for u, c in terms.items() if not c.is_zero}


def _exact_rows(terms: dict[int, CycloNumber]):
    """Expand one cyclotomic constraint into exact rational rows."""
    order = lcm(*(c.order for c in terms.values())) if terms else 1
    coords = {u: basis_coordinates(c, order) for u, c in terms.items()}
    exponents = sorted({e for d in coords.values() for e in d})
    for e in exponents:
        row = {u: d[e] for u, d in coords.items() if e in d}
        if row:
            yield row


def _solve_commutant(md: ModularData, unknowns, float_target: int | None):
    """RREF pivots for the commutation system over the unknown positions.
    When float_target is given, stop as soon as that many pivots exist."""
    unknown_index = {pos: u for u, pos in enumerate(unknowns)}
    pivots: dict[int, dict[int, Fraction]] = {}
    r = md.rank
    for i in range(r):
        for j in range(r):
            if float_target is not None and len(pivots) >= float_target:
                return pivots
            terms = _constraint_terms(md, unknown_index, i, j)
            if not terms:
                continue
            for row in _exact_rows(terms):
                _rref_insert(row, pivots)
                if float_target is not None and len(pivots) >= float_target:
                    return pivots
    return pivots


def _float_nullity(md: ModularData, unknowns) -> int:
    unknown_index = {pos: u for u, pos in enumerate(unknowns)}
    r = md.rank
    emb: dict[int, complex] = {}

    def fval(x: CycloNumber) -> complex:
        got = emb.get(id(x))
        if got is None:
            got = complex(embed_complex(x, 17))
            emb[id(x)] = got
        return got

    rows = []
    for i in range(r):
        for j in range(r):
            row = np.zeros(len(unknowns), dtype=complex)
            touched = False
            for k in range(r):
                u = unknown_index.get((i, k))
                if u is not None and not md.S[k][j].is_zero:
                    row[u] += fval(md.S[k][j])
                    touched = True
                u = unknown_index.get((k, j))
                if u is not None and not md.S[i][k].is_zero:
                    row[u] -= fval(md.S[i][k])
                    touched = True
            if touched:
                rows.append(row)
    if not rows:
        return len(unknowns)
    stack = np.vstack([np.real(rows), np.imag(rows)])
    return len(unknowns) - int(np.linalg.matrix_rank(stack))


def _basis_from_pivots(pivots, unknowns):
    free = [u for u in range(len(unknowns)) if u not in pivots]
    vectors = []
    for f in free:
        x = {f: Fraction(1)}
        for pc, prow in pivots.items():
            coeff = prow.get(f)
            if coeff:
                x[pc] = -coeff
        vectors.append(x)
    return free, vectors


def _vector_to_matrix(x, unknowns, rank: int):
    rows = [[Fraction(0)] * rank for _ in range(rank)]
    for u, v in x.items():
        i, j = unknowns[u]
        rows[i][j] = v
    return tuple(tuple(row) for row in rows)


def _commutes_exactly(mat, md: ModularData) -> bool:
    r = md.rank
    S = md.S
    ZS = [[ZERO] * r for _ in range(r)]
    SZ = [[ZERO] * r for _ in range(r)]
    for i in range(r):
        for k in range(r):
            z = mat[i][k]
            if z:
                row_k = S[k]
                target = ZS[i]
                for j in range(r):
                    target[j] = target[j] + row_k[j] * z
    for k in range(r):
        for j in range(r):
            z = mat[k][j]
            if z:
                for i in range(r):
                    SZ[i][j] = SZ[i][j] + S[i][k] * z
    return all(ZS[i][j] == SZ[i][j] for i in range(r) for j in range(r))


@lru_cache(maxsize=None)
def commutant_basis(md: ModularData) -> CommutantBasis:
    """Exact rational basis of {Z : Z S = S Z, Z_IJ = 0 unless t_I = t_J}."""
    r = md.rank
    unknowns = [(i, j) for i in range(r) for j in range(r) if md.t[i] == md.t[j]]
    nullity = _float_nullity(md, unknowns)
    target = len(unknowns) - nullity
    pivots = _solve_commutant(md, unknowns, target)
    free, vectors = _basis_from_pivots(pivots, unknowns)
    mats = [_vector_to_matrix(x, unknowns, r) for x in vectors]
    if len(mats) != nullity or not all(_commutes_exactly(m, md) for m in mats):
        # the float guide was wrong; redo with the full exact scan
        pivots = _solve_commutant(md, unknowns, None)
        free, vectors = _basis_from_pivots(pivots, unknowns)
        mats = [_vector_to_matrix(x, unknowns, r) for x in vectors]
        if not all(_commutes_exactly(m, md) for m in mats):
            raise AssertionError("exact commutant elimination is inconsistent")
    return CommutantBasis(
        basis=tuple(mats),
        freePositions=tuple(unknowns[f] for f in free),
    )


def _search_cap(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(SEARCH_CAP_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_SEARCH_CAP


def enumerate_invariants(
    md: ModularData, entryBound: int = DEFAULT_ENTRY_BOUND, cap: int | None = None
) -> tuple[InvariantMatrix, ...]:
    """All Z with integer entries in [0, entryBound], Z_00 = 1, commuting
    with S and compatible with T; complete within the bound.

    Because the basis is echelon over the free positions, the integer
    coordinate vectors are exactly the candidate values of Z at those
    positions, so the lattice walk ranges over [0, entryBound]^dim. Every
    survivor is re-verified through verify_invariant before being returned.
    """
    if not isinstance(entryBound, int) or entryBound < 1:
        raise ValueError(f"entryBound must be a positive integer, got {entryBound!r}")
    cap = _search_cap(cap)
    cb = commutant_basis(md)
    dim = cb.dimension
    points = (entryBound + 1) ** dim
    if points > cap:
        raise SearchBudgetExceeded(
            f"{points} lattice points exceed the cap of {cap}"
        )
    r = md.rank
    positions = sorted({pos for mat in cb.basis for pos in _support(mat)})
    found = []
    for coords in product(range(entryBound + 1), repeat=dim):
        entries = [[0] * r for _ in range(r)]
        ok = True
        for i, j in positions:
            val = Fraction(0)
            for k in range(dim):
                c = coords[k]
                if c:
                    val += c * cb.basis[k][i][j]
            if val.denominator != 1 or val < 0 or val > entryBound:
                ok = False
                break
            entries[i][j] = int(val)
        if not ok or entries[0][0] != 1:
            continue
        candidate = InvariantMatrix.from_rows(entries, provenance="enumerated")
        if verify_invariant(candidate, md).ok:
            found.append(candidate)
    found.sort(key=lambda z: z.entries)
    return tuple(found)


def _support(mat) -> list[tuple[int, int]]:
    return [
        (i, j) for i, row in enumerate(mat) for j, v in enumerate(row) if v
    ]


def match_diagonal(Z, nr: NimRep, md: ModularData) -> Verdict:
    """Does Z_{I, dual(I)} equal the multiplicity profile for every I?"""
    entries = _as_entries(Z)
    if len(entries) != md.rank:
        raise ShapeMismatch("matrix size differs from the rank")
    m = multiplicity_profile(nr, md)
    dual = md.ring.dual
    witness = next(
        (
            f"Z[{I},{dual[I]}] = {entries[I][dual[I]]}, profile gives {m[I]}"
            for I in range(md.rank)
            if entries[I][dual[I]] != m[I]
        ),
        None,
    )
    if witness is None:
        return Verdict((passed("diagonal-match"),))
    return Verdict((failed("diagonal-match", witness),))
