"""NIM-reps over fusion rings: boundary graphs, the su(2) construction via
the Chebyshev recurrence, characters, projector-trace multiplicity profiles,
and the exact Perron-Frobenius eigenvector.

Profiles are exact: m[I] is the trace of the spectral projector for
lambda_I pushed through the representation, which by linearity of the trace
is sum_S coeff_S(e_{lambda_I}) * chi[S] with integer characters chi. The
float eigen-decomposition never feeds a result here; it lives in the test
suite as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclo import ONE, ZERO, CycloNumber
from .errors import (
    DegenerateScalar,
    MultiplicityNotOne,
    NonIntegralMultiplicity,
    NotANimRep,
    ShapeMismatch,
)
from .fusion import FusionRing, su2_fusion_ring
from .modular import ModularData, idempotent_family
from .verdict import Check, Verdict, failed, passed

_ADE_FAMILIES = ("A", "D", "E")


def _int_matrix(rows) -> np.ndarray:
    arr = np.asarray(rows)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeMismatch("matrix must be square")
    if arr.dtype.kind not in "iu":
        raise ShapeMismatch("matrix entries must be integers")
    out = arr.astype(np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BoundaryGraph:
    vertices: tuple[str, ...]
    adjacency: tuple[tuple[int, ...], ...]
    family: str = "custom"

    def __post_init__(self):
        n = len(self.vertices)
        if len(self.adjacency) != n or any(len(row) != n for row in self.adjacency):
            raise ShapeMismatch("adjacency must be square over the vertex list")
        for i in range(n):
            for j in range(n):
                x = self.adjacency[i][j]
                if not isinstance(x, int) or x < 0:
                    raise ShapeMismatch(f"adjacency[{i}][{j}] must be a non-negative integer")
                if self.adjacency[i][j] != self.adjacency[j][i]:
                    raise ShapeMismatch(f"adjacency must be symmetric, differs at ({i},{j})")
        if self.family != "custom":
            if self.adjacency != _ade_adjacency(self.family):
                raise ShapeMismatch(
                    f"adjacency does not match the {self.family} Dynkin graph"
                )

    @property
    def size(self) -> int:
        return len(self.vertices)

    def matrix(self) -> np.ndarray:
        return _int_matrix(self.adjacency)


def _ade_edges(tag: str) -> tuple[int, list[tuple[int, int]]]:
    """Vertex count and 1-based edge list for a family tag like 'D:7'."""
    head, sep, tail = tag.partition(":")
    if not sep or head not in _ADE_FAMILIES:
        raise ShapeMismatch(f"unknown graph family tag {tag!r}")
    try:
        n = int(tail)
    except ValueError:
        raise ShapeMismatch(f"graph tag {tag!r} has a non-integer rank") from None
    if head == "A":
        if n < 1:
            raise ShapeMismatch("A_n needs n >= 1")
        return n, [(i, i + 1) for i in range(1, n)]
    if head == "D":
        if n < 4:
            raise ShapeMismatch("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(1, n - 2)]
        return n, edges + [(n - 2, n - 1), (n - 2, n)]
    if n not in (6, 7, 8):
        raise ShapeMismatch("E_n exists only for n in {6, 7, 8}")
    return n, [(1, 3)] + [(i, i + 1) for i in range(3, n)] + [(2, 4)]


def _ade_adjacency(tag: str) -> tuple[tuple[int, ...], ...]:
    n, edges = _ade_edges(tag)
    adj = [[0] * n for _ in range(n)]
    for i, j in edges:
        adj[i - 1][j - 1] = 1
        adj[j - 1][i - 1] = 1
    return tuple(tuple(row) for row in adj)


def ade_graph(tag: str) -> BoundaryGraph:
    """Resolve a family tag like 'A:11', 'D:7', 'E:6' (Bourbaki numbering:
    A_n and the D_n tail are paths from vertex 1; D_n forks at n-2; E_n
    branches at vertex 4 with the short leg 2-4)."""
    n, _ = _ade_edges(tag)
    return BoundaryGraph(
        vertices=tuple(str(i) for i in range(1, n + 1)),
        adjacency=_ade_adjacency(tag),
        family=tag,
    )


def a_graph(n: int) -> BoundaryGraph:
    """Path graph A_n, vertices 1..n in order."""
    return ade_graph(f"A:{n}")


def d_graph(n: int) -> BoundaryGraph:
    """D_n: path 1..n-2 with both n-1 and n attached to n-2."""
    return ade_graph(f"D:{n}")


def e_graph(n: int) -> BoundaryGraph:
    """E_6/E_7/E_8: branch vertex 4, short leg 2-4."""
    return ade_graph(f"E:{n}")


def disjoint_union(*graphs: BoundaryGraph) -> BoundaryGraph:
    """Block-diagonal union; vertices prefixed by component index."""
    if not graphs:
        raise ShapeMismatch("union of zero graphs")
    vertices: list[str] = []
    for k, g in enumerate(graphs):
        vertices += [f"{k}:{v}" for v in g.vertices]
    total = len(vertices)
    adj = [[0] * total for _ in range(total)]
    offset = 0
    for g in graphs:
        for i in range(g.size):
            for j in range(g.size):
                adj[offset + i][offset + j] = g.adjacency[i][j]
        offset += g.size
    return BoundaryGraph(
        vertices=tuple(vertices), adjacency=tuple(tuple(row) for row in adj)
    )


@dataclass(frozen=True, eq=False)
class NimRep:
    """Integer matrices N(a) with N(a)_{ji} = multiplicity of j in a acting on i."""

    ring: FusionRing
    boundaryLabels: tuple[str, ...]
    mats: tuple[np.ndarray, ...]

    @property
    def size(self) -> int:
        return len(self.boundaryLabels)


def verify_nimrep(ring: FusionRing, mats) -> Verdict:
    """Exact NIM-rep axioms: non-negative integer entries, N(0) = identity,
    the homomorphism identity against the ring's N-tensor, and duality
    N(dual(a)) = N(a) transposed. Stops at the first failed axiom."""
    r = ring.rank
    if len(mats) != r:
        raise ShapeMismatch(f"expected {r} matrices, got {len(mats)}")
    ms = [_int_matrix(m) for m in mats]
    size = ms[0].shape[0]
    if any(m.shape[0] != size for m in ms):
        raise ShapeMismatch("matrices must share one size")

    checks: list[Check] = []
    for a, m in enumerate(ms):
        if (m < 0).any():
            j, i = next(zip(*np.nonzero(m < 0)))
            return Verdict(
                (*checks, failed("non-negativity", f"N({a})[{j},{i}] = {m[j, i]}"))
            )
    checks.append(passed("non-negativity"))

    if not np.array_equal(ms[0], np.eye(size, dtype=np.int64)):
        return Verdict((*checks, failed("unit", "N(0) is not the identity")))
    checks.append(passed("unit"))

    for a in range(r):
        if not np.array_equal(ms[ring.dual[a]], ms[a].T):
            return Verdict(
                (*checks, failed("duality", f"N(dual({a})) != transpose of N({a})"))
            )
    checks.append(passed("duality"))

    for a in range(r):
        for b in range(r):
            want = np.zeros((size, size), dtype=np.int64)
            for c in range(r):
                k = ring.N[a][b][c]
                if k:
                    want = want + k * ms[c]
            got = ms[a] @ ms[b]
            if not np.array_equal(got, want):
                j, i = next(zip(*np.nonzero(got != want)))
                return Verdict(
                    (
                        *checks,
                        failed(
                            "homomorphism",
                            f"(N({a})N({b}))[{j},{i}] = {got[j, i]} != {want[j, i]}",
                        ),
                    )
                )
    checks.append(passed("homomorphism"))
    return Verdict(tuple(checks))


def su2_nimrep_from_graph(g: BoundaryGraph, level: int) -> NimRep:
    """N(x_0) = I, N(x_1) = adjacency, then the two-term recurrence
    N(x_{i+1}) = N(x_1) N(x_i) - N(x_{i-1}). A graph whose Coxeter number
    does not match level + 2 fails the recurrence or the axioms."""
    if level < 0:
        raise ShapeMismatch("level must be non-negative")
    ring = su2_fusion_ring(level)
    A = g.matrix()
    mats = [np.eye(g.size, dtype=np.int64)]
    if level >= 1:
        mats.append(A)
    for i in range(1, level):
        nxt = A @ mats[i] - mats[i - 1]
        if (nxt < 0).any():
            j, k = next(zip(*np.nonzero(nxt < 0)))
            raise NotANimRep(f"recurrence for N(x_{i + 1}) gives entry {nxt[j, k]} at ({j},{k})")
        mats.append(nxt)
    v = verify_nimrep(ring, mats)
    if not v.ok:
        bad = v.first_failure
        raise NotANimRep(f"{bad.name}: {bad.witness}")
    frozen = tuple(_int_matrix(m) for m in mats)
    return NimRep(ring=ring, boundaryLabels=g.vertices, mats=frozen)


def regular_nimrep(ring: FusionRing) -> NimRep:
    """The ring acting on itself; boundary labels are the ring labels."""
    from .fusion import regular_matrices

    return NimRep(ring=ring, boundaryLabels=ring.labels, mats=regular_matrices(ring))


def character(nr: NimRep) -> tuple[int, ...]:
    """chi[a] = trace N(a); chi[0] = number of boundary labels."""
    return tuple(int(m.trace()) for m in nr.mats)


def multiplicity_profile(nr: NimRep, md: ModularData) -> tuple[int, ...]:
    """m[I] = trace of the lambda_I spectral projector inside the rep,
    expanded as sum_S coeff_S(e_{lambda_I}) * chi[S]."""
    if md.ring.rank != nr.ring.rank:
        raise ShapeMismatch("modular data rank differs from the ring rank")
    chi = character(nr)
    out: list[int] = []
    for I, e in enumerate(idempotent_family(md)):
        val = ZERO
        for s, c in enumerate(e.coeffs):
            k = chi[s]
            if k and not c.is_zero:
                val = val + c * k
        if not val.is_rational:
            raise NonIntegralMultiplicity(f"projector trace for label {I} is irrational")
        q = val.as_rational()
        if q.denominator != 1 or q < 0:
            raise NonIntegralMultiplicity(
                f"projector trace for label {I} is {q}, not a non-negative integer"
            )
        out.append(int(q))
    if sum(out) != nr.size:
        raise NonIntegralMultiplicity(
            f"profile sums to {sum(out)}, expected {nr.size} boundary labels"
        )
    return tuple(out)


def d_eigenvector(nr: NimRep, md: ModularData) -> tuple[CycloNumber, ...]:
    """The vector with N(a) v = d(a) v, normalized to v[0] = 1.

    Exists uniquely (up to scale) when the unit character has multiplicity
    one; found by pushing a standard basis vector through the lambda_0
    projector and keeping the first nonzero image column.
    """
    m = multiplicity_profile(nr, md)
    if m[0] != 1:
        raise MultiplicityNotOne(f"unit character has multiplicity {m[0]}")
    e0 = idempotent_family(md)[0]
    size = nr.size
    col: list[CycloNumber] | None = None
    for i in range(size):
        cand = [ZERO] * size
        for s, c in enumerate(e0.coeffs):
            if c.is_zero:
                continue
            mat = nr.mats[s]
            for j in range(size):
                k = int(mat[j, i])
                if k:
                    cand[j] = cand[j] + c * k
        if any(not x.is_zero for x in cand):
            col = cand
            break
    if col is None or col[0].is_zero:
        raise DegenerateScalar("projector image has no usable column")
    scale = col[0].inverse()
    v = tuple(x * scale for x in col)
    for a in range(nr.ring.rank):
        mat = nr.mats[a]
        da = md.d[a]
        for j in range(size):
            total = ZERO
            for i in range(size):
                k = int(mat[j, i])
                if k:
                    total = total + v[i] * k
            if total != da * v[j]:
                raise AssertionError(
                    f"projector column is not a d-eigenvector at (a, j) = ({a},{j})"
                )
    return v
