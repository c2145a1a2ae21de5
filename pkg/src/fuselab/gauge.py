"""Gauge scalars on boundary-label pairs: validation of the mu-cochain,
its exact solution lambda (one free scalar per connected component), the
encircling matrices E(a) = Lambda^-1 N(a) Lambda, and the isomorphism
checks tying E back to N.

J is a union of cliques once validated (reflexive + symmetric +
composition-closed), so solving is spanning-star propagation from the
lowest-index node of each component; no general cohomology machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclo import ONE, ZERO, CycloNumber
from .errors import DegenerateScalar, GaugeInconsistent, MissingPair, ShapeMismatch
from .verdict import Check, Verdict, failed, passed


@dataclass(frozen=True)
class GaugeProblem:
    nodes: tuple[str, ...]
    pairs: tuple[tuple[int, int], ...]
    mu: tuple[CycloNumber, ...]

    def __post_init__(self):
        n = len(self.nodes)
        if len(self.mu) != len(self.pairs):
            raise ShapeMismatch("mu values must align with the pair list")
        seen = set()
        for i, j in self.pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ShapeMismatch(f"pair ({i},{j}) references a missing node")
            if (i, j) in seen:
                raise ShapeMismatch(f"pair ({i},{j}) listed twice")
            seen.add((i, j))

    @classmethod
    def build(cls, nodes, mu_map) -> "GaugeProblem":
        """From a mapping (i, j) -> CycloNumber; pair order is normalized."""
        pairs = tuple(sorted(mu_map))
        return cls(
            nodes=tuple(nodes),
            pairs=pairs,
            mu=tuple(mu_map[p] for p in pairs),
        )

    def mu_map(self) -> dict[tuple[int, int], CycloNumber]:
        return dict(zip(self.pairs, self.mu))


@dataclass(frozen=True)
class GaugeSolution:
    lam: tuple[CycloNumber, ...]
    components: tuple[tuple[int, ...], ...]


def _components(n: int, pair_set) -> tuple[tuple[int, ...], ...]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pair_set:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return tuple(tuple(groups[r]) for r in sorted(groups))


def validate_mu(gp: GaugeProblem) -> Verdict:
    """Structure first, values second.

    A J that is not reflexive, symmetric, and composition-closed raises
    MissingPair: the value identities are not even well-posed on it. Value
    failures (mu_ii != 1, mu_ij mu_ji != 1, broken triangle) come back as a
    failing Verdict with the witness pair or triangle.
    """
    n = len(gp.nodes)
    mu = gp.mu_map()
    J = set(gp.pairs)
    for i in range(n):
        if (i, i) not in J:
            raise MissingPair(f"missing reflexive pair ({i},{i})")
    for i, j in gp.pairs:
        if (j, i) not in J:
            raise MissingPair(f"pair ({i},{j}) present but ({j},{i}) missing")
    out: dict[int, list[int]] = {}
    for i, j in gp.pairs:
        if i != j:
            out.setdefault(i, []).append(j)
    for i, js in out.items():
        for j in js:
            for k in out.get(j, ()):
                if (i, k) not in J:
                    raise MissingPair(f"pairs ({i},{j}), ({j},{k}) present but ({i},{k}) missing")

    checks: list[Check] = []
    for i in range(n):
        if mu[(i, i)] != ONE:
            return Verdict((*checks, failed("diagonal-units", f"mu[{i},{i}] != 1")))
    checks.append(passed("diagonal-units"))

    for i, j in gp.pairs:
        if i < j and mu[(i, j)] * mu[(j, i)] != ONE:
            return Verdict(
                (*checks, failed("inverse-pairs", f"mu[{i},{j}] * mu[{j},{i}] != 1"))
            )
    checks.append(passed("inverse-pairs"))

    for i, js in sorted(out.items()):
        for j in sorted(js):
            for k in sorted(out.get(j, ())):
                if k != i and mu[(i, j)] * mu[(j, k)] != mu[(i, k)]:
                    return Verdict(
                        (*checks, failed("cocycle", f"triangle ({i},{j},{k})"))
                    )
    checks.append(passed("cocycle"))
    return Verdict(tuple(checks))


def solve_gauge(gp: GaugeProblem) -> GaugeSolution:
    """lambda with mu_ij = lambda_i / lambda_j; per component the
    lowest-index node is the root and gets lambda = 1."""
    v = validate_mu(gp)
    if not v.ok:
        bad = v.first_failure
        raise GaugeInconsistent(f"{bad.name}: {bad.witness}")
    mu = gp.mu_map()
    comps = _components(len(gp.nodes), gp.pairs)
    lam: list[CycloNumber | None] = [None] * len(gp.nodes)
    for comp in comps:
        root = comp[0]
        lam[root] = ONE
        for j in comp[1:]:
            if (root, j) not in mu:
                raise MissingPair(f"component of {root} is not a clique: missing ({root},{j})")
            # mu_rj = lambda_r / lambda_j = 1 / lambda_j
            value = mu[(root, j)]
            if value.is_zero:
                raise DegenerateScalar(f"mu[{root},{j}] is zero")
            lam[j] = value.inverse()
    for (i, j), value in mu.items():
        if value * lam[j] != lam[i]:
            raise GaugeInconsistent(f"solved lambda fails mu at ({i},{j})")
    return GaugeSolution(lam=tuple(lam), components=comps)


def encircling_matrices(nr, lam) -> tuple[tuple[tuple[CycloNumber, ...], ...], ...]:
    """E(a)_{ji} = (lambda_i / lambda_j) N(a)_{ji}, one matrix per label."""
    size = nr.size
    if len(lam) != size:
        raise ShapeMismatch("lambda length must match the boundary rank")
    for i, x in enumerate(lam):
        if x.is_zero:
            raise DegenerateScalar(f"lambda[{i}] is zero")
    inv = [x.inverse() for x in lam]
    ratio = [[lam[i] * inv[j] for i in range(size)] for j in range(size)]
    out = []
    for mat in nr.mats:
        rows = []
        for j in range(size):
            row = []
            for i in range(size):
                k = int(mat[j, i])
                row.append(ratio[j][i] * k if k else ZERO)
            rows.append(tuple(row))
        out.append(tuple(rows))
    return tuple(out)


def verify_phi_isomorphism(nr, lam, md) -> Verdict:
    """(a) "intertwiner": Lambda E(a) = N(a) Lambda for every a, the module
    map phi^i -> lambda_i i. (b) "d-eigenvector": every E(a) has constant
    row sums d(a), i.e. the all-ones vector is a d-eigenvector of E. Both
    parts are always evaluated; (b) fails exactly when lambda is not a
    d-eigenvector of N."""
    size = nr.size
    E = encircling_matrices(nr, lam)
    checks: list[Check] = []

    witness = None
    for a, mat in enumerate(nr.mats):
        for j in range(size):
            for i in range(size):
                if lam[j] * E[a][j][i] != lam[i] * int(mat[j, i]):
                    witness = f"(a,j,i)=({a},{j},{i})"
                    break
            if witness:
                break
        if witness:
            break
    checks.append(passed("intertwiner") if witness is None else failed("intertwiner", witness))

    witness = None
    for a in range(nr.ring.rank):
        da = md.d[a]
        for j in range(size):
            total = ZERO
            for i in range(size):
                total = total + E[a][j][i]
            if total != da:
                witness = f"row {j} of E({a}) sums to {total}, not d({a})"
                break
        if witness:
            break
    checks.append(
        passed("d-eigenvector") if witness is None else failed("d-eigenvector", witness)
    )
    return Verdict(tuple(checks))
