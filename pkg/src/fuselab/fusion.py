"""Fusion rings: basis labels, duality, structure constants, and the
regular representation.

Index 0 is always the unit. The tensor is stored dense, N[a][b][c] being the
multiplicity of label c inside a*b; at this scale (rank <= ~64) density is
simpler than sparsity and the verifier loops stay transparent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclo import ZERO, CycloNumber, _coerce
from .errors import ShapeMismatch
from .verdict import Check, Verdict, failed, passed


@dataclass(frozen=True)
class FusionRing:
    labels: tuple[str, ...]
    dual: tuple[int, ...]
    N: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        r = len(self.labels)
        if len(self.dual) != r:
            raise ShapeMismatch(f"dual has length {len(self.dual)}, expected {r}")
        if sorted(self.dual) != list(range(r)):
            raise ShapeMismatch("dual is not a permutation of the label indices")
        if len(self.N) != r:
            raise ShapeMismatch(f"N has {len(self.N)} planes, expected {r}")
        for a, plane in enumerate(self.N):
            if len(plane) != r:
                raise ShapeMismatch(f"N[{a}] has {len(plane)} rows, expected {r}")
            for b, row in enumerate(plane):
                if len(row) != r:
                    raise ShapeMismatch(f"N[{a}][{b}] has length {len(row)}, expected {r}")
                for c, v in enumerate(row):
                    if not isinstance(v, int):
                        raise ShapeMismatch(f"N[{a}][{b}][{c}] = {v!r} is not an integer")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def basis_element(self, a: int) -> "FusionElement":
        coeffs = [ZERO] * self.rank
        coeffs[a] = CycloNumber.from_rational(1)
        return FusionElement(tuple(coeffs))

    @property
    def unit(self) -> "FusionElement":
        return self.basis_element(0)


@dataclass(frozen=True)
class FusionElement:
    """A general element of the fusion algebra: one CycloNumber per label."""

    coeffs: tuple[CycloNumber, ...]

    def __add__(self, other: "FusionElement") -> "FusionElement":
        if len(self.coeffs) != len(other.coeffs):
            raise ShapeMismatch("element ranks differ")
        return FusionElement(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FusionElement") -> "FusionElement":
        if len(self.coeffs) != len(other.coeffs):
            raise ShapeMismatch("element ranks differ")
        return FusionElement(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def scale(self, factor) -> "FusionElement":
        f = _coerce(factor)
        if f is None:
            raise TypeError(f"cannot scale by {factor!r}")
        return FusionElement(tuple(f * x for x in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return all(x.is_zero for x in self.coeffs)


def verify_axioms(ring: FusionRing) -> Verdict:
    """Check unit law, duality, associativity, commutativity.

    Stops at the first violated identity and names a witness index tuple.
    """
    r = ring.rank
    N, dual = ring.N, ring.dual
    checks: list[Check] = []

    for a in range(r):
        for b in range(r):
            for c in range(r):
                if N[a][b][c] < 0:
                    checks.append(failed("non-negativity", f"N[{a}][{b}][{c}] = {N[a][b][c]}"))
                    return Verdict(tuple(checks))
    checks.append(passed("non-negativity"))

    for b in range(r):
        for c in range(r):
            want = 1 if b == c else 0
            if N[0][b][c] != want or N[b][0][c] != want:
                checks.append(failed("unit", f"(b,c)=({b},{c})"))
                return Verdict(tuple(checks))
    checks.append(passed("unit"))

    if dual[0] != 0:
        checks.append(failed("duality", "dual(0) != 0"))
        return Verdict(tuple(checks))
    for a in range(r):
        if dual[dual[a]] != a:
            checks.append(failed("duality", f"dual(dual({a})) = {dual[dual[a]]}"))
            return Verdict(tuple(checks))
        for b in range(r):
            want = 1 if b == dual[a] else 0
            if N[a][b][0] != want:
                checks.append(failed("duality", f"N[{a}][{b}][0] = {N[a][b][0]}, expected {want}"))
                return Verdict(tuple(checks))
    checks.append(passed("duality"))

    for a in range(r):
        for b in range(r):
            for c in range(r):
                for d in range(r):
                    left = sum(N[a][b][e] * N[e][c][d] for e in range(r))
                    right = sum(N[b][c][f] * N[a][f][d] for f in range(r))
                    if left != right:
                        checks.append(failed("associativity", f"(a,b,c,d)=({a},{b},{c},{d})"))
                        return Verdict(tuple(checks))
    checks.append(passed("associativity"))

    for a in range(r):
        for b in range(a + 1, r):
            for c in range(r):
                if N[a][b][c] != N[b][a][c]:
                    checks.append(failed("commutativity", f"(a,b,c)=({a},{b},{c})"))
                    return Verdict(tuple(checks))
    checks.append(passed("commutativity"))

    return Verdict(tuple(checks))


def su2_fusion_ring(level: int) -> FusionRing:
    """Truncated Clebsch-Gordan rules at height h = level + 2.

    N_{ab}^c = 1 iff |a-b| <= c <= min(a+b, 2*level-a-b) and c = a+b mod 2.
    """
    if not isinstance(level, int) or level < 0:
        raise ValueError(f"level must be a non-negative integer, got {level!r}")
    r = level + 1
    N = tuple(
        tuple(
            tuple(
                1
                if abs(a - b) <= c <= min(a + b, 2 * level - a - b) and (a + b + c) % 2 == 0
                else 0
                for c in range(r)
            )
            for b in range(r)
        )
        for a in range(r)
    )
    labels = tuple(f"x{a}" for a in range(r))
    return FusionRing(labels=labels, dual=tuple(range(r)), N=N)


def multiply(ring: FusionRing, x: FusionElement, y: FusionElement) -> FusionElement:
    """Bilinear extension of the structure constants."""
    r = ring.rank
    if len(x.coeffs) != r or len(y.coeffs) != r:
        raise ShapeMismatch("element rank does not match the ring")
    out: list[CycloNumber] = [ZERO] * r
    N = ring.N
    for a, xa in enumerate(x.coeffs):
        if xa.is_zero:
            continue
        for b, yb in enumerate(y.coeffs):
            if yb.is_zero:
                continue
            prod = xa * yb
            row = N[a][b]
            for c in range(r):
                k = row[c]
                if k:
                    out[c] = out[c] + (prod if k == 1 else prod * k)
    return FusionElement(tuple(out))


def regular_matrices(ring: FusionRing) -> tuple[np.ndarray, ...]:
    """Matrices of the regular action, (N_a)_{cb} = N_{ab}^c.

    Returned as read-only integer arrays; they satisfy
    N_a N_b = sum_c N_{ab}^c N_c whenever the ring axioms hold.
    """
    r = ring.rank
    mats = []
    for a in range(r):
        m = np.zeros((r, r), dtype=np.int64)
        for b in range(r):
            for c in range(r):
                m[c, b] = ring.N[a][b][c]
        m.setflags(write=False)
        mats.append(m)
    return tuple(mats)
