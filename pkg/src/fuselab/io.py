"""Exact JSON serialization of the five data kinds, and parsing with
validation on load.

Every file is a UTF-8 JSON document with a top-level "kind" in
{fusion-ring, modular-data, graph, gauge, invariant}. Scalars are stored
exactly: a cyclotomic number as {"order": n, "coeffs": [[num, den], ...]}
(dense over exponents 0..n-1), a T-phase as a [num, den] pair. No decimal
floats anywhere, so serialize -> parse is the identity.

Loading is never silent about bad data: structural problems (wrong shapes,
bad keys, an asymmetric adjacency, a non-closed pair set) raise SchemaError
or MissingPair; mathematically invalid fusion rings and modular data raise
ValidationFailed carrying the failing Verdict. Gauge value identities are
deliberately left to solve-time so the CLI can report the witness triangle
as a check result rather than a load crash.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cyclo import CycloNumber, RationalPhase
from .errors import SchemaError, ShapeMismatch, ValidationFailed
from .fusion import FusionRing, verify_axioms
from .gauge import GaugeProblem, validate_mu
from .invariants import InvariantMatrix
from .modular import ModularData, verify_modular_data
from .nimrep import BoundaryGraph

KINDS = ("fusion-ring", "modular-data", "graph", "gauge", "invariant")


def _require(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    if key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    return doc[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{where}: expected an integer, got {x!r}")
    return x


def _str_list(x, where: str) -> tuple[str, ...]:
    if not isinstance(x, list) or not all(isinstance(s, str) for s in x):
        raise SchemaError(f"{where}: expected a list of strings")
    return tuple(x)


def cyclo_to_json(x: CycloNumber) -> dict:
    return {
        "order": x.order,
        "coeffs": [[c.numerator, c.denominator] for c in x.coeffs],
    }


def cyclo_from_json(obj, where: str) -> CycloNumber:
    order = _int(_require(obj, "order", where), f"{where}.order")
    if order < 1:
        raise SchemaError(f"{where}.order: must be positive")
    coeffs = _require(obj, "coeffs", where)
    if not isinstance(coeffs, list) or len(coeffs) != order:
        raise SchemaError(f"{where}.coeffs: expected {order} [num, den] pairs")
    values = []
    for k, pair in enumerate(coeffs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}.coeffs[{k}]: expected a [num, den] pair")
        num = _int(pair[0], f"{where}.coeffs[{k}][0]")
        den = _int(pair[1], f"{where}.coeffs[{k}][1]")
        if den == 0:
            raise SchemaError(f"{where}.coeffs[{k}]: zero denominator")
        values.append(Fraction(num, den))
    return CycloNumber(order, values)


def phase_to_json(t: RationalPhase) -> list[int]:
    return [t.value.numerator, t.value.denominator]


def phase_from_json(obj, where: str) -> Fraction:
    if not isinstance(obj, list) or len(obj) != 2:
        raise SchemaError(f"{where}: expected a [num, den] pair")
    num = _int(obj[0], f"{where}[0]")
    den = _int(obj[1], f"{where}[1]")
    if den == 0:
        raise SchemaError(f"{where}: zero denominator")
    return Fraction(num, den)


def _ring_fields(ring: FusionRing) -> dict:
    return {
        "labels": list(ring.labels),
        "dual": list(ring.dual),
        "N": [[list(row) for row in plane] for plane in ring.N],
    }


def _ring_from_fields(doc: dict, where: str) -> FusionRing:
    labels = _str_list(_require(doc, "labels", where), f"{where}.labels")
    dual_raw = _require(doc, "dual", where)
    if not isinstance(dual_raw, list):
        raise SchemaError(f"{where}.dual: expected a list")
    dual = tuple(_int(x, f"{where}.dual[{k}]") for k, x in enumerate(dual_raw))
    N_raw = _require(doc, "N", where)
    try:
        N = tuple(
            tuple(tuple(_int(x, f"{where}.N") for x in row) for row in plane)
            for plane in N_raw
        )
        ring = FusionRing(labels=labels, dual=dual, N=N)
    except (TypeError, ShapeMismatch) as err:
        raise SchemaError(f"{where}: {err}") from None
    return ring


def _validated_ring(ring: FusionRing) -> FusionRing:
    v = verify_axioms(ring)
    if not v.ok:
        bad = v.first_failure
        raise ValidationFailed(f"fusion-ring fails {bad.name}: {bad.witness}", v)
    return ring


def data_to_json(obj) -> dict:
    """Serialize any of the five data kinds to a JSON document."""
    if isinstance(obj, FusionRing):
        return {"kind": "fusion-ring", **_ring_fields(obj)}
    if isinstance(obj, ModularData):
        return {
            "kind": "modular-data",
            "ring": _ring_fields(obj.ring),
            "S": [[cyclo_to_json(x) for x in row] for row in obj.S],
            "t": [phase_to_json(t) for t in obj.t],
        }
    if isinstance(obj, BoundaryGraph):
        return {
            "kind": "graph",
            "vertices": list(obj.vertices),
            "adjacency": [list(row) for row in obj.adjacency],
            "family": obj.family,
        }
    if isinstance(obj, GaugeProblem):
        return {
            "kind": "gauge",
            "nodes": list(obj.nodes),
            "mu": [
                [i, j, cyclo_to_json(value)]
                for (i, j), value in zip(obj.pairs, obj.mu)
            ],
        }
    if isinstance(obj, InvariantMatrix):
        return {
            "kind": "invariant",
            "Z": [list(row) for row in obj.entries],
            "provenance": obj.provenance,
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_data(doc):
    """Typed object from a JSON document; validates on load."""
    kind = _require(doc, "kind", "document")
    if kind == "fusion-ring":
        return _validated_ring(_ring_from_fields(doc, "fusion-ring"))
    if kind == "modular-data":
        ring = _validated_ring(
            _ring_from_fields(_require(doc, "ring", "modular-data"), "modular-data.ring")
        )
        S_raw = _require(doc, "S", "modular-data")
        if not isinstance(S_raw, list) or not all(isinstance(r, list) for r in S_raw):
            raise SchemaError("modular-data.S: expected a matrix")
        S = [
            [cyclo_from_json(x, f"modular-data.S[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(S_raw)
        ]
        t_raw = _require(doc, "t", "modular-data")
        if not isinstance(t_raw, list):
            raise SchemaError("modular-data.t: expected a list")
        t = [phase_from_json(x, f"modular-data.t[{k}]") for k, x in enumerate(t_raw)]
        try:
            md = ModularData.build(ring, S, t)
        except ShapeMismatch as err:
            raise SchemaError(f"modular-data: {err}") from None
        v = verify_modular_data(md)
        if not v.ok:
            bad = v.first_failure
            raise ValidationFailed(f"modular-data fails {bad.name}: {bad.witness}", v)
        return md
    if kind == "graph":
        vertices = _str_list(_require(doc, "vertices", "graph"), "graph.vertices")
        adjacency_raw = _require(doc, "adjacency", "graph")
        family = doc.get("family", "custom")
        if not isinstance(family, str):
            raise SchemaError("graph.family: expected a string")
        try:
            adjacency = tuple(
                tuple(_int(x, "graph.adjacency") for x in row) for row in adjacency_raw
            )
            return BoundaryGraph(vertices=vertices, adjacency=adjacency, family=family)
        except (TypeError, ShapeMismatch) as err:
            raise SchemaError(f"graph: {err}") from None
    if kind == "gauge":
        nodes = _str_list(_require(doc, "nodes", "gauge"), "gauge.nodes")
        mu_raw = _require(doc, "mu", "gauge")
        if not isinstance(mu_raw, list):
            raise SchemaError("gauge.mu: expected a list of [i, j, value] triples")
        mu_map = {}
        for k, triple in enumerate(mu_raw):
            if not isinstance(triple, list) or len(triple) != 3:
                raise SchemaError(f"gauge.mu[{k}]: expected an [i, j, value] triple")
            i = _int(triple[0], f"gauge.mu[{k}][0]")
            j = _int(triple[1], f"gauge.mu[{k}][1]")
            if (i, j) in mu_map:
                raise SchemaError(f"gauge.mu[{k}]: duplicate pair ({i},{j})")
            mu_map[(i, j)] = cyclo_from_json(triple[2], f"gauge.mu[{k}][2]")
        try:
            gp = GaugeProblem.build(nodes, mu_map)
        except ShapeMismatch as err:
            raise SchemaError(f"gauge: {err}") from None
        # structural J validation happens now (raises MissingPair); the value
        # identities are reported by gauge solve with witnesses instead
        validate_mu(gp)
        return gp
    if kind == "invariant":
        Z_raw = _require(doc, "Z", "invariant")
        provenance = doc.get("provenance", "user")
        if not isinstance(Z_raw, list):
            raise SchemaError("invariant.Z: expected a matrix")
        rows = []
        for i, row in enumerate(Z_raw):
            if not isinstance(row, list):
                raise SchemaError(f"invariant.Z[{i}]: expected a list")
            rows.append(
                tuple(
                    None if x is None else _int(x, f"invariant.Z[{i}][{j}]")
                    for j, x in enumerate(row)
                )
            )
        try:
            return InvariantMatrix(entries=tuple(rows), provenance=provenance)
        except ShapeMismatch as err:
            raise SchemaError(f"invariant: {err}") from None
    raise SchemaError(f"document: unknown kind {kind!r}")


def dumps_data(obj) -> str:
    return json.dumps(data_to_json(obj), sort_keys=True, indent=2) + "\n"


def write_data_file(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_data(obj))


def parse_data_file(path):
    """Load and validate one data file; schema errors carry line/field."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise SchemaError(
            f"{path}: line {err.lineno}, column {err.colno}: {err.msg}"
        ) from None
    return parse_data(doc)
