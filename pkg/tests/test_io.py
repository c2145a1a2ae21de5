"""File format: exact serialization, validation on load, and schema errors
that name the offending key."""

import json
from fractions import Fraction

import pytest

from fuselab.cyclo import CycloNumber, zeta
from fuselab.errors import MissingPair, SchemaError, ValidationFailed
from fuselab.gauge import GaugeProblem
from fuselab.invariants import InvariantMatrix
from fuselab.io import (
    cyclo_from_json,
    cyclo_to_json,
    data_to_json,
    dumps_data,
    parse_data,
    parse_data_file,
    write_data_file,
)
from fuselab.modular import load_catalog, su2_modular_data
from fuselab.nimrep import d_graph, e_graph


def rat(x) -> CycloNumber:
    return CycloNumber.from_rational(x)


def sample_gauge() -> GaugeProblem:
    lam = [rat(1), zeta(5), rat(Fraction(3, 2))]
    mu = {(i, j): lam[i] / lam[j] for i in range(3) for j in range(3)}
    return GaugeProblem.build(("p", "q", "r"), mu)


def all_kinds():
    md = su2_modular_data(2)
    return (
        md.ring,
        md,
        e_graph(6),
        sample_gauge(),
        InvariantMatrix.from_rows([[1, None], [None, 1]]),
    )


def test_round_trip_identity_all_kinds():
    for obj in all_kinds():
        assert parse_data(data_to_json(obj)) == obj


def test_round_trip_through_file(tmp_path):
    for k, obj in enumerate(all_kinds()):
        path = tmp_path / f"obj{k}.json"
        write_data_file(path, obj)
        assert parse_data_file(path) == obj


def test_serialized_bytes_stable():
    md = load_catalog("ising")
    assert dumps_data(md) == dumps_data(md)
    doc = json.loads(dumps_data(md))
    assert doc["kind"] == "modular-data"


def test_cyclo_serialization_exact():
    x = zeta(8) + rat(Fraction(2, 7))
    doc = cyclo_to_json(x)
    assert doc["order"] == 8
    assert cyclo_from_json(doc, "x") == x
    with pytest.raises(SchemaError):
        cyclo_from_json({"order": 2, "coeffs": [[1, 0], [0, 1]]}, "x")
    with pytest.raises(SchemaError):
        cyclo_from_json({"order": 3, "coeffs": [[1, 1]]}, "x")


def test_decode_error_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "graph",\n  "vertices": [}\n')
    with pytest.raises(SchemaError) as info:
        parse_data_file(path)
    assert "line 2" in str(info.value)


def test_schema_error_names_key():
    with pytest.raises(SchemaError) as info:
        parse_data({"kind": "graph", "adjacency": [[0]]})
    assert "vertices" in str(info.value)
    with pytest.raises(SchemaError) as info:
        parse_data({"kind": "invariant"})
    assert "Z" in str(info.value)
    with pytest.raises(SchemaError):
        parse_data({"kind": "wavefunction"})
    with pytest.raises(SchemaError):
        parse_data([1, 2, 3])


def test_asymmetric_graph_rejected():
    with pytest.raises(SchemaError):
        parse_data(
            {
                "kind": "graph",
                "vertices": ["a", "b"],
                "adjacency": [[0, 1], [0, 0]],
            }
        )


def test_invalid_ring_fails_validation():
    doc = data_to_json(su2_modular_data(2).ring)
    doc["dual"] = [0, 2, 1]
    with pytest.raises(ValidationFailed) as info:
        parse_data(doc)
    assert info.value.verdict is not None
    assert not info.value.verdict.ok


def test_invalid_modular_data_fails_validation():
    doc = data_to_json(su2_modular_data(2))
    doc["S"][0][1], doc["S"][1][0] = doc["S"][1][0], cyclo_to_json(rat(9))
    with pytest.raises(ValidationFailed) as info:
        parse_data(doc)
    assert info.value.verdict.first_failure.name == "symmetry"


def test_gauge_structural_validation_at_load():
    doc = data_to_json(sample_gauge())
    doc["mu"] = [t for t in doc["mu"] if (t[0], t[1]) != (1, 0)]
    with pytest.raises(MissingPair):
        parse_data(doc)


def test_gauge_value_failures_load_fine():
    # a broken cocycle is a solve-time verdict, not a load error
    doc = data_to_json(sample_gauge())
    for t in doc["mu"]:
        if (t[0], t[1]) == (0, 1):
            t[2] = cyclo_to_json(rat(99))
    gp = parse_data(doc)
    assert isinstance(gp, GaugeProblem)


def test_gauge_duplicate_pair_rejected():
    doc = data_to_json(sample_gauge())
    doc["mu"].append(doc["mu"][0])
    with pytest.raises(SchemaError):
        parse_data(doc)


def test_graph_family_tag_survives():
    g = d_graph(5)
    doc = data_to_json(g)
    assert doc["family"] == "D:5"
    assert parse_data(doc).family == "D:5"


def test_invariant_partial_entries_round_trip():
    Z = InvariantMatrix.from_rows(
        [[1, None, 0], [None, 2, None], [0, None, 1]],
        provenance="diagonal-built",
    )
    back = parse_data(data_to_json(Z))
    assert back == Z
    assert back.provenance == "diagonal-built"
