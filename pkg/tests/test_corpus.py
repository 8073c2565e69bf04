from __future__ import annotations

import json

import pytest

from weightk.corpus import builtin_corpus_dir, expr_from_json, expr_to_json, load_corpus, load_file
from weightk.errors import InvalidTable, MalformedExpression, SchemaError
from weightk.zmod import FgModule


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


def test_empty_corpus():
    c = load_corpus([])
    assert c.is_empty()
    assert not c.expressions and not c.complexes and not c.brauer


def test_builtin_corpus():
    c = load_corpus([builtin_corpus_dir()])
    assert {"pt", "P1", "P2", "E", "C1"} <= set(c.atoms.names())
    assert {"pt", "P1", "P2", "Gm", "A1", "A2", "A3", "E"} <= set(c.expressions)
    assert len(c.atoms.names()) + len(c.expressions) >= 6
    assert {"Gm", "A1"} <= set(c.complexes)
    assert set(c.brauer) == {"E", "L", "pt"}
    assert c.brauer["E"].input == FgModule(0, (2,))


def test_torsion_in_h1_rejected(tmp_path):
    p = write(tmp_path, "bad.json", {"kind": "atom", "name": "X", "ell": 2, "dim": 1, "components": 1,
                                      "H": {"0": "Z", "1": "Z/2", "2": "Z"}, "duality": False})
    with pytest.raises(InvalidTable) as exc:
        load_corpus([p])
    assert exc.value.invariant == "H1-torsion-free"


@pytest.mark.parametrize("data,field", [
    ({"kind": "atom", "ell": 2, "dim": 0, "components": 1, "H": {"0": "Z"}}, "name"),
    ({"kind": "atom", "name": "X", "ell": 2, "dim": 0, "components": 1, "H": {"0": "Z?"}}, "H.0"),
    ({"kind": "atom", "name": "X", "ell": 2, "dim": 0, "components": 1, "H": {"a": "Z"}}, "H"),
    ({"kind": "widget", "name": "X"}, "kind"),
    ({"kind": "expression", "name": "X", "expr": {"kind": "blob"}}, "expr.kind"),
    ({"kind": "expression", "name": "X", "expr": {"kind": "product", "factors": [{"kind": "atom", "name": "pt"}]}},
     "expr.factors"),
    ({"kind": "complex", "name": "X", "terms": {"0": {"expr": {"kind": "atom", "name": "pt"}}},
      "diffs": {"0": {"0": [[1]]}}}, "diffs.0"),
    ({"kind": "brauer", "name": "X", "motive": {"expr": {"kind": "atom", "name": "pt"}, "twist": -1},
      "input": "0"}, "motive.twist"),
])
def test_schema_errors(tmp_path, data, field):
    p = write(tmp_path, "x.json", data)
    with pytest.raises(SchemaError) as exc:
        load_corpus([p])
    assert exc.value.field == field
    assert str(p) in str(exc.value)


def test_bad_json_and_missing_path(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(SchemaError) as exc:
        load_corpus([p])
    assert exc.value.field == "json"
    with pytest.raises(SchemaError) as exc:
        load_corpus([tmp_path / "missing.json"])
    assert exc.value.field == "path"
    with pytest.raises(SchemaError):
        load_file(tmp_path / "missing.json")


def test_unknown_atom_in_expression(tmp_path):
    p = write(tmp_path, "x.json", {"kind": "expression", "name": "X", "expr": {"kind": "atom", "name": "Y"}})
    with pytest.raises(MalformedExpression):
        load_corpus([p])


def test_atoms_load_before_expressions(tmp_path):
    # alphabetical order would read the expression first
    write(tmp_path, "a_expr.json", {"kind": "expression", "name": "Z2", "expr": {"kind": "atom", "name": "zz"}})
    write(tmp_path, "z_atom.json", {"kind": "atom", "name": "zz", "ell": 3, "dim": 0, "components": 1,
                                     "H": {"0": "Z"}, "count_poly": [1]})
    c = load_corpus([tmp_path])
    assert "Z2" in c.expressions and "zz" in c.atoms


def test_expression_round_trip():
    c = load_corpus([builtin_corpus_dir()])
    for e in c.expressions.values():
        assert expr_from_json(expr_to_json(e)) == e


def test_load_file_returns_entry():
    path = builtin_corpus_dir() / "complexes" / "Gm.json"
    corpus, kind, entry = load_file(path)
    assert kind == "complex" and entry.degrees() == [0, 1]
