"""JSON corpus of atoms, variety expressions, motive complexes and Brauer fixtures.

Every file is one JSON object with a ``kind`` field:

* ``atom``: ``{name, ell, dim, components, H: {q: module}, duality, count_poly}``
* ``expression``: ``{name, expr}`` where ``expr`` is a node of kind ``atom``, ``product``
  (``factors``), ``union`` (``parts``) or ``complement`` (``ambient``, ``closed``, ``codim``,
  optional ``gysin: {q: matrix}``)
* ``complex``: ``{name, terms: {i: {expr, twist}}, diffs: {i: {q: matrix}}}``
* ``brauer``: ``{name, motive: {expr, twist}, input: module}``

Modules are written as in ``FgModule.parse`` (``"Z^10 + Z/2"``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

from weightk import motif
from weightk.errors import InputError, InvalidTable, SchemaError
from weightk.matrix import matrix_from_json
from weightk.motif import (
    AtomExpr,
    AtomRegistry,
    CohTable,
    Complement,
    DisjointUnion,
    MotiveComplex,
    MotiveMap,
    Product,
    PureMotive,
    VarietyExpr,
)
from weightk.zmod import FgModule


@dataclass
class BrauerFixture:
    name: str
    motive: PureMotive
    input: FgModule


@dataclass
class Corpus:
    atoms: AtomRegistry = field(default_factory=AtomRegistry)
    expressions: dict[str, VarietyExpr] = field(default_factory=dict)
    complexes: dict[str, MotiveComplex] = field(default_factory=dict)
    brauer: dict[str, BrauerFixture] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.files


def builtin_corpus_dir() -> Path:
    return Path(str(resources.files("weightk") / "data" / "corpus"))


def builtin_config_path() -> Path:
    return Path(str(resources.files("weightk") / "data" / "config.json"))


def _files(paths: Iterable[str | Path]) -> list[Path]:
    out: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            out.extend(sorted(p.rglob("*.json")))
        elif p.exists():
            out.append(p)
        else:
            raise SchemaError(p, "path", "no such file or directory")
    return out


_ORDER = {"atom": 0, "expression": 1, "complex": 2, "brauer": 3}


def load_corpus(paths: Iterable[str | Path]) -> Corpus:
    """Load atoms first, then expressions, complexes and Brauer fixtures."""
    docs = []
    for path in _files(paths):
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(path, "json", str(exc)) from None
        if not isinstance(data, dict):
            raise SchemaError(path, "kind", "top level must be an object")
        kind = data.get("kind")
        if kind not in _ORDER:
            raise SchemaError(path, "kind", f"unknown kind {kind!r}")
        docs.append((_ORDER[kind], str(path), path, data))
    corpus = Corpus()
    for _, _, path, data in sorted(docs, key=lambda t: t[:2]):
        _load_doc(corpus, path, data)
        corpus.files.append(str(path))
    return corpus


def load_file(path: str | Path, corpus: Corpus | None = None) -> tuple[Corpus, str, Any]:
    """Load one file against ``corpus`` (the built-in one by default); returns the new entry."""
    corpus = corpus or load_corpus([builtin_corpus_dir()])
    path = Path(path)
    if not path.is_file():
        raise SchemaError(path, "path", "no such file")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(path, "json", str(exc)) from None
    if not isinstance(data, dict) or data.get("kind") not in _ORDER:
        raise SchemaError(path, "kind", "missing or unknown kind")
    name = _load_doc(corpus, path, data)
    registry = {"atom": None, "expression": corpus.expressions, "complex": corpus.complexes,
                "brauer": corpus.brauer}[data["kind"]]
    entry = AtomExpr(name) if registry is None else registry[name]
    return corpus, data["kind"], entry


def _req(data: dict, key: str, path, typ=None):
    if key not in data:
        raise SchemaError(path, key, "missing")
    value = data[key]
    if typ is not None and not isinstance(value, typ):
        raise SchemaError(path, key, f"expected {typ.__name__ if isinstance(typ, type) else typ}")
    return value


def _module(text, path, fld) -> FgModule:
    if not isinstance(text, str):
        raise SchemaError(path, fld, "module must be a string")
    try:
        return FgModule.parse(text)
    except ValueError as exc:
        raise SchemaError(path, fld, str(exc)) from None


def _int_key(k: str, path, fld) -> int:
    try:
        return int(k)
    except ValueError:
        raise SchemaError(path, fld, f"non-integer key {k!r}") from None


def _load_doc(corpus: Corpus, path, data: dict) -> str:
    kind = data["kind"]
    name = _req(data, "name", path, str)
    if kind == "atom":
        H = {_int_key(q, path, "H"): _module(m, path, f"H.{q}") for q, m in _req(data, "H", path, dict).items()}
        count = data.get("count_poly")
        if count is not None and not (isinstance(count, list) and all(isinstance(c, int) for c in count)):
            raise SchemaError(path, "count_poly", "expected a list of integers")
        table = CohTable(
            ell=_req(data, "ell", path, int),
            dim=_req(data, "dim", path, int),
            components=_req(data, "components", path, int),
            H=H,
            duality=bool(data.get("duality", True)),
        )
        corpus.atoms.register_atom(name, table, count)  # InvalidTable propagates
    elif kind == "expression":
        expr = expr_from_json(_req(data, "expr", path, dict), path, "expr")
        motif.validate_expr(expr, corpus.atoms)
        corpus.expressions[name] = expr
    elif kind == "complex":
        corpus.complexes[name] = _complex(corpus, data, path, name)
    elif kind == "brauer":
        M = _motive(corpus, _req(data, "motive", path, dict), path, "motive")
        corpus.brauer[name] = BrauerFixture(name, M, _module(_req(data, "input", path), path, "input"))
    return name


def expr_from_json(node: Any, path="<expr>", fld: str = "expr") -> VarietyExpr:
    if not isinstance(node, dict):
        raise SchemaError(path, fld, "expression node must be an object")
    kind = node.get("kind")
    if kind == "atom":
        return AtomExpr(_req(node, "name", path, str))
    if kind in ("product", "union"):
        key = "factors" if kind == "product" else "parts"
        items = _req(node, key, path, list)
        if len(items) < 2:
            raise SchemaError(path, f"{fld}.{key}", "needs at least two entries")
        exprs = [expr_from_json(x, path, f"{fld}.{key}") for x in items]
        out = exprs[0]
        for e in exprs[1:]:
            out = Product(out, e) if kind == "product" else DisjointUnion(out, e)
        return out
    if kind == "complement":
        gysin = node.get("gysin")
        if gysin is not None:
            if not isinstance(gysin, dict):
                raise SchemaError(path, f"{fld}.gysin", "expected {q: matrix}")
            gysin = {_int_key(q, path, f"{fld}.gysin"): _matrix(m, path, f"{fld}.gysin.{q}")
                     for q, m in gysin.items()}
        return Complement(
            expr_from_json(_req(node, "ambient", path), path, f"{fld}.ambient"),
            expr_from_json(_req(node, "closed", path), path, f"{fld}.closed"),
            _req(node, "codim", path, int),
            gysin,
        )
    raise SchemaError(path, f"{fld}.kind", f"unknown node kind {kind!r}")


def expr_to_json(expr: VarietyExpr) -> dict:
    if isinstance(expr, AtomExpr):
        return {"kind": "atom", "name": expr.name}
    if isinstance(expr, Product):
        return {"kind": "product", "factors": [expr_to_json(expr.left), expr_to_json(expr.right)]}
    if isinstance(expr, DisjointUnion):
        return {"kind": "union", "parts": [expr_to_json(expr.left), expr_to_json(expr.right)]}
    out = {"kind": "complement", "ambient": expr_to_json(expr.ambient),
           "closed": expr_to_json(expr.closed), "codim": expr.codim}
    if expr.gysin:
        out["gysin"] = {str(q): m.to_json() for q, m in sorted(expr.gysin.items())}
    return out


def _matrix(rows, path, fld):
    try:
        return matrix_from_json(rows)
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, fld, str(exc)) from None


def _motive(corpus: Corpus, node: dict, path, fld) -> PureMotive:
    expr = expr_from_json(_req(node, "expr", path, dict), path, f"{fld}.expr")
    twist = node.get("twist", 0)
    if not isinstance(twist, int) or twist < 0:
        raise SchemaError(path, f"{fld}.twist", "twist must be a non-negative integer")
    return motif.tate_twist(motif.pure_motive_of(expr, corpus.atoms), twist) if twist else \
        motif.pure_motive_of(expr, corpus.atoms)


def _complex(corpus: Corpus, data: dict, path, name: str) -> MotiveComplex:
    terms = {_int_key(i, path, "terms"): _motive(corpus, node, path, f"terms.{i}")
             for i, node in _req(data, "terms", path, dict).items()}
    diffs = {}
    for i, comps in data.get("diffs", {}).items():
        i = _int_key(i, path, "diffs")
        if i not in terms or i + 1 not in terms:
            raise SchemaError(path, f"diffs.{i}", "differential between missing terms")
        mats = {_int_key(q, path, f"diffs.{i}"): _matrix(m, path, f"diffs.{i}.{q}") for q, m in comps.items()}
        try:
            diffs[i] = MotiveMap(terms[i], terms[i + 1], mats)
        except InputError as exc:
            raise SchemaError(path, f"diffs.{i}", str(exc)) from None
    return MotiveComplex(terms, diffs, name)


__all__ = ["BrauerFixture", "Corpus", "InvalidTable", "builtin_config_path", "builtin_corpus_dir",
           "expr_from_json", "expr_to_json", "load_corpus", "load_file"]
