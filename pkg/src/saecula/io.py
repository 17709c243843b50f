"""JSON ingestion and output records for diagrams, complexes and group chains."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import jsonschema

from .abgrp import AbHom, AbPresentation, Coefficients, QuotientShape
from .diagram import ChainDiagram, DiagramError, Interval
from .fingroup import FiniteGroup, GroupDiagram, GroupError, GroupHom
from .homology import Cell, ComplexError, FilteredComplex


class SchemaError(ValueError):
    """Input does not match the expected JSON shape."""


class ValidationError(ValueError):
    """Input is well-formed JSON but mathematically invalid."""


_SCALAR = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_COEFF = {"type": "string", "pattern": r"^(z|q|fp:\d+|zmod:\d+)$"}

DIAGRAM_SCHEMA = {
    "type": "object",
    "required": ["objects", "maps"],
    "properties": {
        "coeff": _COEFF,
        "objects": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["rank"],
                "properties": {
                    "rank": {"type": "integer", "minimum": 0},
                    "relations": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
                },
            },
        },
        "maps": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
        },
    },
}

COMPLEX_SCHEMA = {
    "type": "object",
    "required": ["cells"],
    "properties": {
        "coeff": _COEFF,
        "cells": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "dim", "grade"],
                "properties": {
                    "id": {"type": ["string", "integer"]},
                    "dim": {"type": "integer", "minimum": 0},
                    "grade": {"type": "number"},
                    "boundary": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "minItems": 2,
                            "maxItems": 2,
                            "prefixItems": [{"type": ["string", "integer"]}, {"type": "integer"}],
                        },
                    },
                },
            },
        },
    },
}

GROUP_SCHEMA = {
    "type": "object",
    "required": ["groups", "maps"],
    "properties": {
        "groups": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["table"],
                "properties": {
                    "table": {
                        "type": "array",
                        "minItems": 1,
                        "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    }
                },
            },
        },
        "maps": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}


def _validate(data: Any, schema: dict) -> None:
    try:
        jsonschema.validate(data, schema, cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as e:
        path = "/".join(str(x) for x in e.absolute_path)
        raise SchemaError(f"{path or '<root>'}: {e.message}") from None


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None


def _scalar(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


# ---------------------------------------------------------------------------
# parsing


def parse_diagram(data: Any, coeff: str | None = None) -> ChainDiagram:
    _validate(data, DIAGRAM_SCHEMA)
    c = Coefficients.parse(coeff or data.get("coeff", "z"))
    objs = []
    for i, o in enumerate(data["objects"]):
        rels = [[_scalar(x) for x in r] for r in o.get("relations", [])]
        try:
            objs.append(AbPresentation.make(o["rank"], rels, c))
        except ValueError as e:
            raise ValidationError(f"object {i + 1}: {e}") from None
    if len(data["maps"]) != len(objs) - 1:
        raise SchemaError(f"{len(objs)} objects need {len(objs) - 1} maps, got {len(data['maps'])}")
    maps = []
    for i, m in enumerate(data["maps"]):
        rows = [[_scalar(x) for x in r] for r in m]
        src, tgt = objs[i], objs[i + 1]
        if len(rows) != tgt.rank or any(len(r) != src.rank for r in rows):
            raise SchemaError(f"map {i + 1}: matrix must be {tgt.rank}x{src.rank}")
        try:
            maps.append(AbHom.make(src, tgt, rows))
        except ValueError as e:
            raise ValidationError(f"map {i + 1}: {e}") from None
    try:
        return ChainDiagram(objs, maps)
    except DiagramError as e:
        raise ValidationError(str(e)) from None


def parse_complex(data: Any, coeff: str | None = None) -> FilteredComplex:
    """Build a filtered complex; non-integral or non-positive grades are rank-compressed to 1..n."""
    _validate(data, COMPLEX_SCHEMA)
    c = coeff or data.get("coeff", "z")
    raw = [x["grade"] for x in data["cells"]]
    values = None
    if any(not float(g).is_integer() or g < 1 for g in raw):
        values = sorted(set(raw))
        rank = {v: i + 1 for i, v in enumerate(values)}
        grades = [rank[g] for g in raw]
    else:
        grades = [int(g) for g in raw]
    cells = [
        Cell(x["id"], x["dim"], g, tuple((f, k) for f, k in x.get("boundary", [])))
        for x, g in zip(data["cells"], grades)
    ]
    try:
        return FilteredComplex(cells, c, values)
    except ComplexError as e:
        raise ValidationError(str(e)) from None


def parse_group_diagram(data: Any) -> GroupDiagram:
    _validate(data, GROUP_SCHEMA)
    groups = []
    for i, g in enumerate(data["groups"]):
        try:
            groups.append(FiniteGroup(g["table"]))
        except GroupError as e:
            raise ValidationError(f"group {i + 1}: {e}") from None
    if len(data["maps"]) != len(groups) - 1:
        raise SchemaError(f"{len(groups)} groups need {len(groups) - 1} maps")
    maps = []
    for i, m in enumerate(data["maps"]):
        try:
            f = GroupHom(groups[i], groups[i + 1], tuple(m))
            f.check()
        except GroupError as e:
            raise ValidationError(f"map {i + 1}: {e}") from None
        maps.append(f)
    return GroupDiagram(groups, maps, check=False)


# ---------------------------------------------------------------------------
# serialization


def scalar_out(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def interval_out(iv: Interval, n: int) -> list:
    return [iv.p, "inf" if iv.q > n else iv.q]


def shape_out(shape: QuotientShape) -> dict:
    return {"free_rank": shape.free_rank, "torsion": list(shape.invariant_factors)}


def diagram_to_json(d: ChainDiagram) -> dict:
    return {
        "coeff": str(d.coeff),
        "objects": [
            {"rank": o.rank, "relations": [[scalar_out(x) for x in r] for r in o.relation_cols]}
            for o in d.objects
        ],
        "maps": [[[scalar_out(x) for x in f.matrix.row(i)] for i in range(f.matrix.rows)] for f in d.maps],
    }


def complex_to_json(X: FilteredComplex) -> dict:
    return {
        "coeff": str(X.coeff),
        "cells": [
            {"id": c.id, "dim": c.dim, "grade": c.grade, "boundary": [[f, k] for f, k in c.boundary]}
            for c in X.cells
        ],
    }


def group_diagram_to_json(d: GroupDiagram) -> dict:
    return {
        "groups": [{"table": [list(r) for r in G.table]} for G in d.groups],
        "maps": [list(f.images) for f in d.maps],
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
