"""JSON interchange for algebra inputs and report rendering.

Rationals travel as exact strings "p/q" (never floats).  Law entries are
1-based triples {i, j, k, c} meaning μ(e_j, e_k) ∋ c·e_i.  The same report
dictionary feeds both the JSON and the text rendering, so the two always
agree on every number.
"""

from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .laws import Law, OperadType, Symmetry


class SchemaError(ValueError):
    pass


_TERM_SCHEMA = {
    "type": "object",
    "required": ["i", "j", "k", "c"],
    "properties": {
        "i": {"type": "integer", "minimum": 1},
        "j": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "c": {"type": "string"},
    },
    "additionalProperties": False,
}

ALGEBRA_INPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "AlgebraInput",
    "type": "object",
    "required": ["dim", "symmetry", "type", "law"],
    "properties": {
        "name": {"type": "string"},
        "dim": {"type": "integer", "minimum": 1},
        "symmetry": {"enum": ["none", "symmetric", "skew"]},
        "type": {"enum": ["assoc", "comm", "lie", "leib", "custom"]},
        "law": {"type": "array", "items": _TERM_SCHEMA},
        "torus": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}},
        },
        "custom_presentation": {
            "type": "object",
            "required": ["target_dim", "terms"],
            "properties": {
                "target_dim": {"type": "integer", "minimum": 0},
                "terms": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["a", "p", "q", "c"],
                        "properties": {
                            "a": {"type": "integer", "minimum": 1},
                            "p": {"type": "integer", "minimum": 1},
                            "q": {"type": "integer", "minimum": 1},
                            "c": {"type": "string"},
                        },
                        "additionalProperties": False,
                    },
                },
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


def rat_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational literal {s!r}: {exc}") from exc


def vec_json(v):
    """Sparse vector -> sorted [[index, "p/q"], ...] (0-based indices)."""
    return [[i, rat_str(x)] for i, x in sorted(v.items())]


def subspace_json(S):
    return {
        "ambient_dim": S.ambient_dim,
        "dim": S.dim,
        "basis": [vec_json(row) for row in S.rows],
    }


def char_json(ch):
    return [[list(w), n] for w, n in sorted(ch.items())]


def matrix_json(rows):
    """Dense matrix of Fractions -> rows of strings."""
    return [[rat_str(x) for x in row] for row in rows]


# ---------------------------------------------------------------------------
# algebra input parsing / rendering
# ---------------------------------------------------------------------------

def validate_input(data):
    try:
        jsonschema.validate(data, ALGEBRA_INPUT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"input does not match the AlgebraInput schema: {exc.message}")


def parse_algebra_input(data):
    """AlgebraInput dict -> (law, optype, torus, custom_presentation_data).

    Indices are converted from the 1-based interchange convention to the
    0-based internal one; rationals are parsed exactly.
    """
    validate_input(data)
    dim = data["dim"]
    symmetry = Symmetry(data["symmetry"])
    optype = OperadType(data["type"])
    entries = {}
    for term in data["law"]:
        i, j, k = term["i"] - 1, term["j"] - 1, term["k"] - 1
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise SchemaError(f"law term index out of range: {term}")
        key = (i, j, k)
        entries[key] = entries.get(key, Fraction(0)) + parse_rat(term["c"])
    try:
        law = Law.from_entries(dim, symmetry, entries)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    torus = None
    if "torus" in data:
        torus = tuple(tuple(w) for w in data["torus"])
        if len(torus) != dim:
            raise SchemaError("torus must list one weight tuple per basis vector")
    custom = None
    if "custom_presentation" in data:
        cp = data["custom_presentation"]
        terms = {}
        for t in cp["terms"]:
            key = (t["a"] - 1, t["p"] - 1, t["q"] - 1)
            terms[key] = terms.get(key, Fraction(0)) + parse_rat(t["c"])
        custom = {"target_dim": cp["target_dim"], "tensor": terms}
    if optype is OperadType.CUSTOM and custom is None:
        raise SchemaError("type 'custom' requires a custom_presentation block")
    return law, optype, torus, custom


def render_algebra_input(law, optype, torus=None, name=None, custom=None):
    """Canonical AlgebraInput dict for a law (inverse of parse)."""
    terms = []
    for (i, j, k), val in sorted(law.c.items()):
        if law.symmetry is not Symmetry.NONE and j > k:
            continue
        terms.append({"i": i + 1, "j": j + 1, "k": k + 1, "c": rat_str(val)})
    out = {
        "dim": law.dim,
        "symmetry": law.symmetry.value,
        "type": optype.value,
        "law": terms,
    }
    if name:
        out["name"] = name
    if torus is not None:
        out["torus"] = [list(w) for w in torus]
    if custom is not None:
        out["custom_presentation"] = {
            "target_dim": custom["target_dim"],
            "terms": [{"a": a + 1, "p": p + 1, "q": q + 1, "c": rat_str(v)}
                      for (a, p, q), v in sorted(custom["tensor"].items())],
        }
    return out


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------

def render_json(report):
    return json.dumps(report, indent=2, sort_keys=False)


def render_text(report):
    lines = []

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, dict):
                    lines.append(f"{prefix}{k}:")
                    walk(v, prefix + "  ")
                elif isinstance(v, list) and v and isinstance(v[0], dict):
                    lines.append(f"{prefix}{k}:")
                    for item in v:
                        lines.append(f"{prefix}  -")
                        walk(item, prefix + "    ")
                else:
                    lines.append(f"{prefix}{k}: {_leaf(v)}")
        else:
            lines.append(f"{prefix}{_leaf(obj)}")

    def _leaf(v):
        if isinstance(v, (list, tuple)):
            return json.dumps(v)
        if isinstance(v, bool):
            return "true" if v else "false"
        if v is None:
            return "null"
        return str(v)

    walk(report, "")
    return "\n".join(lines) + "\n"
