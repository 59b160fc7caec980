"""Report envelope shared by every command, its JSON schema and a table renderer."""

import json

import jsonschema

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "corrcoh report",
    "type": "object",
    "required": ["command", "status", "caps", "result"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": ["homology", "homotopy", "verify", "distance"]},
        "status": {"enum": ["ok", "fail", "undecided"]},
        "caps": {
            "type": "object",
            "additionalProperties": {"type": ["integer", "string", "null"]},
        },
        "result": {"type": "object"},
        "standin": {"type": "boolean"},
        "label": {"type": "string"},
    },
    "allOf": [
        {
            "if": {"properties": {"command": {"const": "homology"}}},
            "then": {"properties": {"result": {
                "type": "object",
                "required": ["ranks", "groups"],
                "properties": {
                    "ranks": {"type": "array", "items": {"type": "integer"}},
                    "groups": {"type": "array", "items": {
                        "type": "object",
                        "required": ["degree", "free_rank", "torsion", "text"],
                        "properties": {
                            "degree": {"type": "integer"},
                            "free_rank": {"type": "integer"},
                            "torsion": {"type": "array", "items": {"type": "integer"}},
                            "text": {"type": "string"},
                        },
                    }},
                },
            }}},
        },
        {
            "if": {"properties": {"command": {"const": "homotopy"}}},
            "then": {"properties": {"result": {
                "type": "object",
                "required": ["verdict"],
                "properties": {
                    "verdict": {"enum": ["yes", "no-within-cap", "undecided"]},
                    "witness": {"type": "array", "items": {"type": "string"}},
                },
            }}},
        },
        {
            "if": {"properties": {"command": {"const": "verify"}}},
            "then": {"properties": {"result": {
                "type": "object",
                "required": ["lemmas"],
                "properties": {"lemmas": {"type": "array", "items": {
                    "type": "object",
                    "required": ["name", "ok", "summary", "dump"],
                    "properties": {
                        "name": {"type": "string"},
                        "ok": {"type": "boolean"},
                        "summary": {"type": "string"},
                        "dump": {"type": "array", "items": {"type": "string"}},
                    },
                }}},
            }}},
        },
        {
            "if": {"properties": {"command": {"const": "distance"}}},
            "then": {
                "required": ["standin", "label"],
                "properties": {"result": {
                    "type": "object",
                    "required": ["value", "certificate"],
                    "properties": {
                        "value": {"type": "string"},
                        "certificate": {"type": "object"},
                    },
                }},
            },
        },
    ],
}


def make(command, status, caps, result, **extra):
    rep = {"command": command, "status": status, "caps": dict(caps), "result": result}
    rep.update(extra)
    validate(rep)
    return rep


def validate(rep):
    jsonschema.validate(rep, SCHEMA)
    return rep


def to_json(rep):
    return json.dumps(rep, indent=2, sort_keys=True)


def from_json(text):
    return validate(json.loads(text))


def _table_lines(value, indent=""):
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                yield f"{indent}{k}:"
                yield from _table_lines(v, indent + "  ")
            else:
                yield f"{indent}{k}: {_scalar(v)}"
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)) and v:
                yield f"{indent}-"
                yield from _table_lines(v, indent + "  ")
            else:
                yield f"{indent}- {_scalar(v)}"
    else:
        yield f"{indent}{_scalar(value)}"


def _scalar(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def to_table(rep):
    return "\n".join(_table_lines(rep))
