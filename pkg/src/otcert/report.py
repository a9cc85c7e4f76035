"""Serialization helpers: balls, elements and polynomials to JSON-ready values."""

from __future__ import annotations

import math

import mpmath

from .balls import Ball

SCHEMA_VERSION = 1


def error_exponent(rad) -> int | None:
    """Smallest e with rad <= 2^e (None for an exact value)."""
    if rad == 0:
        return None
    return int(math.ceil(float(mpmath.log(rad, 2))))


def ball_to_dict(b: Ball, digits: int = 30) -> dict:
    mid = b.mid
    if isinstance(mid, mpmath.mpc):
        value = {"re": mpmath.nstr(mid.real, digits), "im": mpmath.nstr(mid.imag, digits)}
    else:
        value = mpmath.nstr(mid, digits)
    return {
        "value": value,
        "radius": mpmath.nstr(b.rad, 3),
        "error_exponent": error_exponent(b.rad),
    }


def element_to_list(a) -> list[str]:
    return [str(c) for c in a.coords]


def poly_to_list(p) -> list[str]:
    return [str(c) for c in p.coeffs]


_BALL = {
    "type": "object",
    "required": ["value", "radius", "error_exponent"],
    "properties": {
        "value": {
            "oneOf": [
                {"type": "string"},
                {"type": "object", "required": ["re", "im"], "properties": {"re": {"type": "string"}, "im": {"type": "string"}}},
            ]
        },
        "radius": {"type": "string"},
        "error_exponent": {"type": ["integer", "null"]},
    },
}
_VECTOR = {"type": "array", "items": {"type": "string"}}
_NULLABLE_OBJECT = {"type": ["object", "null"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "otcert report",
    "type": "object",
    "required": [
        "schema_version", "command", "status", "exit_code", "spec", "config", "field", "signature",
        "units", "admissibility", "primitivity", "certificate", "witness", "orbit", "errors",
    ],
    "additionalProperties": False,
    "$defs": {"ball": _BALL},
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["analyze", "certify", "witness", "orbit"]},
        "status": {
            "enum": [
                "CertifiedNoSubvarieties", "HypothesisRefuted", "HeuristicallyCertified",
                "Valid", "Sampled", "Invalid", "InternalError",
            ]
        },
        "exit_code": {"enum": [0, 1, 2, 3, 4]},
        "spec": _NULLABLE_OBJECT,
        "config": _NULLABLE_OBJECT,
        "field": _NULLABLE_OBJECT,
        "signature": {
            "type": ["object", "null"],
            "required": ["s", "t"],
            "properties": {"s": {"type": "integer"}, "t": {"type": "integer"}},
        },
        "units": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["element", "norm", "is_unit", "totally_positive"],
                "properties": {"element": _VECTOR, "norm": {"type": "string"}},
            },
        },
        "admissibility": {
            "type": ["object", "null"],
            "required": ["status", "matrix", "determinant", "certified_nonzero", "precision_bits"],
            "properties": {
                "status": {"enum": ["pass", "fail", "indeterminate"]},
                "matrix": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/ball"}}},
                "determinant": {"$ref": "#/$defs/ball"},
            },
        },
        "primitivity": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "element", "minpoly", "minpoly_degree", "primitive"],
            },
        },
        "certificate": {
            "type": ["object", "null"],
            "required": ["status", "evidence", "diagnostics", "witness"],
            "properties": {
                "status": {"enum": ["CertifiedNoSubvarieties", "HypothesisRefuted", "HeuristicallyCertified"]},
                "witness": {
                    "type": ["object", "null"],
                    "required": ["exponents", "element", "minpoly", "minpoly_degree"],
                },
            },
        },
        "witness": {
            "type": ["object", "null"],
            "required": ["witness_unit", "coincidence_partition", "free_coordinates", "fixed_point", "identity_holds"],
            "properties": {"fixed_point": {"type": "array", "items": {"$ref": "#/$defs/ball"}}},
        },
        "orbit": {
            "type": ["object", "null"],
            "required": ["size", "word_bound", "min_distance", "points", "words"],
        },
        "errors": {"type": "array", "items": {"type": "string"}},
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}
