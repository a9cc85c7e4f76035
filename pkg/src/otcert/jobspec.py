"""Job specifications: a small key-value text format, a JSON alternative and built-ins.

Key-value format, one entry per line, ``#`` starts a comment::

    poly = -2 0 0 1          # constant term first: X^3 - 2
    unit = -1 1 0            # theta - 1, power-basis coordinates
    subfield = 0 1 0         # optional hint, repeatable
    conjugate = 0            # optional, one flag per complex place
    precision_bits = 192

Vectors may be separated by spaces or commas and may be wrapped in brackets.
A document whose first non-blank character is ``{`` is read as JSON with the
keys ``poly``, ``units``, ``subfields``, ``conjugate`` and the numeric settings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError

SETTINGS = {
    "precision_bits": int,
    "exponent_bound": int,
    "height_bound": int,
    "word_bound": int,
    "seed": int,
    "tolerance": float,
}
FORMATS = ("text", "json")


@dataclass
class JobSpec:
    poly: list[int]
    units: list[list[Fraction]]
    subfields: list[list[Fraction]] = field(default_factory=list)
    conjugate: list[bool] | None = None
    settings: dict = field(default_factory=dict)
    output_format: str | None = None
    name: str | None = None

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "poly": list(self.poly),
            "units": [[str(c) for c in u] for u in self.units],
            "subfields": [[str(c) for c in v] for v in self.subfields],
            "conjugate": None if self.conjugate is None else [int(c) for c in self.conjugate],
            "settings": dict(self.settings),
        }

    def to_text(self) -> str:
        lines = [f"poly = {' '.join(map(str, self.poly))}"]
        lines += [f"unit = {' '.join(map(str, u))}" for u in self.units]
        lines += [f"subfield = {' '.join(map(str, v))}" for v in self.subfields]
        if self.conjugate is not None:
            lines.append(f"conjugate = {' '.join(str(int(c)) for c in self.conjugate)}")
        lines += [f"{k} = {v}" for k, v in self.settings.items()]
        return "\n".join(lines) + "\n"


def _split_vector(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("[") != text.endswith("]"):
        raise ValueError("unbalanced brackets")
    text = text.strip("[]")
    return [tok for tok in text.replace(",", " ").split() if tok]


def _to_int(tok) -> int:
    if isinstance(tok, bool):
        raise ValueError
    if isinstance(tok, float) and not tok.is_integer():
        raise ValueError
    return int(tok)


def _int_vector(text, line, key) -> list[int]:
    try:
        toks = _split_vector(text) if isinstance(text, str) else list(text)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected a vector ({exc})", line, key) from None
    out = []
    for tok in toks:
        try:
            out.append(_to_int(tok))
        except (TypeError, ValueError):
            raise ParseError(f"expected an integer, got {tok!r}", line, key) from None
    if not out:
        raise ParseError("empty vector", line, key)
    return out


def _rational_vector(text, line, key) -> list[Fraction]:
    try:
        toks = _split_vector(text) if isinstance(text, str) else list(text)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected a vector ({exc})", line, key) from None
    out = []
    for tok in toks:
        try:
            if isinstance(tok, (bool, float)):
                raise ValueError
            out.append(Fraction(tok))
        except (TypeError, ValueError, ZeroDivisionError):
            raise ParseError(f"expected an integer or fraction, got {tok!r}", line, key) from None
    if not out:
        raise ParseError("empty vector", line, key)
    return out


def _setting(key, value, line):
    try:
        if SETTINGS[key] is int:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError
            return int(value)
        return float(value)
    except (TypeError, ValueError):
        raise ParseError(f"malformed number {value!r}", line, key) from None


def _validate(spec: JobSpec, lines: dict) -> JobSpec:
    if not spec.poly:
        raise ParseError("missing 'poly' entry", None, "poly")
    n = spec.degree
    if n < 1:
        raise ParseError("polynomial must have degree at least 1", lines.get("poly"), "poly")
    if spec.poly[-1] != 1:
        raise ParseError(
            f"polynomial must be monic (leading coefficient {spec.poly[-1]}; coefficients are constant-first)",
            lines.get("poly"),
            "poly",
        )
    for key, vectors in (("unit", spec.units), ("subfield", spec.subfields)):
        for k, vec in enumerate(vectors):
            if len(vec) != n:
                raise ParseError(
                    f"vector has {len(vec)} entries, expected {n}", lines.get((key, k)), key
                )
    if not spec.units:
        raise ParseError("no 'unit' entries", None, "unit")
    if spec.output_format is not None and spec.output_format not in FORMATS:
        raise ParseError(f"unknown format {spec.output_format!r}", lines.get("format"), "format")
    return spec


def parse_text(text: str) -> JobSpec:
    spec = JobSpec([], [])
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"expected 'key = value', got {body!r}", lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        key = key.lower().replace("-", "_")
        if not value:
            raise ParseError("missing value", lineno, key)
        if key == "poly":
            if "poly" in lines:
                raise ParseError("duplicate 'poly' entry", lineno, key)
            spec.poly = _int_vector(value, lineno, key)
            lines["poly"] = lineno
        elif key in ("unit", "units"):
            lines[("unit", len(spec.units))] = lineno
            spec.units.append(_rational_vector(value, lineno, "unit"))
        elif key in ("subfield", "subfields"):
            lines[("subfield", len(spec.subfields))] = lineno
            spec.subfields.append(_rational_vector(value, lineno, "subfield"))
        elif key == "conjugate":
            spec.conjugate = [bool(c) for c in _int_vector(value, lineno, key)]
        elif key == "format":
            spec.output_format = value
            lines["format"] = lineno
        elif key == "name":
            spec.name = value
        elif key in SETTINGS:
            spec.settings[key] = _setting(key, value, lineno)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, key)
    return _validate(spec, lines)


def parse_json(text: str) -> JobSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg}, column {exc.colno})", exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    known = {"poly", "units", "subfields", "conjugate", "format", "name", *SETTINGS}
    for key in doc:
        if key not in known:
            raise ParseError(f"unknown key {key!r}", None, key)
    poly = _int_vector(doc.get("poly", []), None, "poly") if doc.get("poly") else []
    units = doc.get("units", [])
    subs = doc.get("subfields", [])
    if not isinstance(units, list) or not isinstance(subs, list):
        raise ParseError("'units' and 'subfields' must be lists of vectors")
    spec = JobSpec(
        poly,
        [_rational_vector(u, None, "units") for u in units],
        [_rational_vector(v, None, "subfields") for v in subs],
        None if doc.get("conjugate") is None else [bool(c) for c in _int_vector(doc["conjugate"], None, "conjugate")],
        {k: _setting(k, doc[k], None) for k in SETTINGS if k in doc},
        doc.get("format"),
        doc.get("name"),
    )
    return _validate(spec, {})


def parse_jobspec(text: str) -> JobSpec:
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)


# built-in examples ------------------------------------------------------------

BUILTIN_TEXT = {
    "inoue": """\
# Inoue surface: K = Q(2^(1/3)), U generated by theta - 1
name = inoue
poly = -2 0 0 1
unit = -1 1 0
""",
    "ot6": """\
# K = Q(2^(1/6)); u1 = theta^2 - 1 lies in Q(2^(1/3)), u2 = (theta - 1)^2 is primitive.
# The second complex coordinate uses conj(tau_1) so that the diagonal map
# from the Inoue surface is holomorphic.
name = ot6
poly = -2 0 0 0 0 0 1
unit = -1 0 1 0 0 0
unit = 1 -2 1 0 0 0
conjugate = 0 1
""",
    "ot6-primitive": """\
# K = Q(2^(1/6)) with U generated by (theta - 1)^2 and (3 + 2 theta^3)(theta^2 - 1);
# no element of U other than 1 is known to lie in a proper subfield.
name = ot6-primitive
poly = -2 0 0 0 0 0 1
unit = 1 -2 1 0 0 0
unit = -3 0 3 -2 0 2
conjugate = 0 1
""",
}


def builtin(name: str) -> JobSpec:
    try:
        return parse_text(BUILTIN_TEXT[name])
    except KeyError:
        raise ParseError(f"unknown example {name!r}; choose from {', '.join(sorted(BUILTIN_TEXT))}") from None
