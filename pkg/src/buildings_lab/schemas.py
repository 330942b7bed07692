"""JSON schemas for every CLI output, validated before emission.

The schemas pin the envelope of each report: required fields, primitive
types, and the status vocabularies. Free-form parts (per-item detail dicts,
witnesses) stay open so reports can grow without a schema bump.
"""

from __future__ import annotations

import jsonschema

__all__ = ["SCHEMAS", "validate_output"]

_STATUS = {"type": "string", "enum": ["pass", "fail", "unknown"]}
_INT = {"type": "integer"}
_NONNEG = {"type": "integer", "minimum": 0}
_STR = {"type": "string"}
_INT_ARRAY = {"type": "array", "items": _INT}
_STR_ARRAY = {"type": "array", "items": _STR}
_BOOL_ARRAY = {"type": "array", "items": {"type": "boolean"}}


def _obj(required: dict, **extra) -> dict:
    return {
        "type": "object",
        "required": sorted(required),
        "properties": required,
        **extra,
    }


SCHEMAS: dict[str, dict] = {
    "ring-info": _obj(
        {
            "ring": _STR,
            "symbol": _STR,
            "theta_square": _INT_ARRAY,
            "units": _STR_ARRAY,
            "minimal_norm_primes": _STR_ARRAY,
            "standard_primes": _STR_ARRAY,
        }
    ),
    "field": _obj(
        {
            "ring": _STR,
            "p": _STR,
            "key": _STR,
            "q": _NONNEG,
            "elements": _STR_ARRAY,
            "U": _INT_ARRAY,
            "cosets": {"type": "array", "items": _INT_ARRAY},
            "orbits": {"type": "array", "items": _INT_ARRAY},
        }
    ),
    "complex": _obj(
        {
            "key": _STR,
            "kind": _STR,
            "n": _NONNEG,
            "m": _NONNEG,
            "counts": _INT_ARRAY,
            "euler_characteristic": _INT,
            "cache_key": _STR,
        }
    ),
    "homology": _obj(
        {
            "complex": _STR,
            "counts": _INT_ARRAY,
            "components": _NONNEG,
            "ranks": _INT_ARRAY,
            "rank_exact": _BOOL_ARRAY,
            "betti": _INT_ARRAY,
            "betti_exact": _BOOL_ARRAY,
            "methods": {"type": "object"},
            "primes": _INT_ARRAY,
            "torsion": {
                "type": ["array", "null"],
                "items": _INT_ARRAY,
            },
        }
    ),
    "pi1": _obj(
        {
            "complex": _STR,
            "verdict": {"type": "string", "enum": ["trivial", "nontrivial", "unknown"]},
            "generators": _NONNEG,
            "relators": {"type": "array", "items": _INT_ARRAY},
            "abelianization": _obj({"free": _NONNEG, "torsion": _INT_ARRAY}),
        }
    ),
    "conditions": _obj(
        {
            "ring": _STR,
            "p": _STR,
            "key": _STR,
            "q": _NONNEG,
            "unit_index": _NONNEG,
            "classification": {
                "type": "string",
                "enum": [
                    "full-unit-image",
                    "conditions-1-to-5",
                    "neither",
                    "undetermined",
                ],
            },
            "conditions": {
                "type": "array",
                "items": _obj({"index": _NONNEG, "status": _STATUS}),
            },
            "four_loop": {"type": ["object", "null"]},
        }
    ),
    "scan": _obj(
        {
            "ring": _STR,
            "norm_max": _NONNEG,
            "rows": {
                "type": "array",
                "items": _obj(
                    {
                        "p": _STR,
                        "norm": _NONNEG,
                        "q": _NONNEG,
                        "unit_index": _NONNEG,
                        "classification": _STR,
                    }
                ),
            },
        }
    ),
    "ranks": _obj(
        {
            "ring": _STR,
            "p": _STR,
            "key": _STR,
            "variant": {"type": "string", "enum": ["cosets", "orbits"]},
            "rows": {
                "type": "array",
                "items": _obj(
                    {
                        "n": _NONNEG,
                        "recursive": _NONNEG,
                        "lower_bound": _NONNEG,
                        "brute_force": {"type": ["integer", "null"]},
                        "consistent": {"type": ["boolean", "null"]},
                    }
                ),
            },
        }
    ),
    "nu": _obj({"ring": _STR, "n": _NONNEG, "nu": _NONNEG}),
    "lift": _obj(
        {
            "ring": _STR,
            "p": _STR,
            "matrix": {"type": "array", "items": _INT_ARRAY},
            "lifted": {"type": "array", "items": _STR_ARRAY},
            "verified": {"type": "boolean"},
        }
    ),
    "suite-report": _obj(
        {
            "suite": {
                "type": "string",
                "enum": [
                    "solomon-tits",
                    "connectivity",
                    "conditions",
                    "ranks",
                    "lifting",
                ],
            },
            "config": {"type": "object"},
            "summary": _obj(
                {
                    "pass": _NONNEG,
                    "fail": _NONNEG,
                    "unknown": _NONNEG,
                    "total": _NONNEG,
                }
            ),
            "items": {
                "type": "array",
                "items": _obj(
                    {
                        "name": _STR,
                        "status": _STATUS,
                        "detail": {"type": "object"},
                    }
                ),
            },
        }
    ),
    "manifest": _obj(
        {
            "command": _STR,
            "arguments": _STR_ARRAY,
            "version": _STR,
            "cache_keys": _STR_ARRAY,
            "wall_times": {"type": "object"},
            "output_digest": _STR,
        }
    ),
}


def validate_output(kind: str, obj) -> None:
    """Raise jsonschema.ValidationError when obj does not fit the kind's schema."""
    jsonschema.validate(obj, SCHEMAS[kind])
