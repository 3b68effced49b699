"""Config schema for the CLI: one command id per laboratory procedure.

The JSON schema below is the published contract for experiment configs;
a copy is written to schemas/config.schema.json in the repository.
Validation errors are reported with dotted field paths.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_INT = {"type": "integer", "minimum": 1}

_PROFILE = {
    "type": "object",
    "properties": {
        "id": {"enum": ["bump", "shell", "zero"]},
        "radius": _POS,
        "center": _POS,
        "width": _POS,
        "amplitude": _NUM,
    },
    "required": ["id"],
    "additionalProperties": False,
}

_FORCING = {
    "type": "object",
    "properties": {
        "preset": {"enum": ["cone_bump", "constant", "csv"]},
        "s_center": _NUM,
        "s_width": _POS,
        "d_center": _NUM,
        "d_width": _POS,
        "amplitude": _NUM,
        "value": _NUM,
        "csv": {"type": "string"},
        "sidecar": {"type": "string"},
    },
    "required": ["preset"],
    "additionalProperties": False,
}

_GFUN = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["indicator", "gauss", "bump", "power"]},
        "hi": _POS,
        "center": _NUM,
        "width": _POS,
        "amplitude": _NUM,
        "exponent": _NUM,
        "lo": {"type": "number", "minimum": 0},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

_GRID = {
    "type": "object",
    "properties": {
        "t_max": _POS,
        "r_max": _POS,
        "step": _POS,
        "nt": {"type": "integer", "minimum": 2},
        "nr": {"type": "integer", "minimum": 2},
    },
    "required": ["t_max"],
    "additionalProperties": False,
}

_KERNEL_PARAMS = {
    "alpha": _NUM,
    "beta": _NUM,
    "gamma": _NUM,
    "p": _POS,
    "q": _POS,
}

PARAM_SCHEMAS = {
    "exponents": {
        "type": "object",
        "properties": {"n": {"type": "integer", "minimum": 2}, "p": _POS, "q": _POS},
        "required": ["n"],
        "additionalProperties": False,
    },
    "solve": {
        "type": "object",
        "properties": {
            "n": {"enum": [3, 5, 7]},
            "forcing": _FORCING,
            "kappa": _NUM,
            "enforce_cone": {"type": "boolean"},
            "expect_constant_exact": {"type": "boolean"},
        },
        "required": ["n", "forcing"],
        "additionalProperties": False,
    },
    "free": {
        "type": "object",
        "properties": {
            "epsilon": {"type": "number", "minimum": 0},
            "support_radius": {"type": "number", "minimum": 1},
            "f": _PROFILE,
            "g": _PROFILE,
        },
        "required": ["epsilon", "support_radius", "f", "g"],
        "additionalProperties": False,
    },
    "iterate": {
        "type": "object",
        "properties": {
            "epsilon": {"type": "number", "minimum": 0},
            "support_radius": {"type": "number", "minimum": 1},
            "p": _POS,
            "gamma": {"anyOf": [_NUM, {"const": "midpoint"}]},
            "nonlinearity": {"enum": ["abs_power", "signed_power", "zero"]},
            "f": _PROFILE,
            "g": _PROFILE,
            "tol": _POS,
            "max_steps": _INT,
            "compare_amplitude_ratio": _POS,
            "expect": {"enum": ["contraction", "divergence"]},
        },
        "required": ["epsilon", "support_radius", "p", "gamma", "f", "g"],
        "additionalProperties": False,
    },
    "threshold": {
        "type": "object",
        "properties": {
            "support_radius": {"type": "number", "minimum": 1},
            "p": _POS,
            "gamma": {"anyOf": [_NUM, {"const": "midpoint"}]},
            "nonlinearity": {"enum": ["abs_power", "signed_power", "zero"]},
            "f": _PROFILE,
            "g": _PROFILE,
            "eps_lo": {"type": "number", "minimum": 0},
            "eps_hi": _POS,
            "resolution": _POS,
            "max_steps": _INT,
        },
        "required": ["support_radius", "p", "gamma", "f", "g",
                     "eps_lo", "eps_hi", "resolution"],
        "additionalProperties": False,
    },
    "blowup": {
        "type": "object",
        "properties": {
            "epsilon": {"type": "number", "minimum": 0},
            "support_radius": {"type": "number", "minimum": 1},
            "p": _POS,
            "f": _PROFILE,
            "g": _PROFILE,
            "growth_factor": _POS,
            "max_steps": _INT,
            "expect_flag": {"type": "boolean"},
        },
        "required": ["epsilon", "support_radius", "p", "f", "g"],
        "additionalProperties": False,
    },
    "john-check": {
        "type": "object",
        "properties": {
            "p": _POS,
            "forcing": _FORCING,
            "refine": {"type": "boolean"},
            "agreement_pct": _POS,
        },
        "required": ["p", "forcing"],
        "additionalProperties": False,
    },
    "norm": {
        "type": "object",
        "properties": {
            "op": {"enum": ["weighted_norm", "dyadic_layers", "null_roundtrip"]},
            "gamma": _NUM,
            "shift": {"type": "number", "minimum": 0},
            "q": {"type": "number", "minimum": 1},
            "field": _FORCING,
            "region": {
                "type": "object",
                "properties": {
                    "t_lo": _NUM,
                    "t_hi": _NUM,
                    "cone_lo": _NUM,
                    "cone_hi": _NUM,
                    "interior": {"type": "boolean"},
                },
                "additionalProperties": False,
            },
            "T": _POS,
            "t_minus_r_max": _POS,
            "count": _INT,
        },
        "required": ["op"],
        "additionalProperties": False,
    },
    "verify-1d": {
        "type": "object",
        "properties": {
            **_KERNEL_PARAMS,
            "lengths": {"type": "array", "items": _POS, "minItems": 1},
            "h": _POS,
            "family": {
                "type": "object",
                "properties": {
                    "kind": {"enum": ["bump_power", "concentrating"]},
                    "count": _INT,
                    "levels": _INT,
                },
                "required": ["kind"],
                "additionalProperties": False,
            },
            "expect": {"enum": ["stable", "growth"]},
            "stability_pct": _POS,
        },
        "required": ["alpha", "beta", "gamma", "p", "q", "lengths", "h", "family"],
        "additionalProperties": False,
    },
    "verify-2d": {
        "type": "object",
        "properties": {
            **_KERNEL_PARAMS,
            "length": _POS,
            "sizes": {"type": "array", "items": {"type": "integer", "minimum": 8},
                      "minItems": 2},
            "stability_pct": _POS,
        },
        "required": ["alpha", "beta", "gamma", "p", "q", "length", "sizes"],
        "additionalProperties": False,
    },
    "hardy": {
        "type": "object",
        "properties": {
            "exponent": _POS,
            "p": _POS,
            "q": _POS,
            "g": _GFUN,
            "length": _POS,
            "steps": {"type": "array", "items": _POS, "minItems": 2},
            "stability_pct": _POS,
        },
        "required": ["exponent", "p", "q", "g", "length", "steps"],
        "additionalProperties": False,
    },
    "splitting": {
        "type": "object",
        "properties": {
            **_KERNEL_PARAMS,
            "g": _GFUN,
            "length": _POS,
            "h": _POS,
        },
        "required": ["alpha", "beta", "gamma", "p", "q", "g", "length", "h"],
        "additionalProperties": False,
    },
    "domination": {
        "type": "object",
        "properties": {
            **_KERNEL_PARAMS,
            "count": _INT,
            "expect_violations": {"type": "boolean"},
        },
        "required": ["alpha", "beta", "gamma", "p", "q", "count"],
        "additionalProperties": False,
    },
    "overlap": {
        "type": "object",
        "properties": {
            "n_blocks": {"type": "integer", "minimum": 1},
            "block_size": {"type": "integer", "minimum": 1},
            "band": {"type": "integer", "minimum": 1},
            "instances": _INT,
            "d": {"type": "integer", "minimum": 1},
        },
        "required": ["n_blocks", "block_size", "band", "instances"],
        "additionalProperties": False,
    },
    "geometry": {
        "type": "object",
        "properties": {
            "op": {"enum": ["tangent_sphere", "internal_tangency", "huygens",
                            "identity"]},
            "t": _POS,
            "delta": _POS,
            "count": _INT,
            "c0": _POS,
        },
        "required": ["op", "count"],
        "additionalProperties": False,
    },
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "wavelab experiment config",
    "type": "object",
    "properties": {
        "command": {"enum": sorted([*PARAM_SCHEMAS.keys(), "sweep"])},
        "seed": {"type": "integer", "minimum": 0},
        "grid": _GRID,
        "params": {"type": "object"},
        "runs": {"type": "array", "items": {"type": "object"}},
    },
    "required": ["command"],
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"command": {"const": cmd}}, "required": ["command"]},
            "then": {"properties": {"params": schema}, "required": ["params"]},
        }
        for cmd, schema in PARAM_SCHEMAS.items()
    ]
    + [
        {
            "if": {"properties": {"command": {"const": "sweep"}},
                   "required": ["command"]},
            "then": {"required": ["runs"]},
        }
    ],
}


class ConfigError(ValueError):
    """Invalid experiment config; message carries the field path."""


def validate_config(config: dict) -> None:
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        parts = []
        for err in errors[:5]:
            path = ".".join(str(p) for p in err.absolute_path) or "<root>"
            parts.append(f"{path}: {err.message}")
        raise ConfigError("; ".join(parts))
    if config["command"] == "sweep":
        commands = {run.get("command") for run in config.get("runs", [])}
        if len(commands) > 1:
            raise ConfigError("runs: sweep requires homogeneous command ids")
        for i, run in enumerate(config.get("runs", [])):
            try:
                validate_config(run)
            except ConfigError as exc:
                raise ConfigError(f"runs.{i}.{exc}") from None


def write_schema_document(path) -> None:
    Path(path).write_text(json.dumps(CONFIG_SCHEMA, indent=2, sort_keys=True) + "\n")
