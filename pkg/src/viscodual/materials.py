"""Material files: strict JSON serialization of relaxation and creep models.

Schema (one object per file)::

    {"kind": "relaxation", "name": "sls", "newtonian": 0.0, "equilibrium": 1.0,
     "atoms": [{"rate": 1.0, "weight": 1.0}]}
    {"kind": "creep", "name": "sls-dual", "flow": 0.0, "offset": 0.5,
     "atoms": [{"rate": 0.5, "weight": 0.25}]}

Unknown fields are rejected. Numbers are written with 17 significant digits
so a written file re-reads to the same doubles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import NonFinite, SchemaError
from .models import CreepModel, RelaxationModel
from .spectra import normalize

Model = Union[RelaxationModel, CreepModel]

FIELDS = {
    "relaxation": ("newtonian", "equilibrium"),
    "creep": ("flow", "offset"),
}


@dataclass(frozen=True)
class MaterialFile:
    kind: str
    name: str
    model: Model


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise NonFinite(f"{where} is not finite")
    return value


def _reject_constant(token):
    raise NonFinite(f"{token} is not a valid number")


def parse_material(text: str) -> MaterialFile:
    """Parse and validate the JSON text of a material file."""
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("top level must be a JSON object")
    kind = data.get("kind")
    if kind not in FIELDS:
        raise SchemaError(f"kind must be 'relaxation' or 'creep', got {kind!r}")
    scalar_fields = FIELDS[kind]
    allowed = {"kind", "name", "atoms", *scalar_fields}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SchemaError(f"unknown field(s) for kind {kind!r}: {', '.join(unknown)}")
    missing = sorted({"atoms", *scalar_fields} - set(data))
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(missing)}")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("name must be a string")

    atoms = data["atoms"]
    if not isinstance(atoms, list):
        raise SchemaError("atoms must be a list")
    raw = []
    for i, atom in enumerate(atoms):
        if not isinstance(atom, dict) or set(atom) != {"rate", "weight"}:
            raise SchemaError(f"atoms[{i}] must be an object with exactly 'rate' and 'weight'")
        raw.append((_number(atom["rate"], f"atoms[{i}].rate"), _number(atom["weight"], f"atoms[{i}].weight")))
    spectrum = normalize(raw)

    first, second = (_number(data[f], f) for f in scalar_fields)
    if kind == "relaxation":
        model: Model = RelaxationModel(newtonian=first, equilibrium=second, spectrum=spectrum)
    else:
        model = CreepModel(flow=first, offset=second, spectrum=spectrum)
    return MaterialFile(kind=kind, name=name, model=model)


def read_material(path) -> MaterialFile:
    return parse_material(Path(path).read_text(encoding="utf-8"))


def fmt(x: float) -> str:
    """17 significant digits, the round-trip rendering used in every output."""
    return format(float(x), ".17g")


def dump_material(material: MaterialFile) -> str:
    model = material.model
    if isinstance(model, RelaxationModel):
        kind, scalars = "relaxation", [("newtonian", model.newtonian), ("equilibrium", model.equilibrium)]
    else:
        kind, scalars = "creep", [("flow", model.flow), ("offset", model.offset)]
    lines = ["{", f'  "kind": "{kind}",', f'  "name": {json.dumps(material.name)},']
    lines += [f'  "{key}": {fmt(val)},' for key, val in scalars]
    atoms = [f'    {{"rate": {fmt(r)}, "weight": {fmt(w)}}}' for r, w in model.spectrum]
    if atoms:
        lines.append('  "atoms": [')
        lines.append(",\n".join(atoms))
        lines.append("  ]")
    else:
        lines.append('  "atoms": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_material(path, material: MaterialFile) -> None:
    Path(path).write_text(dump_material(material), encoding="utf-8", newline="\n")


def material_for(model: Model, name: str = "") -> MaterialFile:
    kind = "relaxation" if isinstance(model, RelaxationModel) else "creep"
    return MaterialFile(kind=kind, name=name, model=model)


def dual_name(name: str) -> str:
    """Label for a converted file; converting twice restores the original label."""
    if name.endswith("-dual"):
        return name[: -len("-dual")]
    return f"{name}-dual" if name else ""
