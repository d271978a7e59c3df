"""Reading and writing density/tangent files (JSON or CSV).

JSON layout::

    {"mesh": {"kind": "circle", "n": 16, "weights": [...], "positions": [...]},
     "type": "density",
     "values": [...]}

``weights`` may be omitted for the built-in kinds. CSV files carry one row
per node with columns ``weight,value`` and an optional ``position`` column
(which marks a circle mesh).

Values in data files are written with 17 significant digits so they parse
back bit-for-bit; human-facing reports use :func:`fmt` instead.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from frgeom.errors import InvalidDensityError
from frgeom.measure import (Density, QuadratureMesh, TangentDensity, build_mesh,
                            make_density, make_tangent)

REPORT_DIGITS = 9


def fmt(x: float) -> str:
    """Report formatting: 9 significant digits, scientific notation."""
    return f"{float(x):.{REPORT_DIGITS - 1}e}"


def _exact(x: float) -> float:
    # JSON serializes Python floats with repr, which round-trips exactly
    return float(x)


def mesh_from_dict(d: dict) -> QuadratureMesh:
    kind = d.get("kind", "custom")
    if "weights" in d:
        pos = d.get("positions")
        return QuadratureMesh(np.asarray(d["weights"], dtype=float), kind=kind,
                              positions=None if pos is None else np.asarray(pos, dtype=float))
    if "n" not in d:
        raise InvalidDensityError("mesh needs either 'weights' or 'n'")
    return build_mesh(kind, int(d["n"]))


def mesh_to_dict(mesh: QuadratureMesh) -> dict:
    d = {"kind": mesh.kind, "n": mesh.n, "weights": [_exact(w) for w in mesh.weights]}
    if mesh.positions is not None:
        d["positions"] = [_exact(x) for x in mesh.positions]
    return d


def parse_mesh_spec(spec: str) -> QuadratureMesh:
    """``kind:n`` (e.g. ``circle:64``) or a path to a JSON file with a ``mesh`` key."""
    if ":" in spec and not Path(spec).exists():
        kind, n = spec.split(":", 1)
        return build_mesh(kind, int(n))
    data = json.loads(Path(spec).read_text())
    return mesh_from_dict(data.get("mesh", data))


def _read_raw(path):
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows or "weight" not in rows[0] or "value" not in rows[0]:
            raise InvalidDensityError(f"{path}: CSV needs 'weight' and 'value' columns")
        weights = np.array([float(r["weight"]) for r in rows])
        values = np.array([float(r["value"]) for r in rows])
        if "position" in rows[0]:
            mesh = QuadratureMesh(weights, kind="circle",
                                  positions=np.array([float(r["position"]) for r in rows]))
        else:
            mesh = QuadratureMesh(weights, kind="custom")
        return mesh, values, None
    data = json.loads(text)
    if "mesh" not in data or "values" not in data:
        raise InvalidDensityError(f"{path}: JSON needs 'mesh' and 'values' keys")
    return mesh_from_dict(data["mesh"]), np.asarray(data["values"], dtype=float), data.get("type")


def read_density(path, mesh: QuadratureMesh | None = None) -> Density:
    file_mesh, values, _ = _read_raw(path)
    return make_density(mesh if mesh is not None else file_mesh, values)


def read_tangent(path, mesh: QuadratureMesh | None = None) -> TangentDensity:
    file_mesh, values, _ = _read_raw(path)
    return make_tangent(mesh if mesh is not None else file_mesh, values)


def dumps(obj) -> str:
    kind = "tangent" if isinstance(obj, TangentDensity) else "density"
    payload = {"mesh": mesh_to_dict(obj.mesh), "type": kind,
               "values": [_exact(v) for v in obj.values]}
    return json.dumps(payload, indent=1) + "\n"


def write(obj, path) -> None:
    """Write a density or tangent; the format follows the file suffix."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        circle = obj.mesh.positions is not None
        w.writerow(["weight", "value"] + (["position"] if circle else []))
        for i in range(obj.mesh.n):
            row = [repr(_exact(obj.mesh.weights[i])), repr(_exact(obj.values[i]))]
            if circle:
                row.append(repr(_exact(obj.mesh.positions[i])))
            w.writerow(row)
        path.write_text(buf.getvalue())
    else:
        path.write_text(dumps(obj))
