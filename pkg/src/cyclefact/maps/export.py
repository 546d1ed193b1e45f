"""DOT and JSON renderings of polymaps.

JSON schema (keys in this order)::

    {"kind": "polymap" | "marked",
     "vertices": [v, ...],
     "polygons": [{"id": pid, "label": int | null, "boundary": [v, ...]}, ...],
     "rotators": {"v": [pid, ...], ...},
     "faces": [{"walk": [[v, label], ...], "descents": [i, ...]}, ...]}

For marked maps each rotator starts at the polygon following the
distinguished corner.
"""
from __future__ import annotations

import json

from .marked import MarkedPolymap
from .polymap import Polymap


def to_dict(M: Polymap) -> dict:
    kind = "marked" if isinstance(M, MarkedPolymap) else "polymap"
    return {
        "kind": kind,
        "vertices": list(M.vertices),
        "polygons": [
            {"id": pid, "label": None if M.labels is None else M.labels[pid], "boundary": list(b)}
            for pid, b in enumerate(M.boundaries)
        ],
        "rotators": {str(v): list(rot) for v, rot in M.rotators.items()},
        "faces": [
            {"walk": [[v, e] for v, e in f.walk], "descents": list(f.descents)} for f in M.face_walks()
        ],
    }


def to_json(M: Polymap, indent: int | None = 2) -> str:
    return json.dumps(to_dict(M), indent=indent)


def from_dict(data: dict) -> Polymap:
    boundaries = [tuple(p["boundary"]) for p in data["polygons"]]
    rotators = {int(v): rot for v, rot in data["rotators"].items()}
    if data["kind"] == "marked":
        return MarkedPolymap(boundaries, rotators)
    return Polymap(boundaries, rotators, [p["label"] for p in data["polygons"]])


def to_dot(M: Polymap, name: str = "polymap") -> str:
    """Bipartite incidence drawing: vertices as circles, polygons as filled boxes.

    Edge ``v -> polygon`` carries the vertex's rotator position; descent corners
    are listed in each vertex's tooltip as ``(incoming, outgoing)`` polygon pairs.
    """
    corners: dict[int, list[str]] = {v: [] for v in M.vertices}
    for face in M.face_walks():
        for i in face.descents:
            v = face.walk[i][0]
            if face.darts:
                prev, cur = face.darts[i - 1][0], face.darts[i][0]
                corners[v].append(f"({M.label(prev)},{M.label(cur)})")
            else:
                corners[v].append("()")
    lines = [f"graph {name} {{", "  node [fontname=Helvetica];"]
    for v in M.vertices:
        tip = " ".join(corners[v])
        lines.append(f'  v{v} [shape=circle, label="{v}", tooltip="descent {tip}"];')
    for pid, b in enumerate(M.boundaries):
        text = f"p{pid}" if M.labels is None else str(M.labels[pid])
        lines.append(f'  p{pid} [shape=box, style=filled, fillcolor=gray70, label="{text}"];')
    for v, rot in M.rotators.items():
        for pos, pid in enumerate(rot):
            lines.append(f'  v{v} -- p{pid} [label="{pos}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
