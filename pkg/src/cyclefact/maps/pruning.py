"""Pruning a proper polymap to its core, and grafting cacti back onto it.

A leaf polygon shares exactly one vertex with the other polygons; removing
leaves until none remain leaves the core.  Every removed polygon hangs off a
core vertex inside a branch, and each branch sits in a corner of one white
face of the core.  Branches are recorded by face label and by the rank of
their insertion point among the admissible positions of that face walk.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .polymap import MapError, Polymap

ROOT = 0


def _between(x: int, a: int, y: int) -> bool:
    """<x, a, y> is cyclically nondecreasing."""
    return x <= a <= y or a <= y <= x or y <= x <= a


def insertion_positions(labels: Sequence[int], a: int) -> list[int]:
    """Indices i (0-based) where ``a`` may be inserted between labels[i-1] and labels[i]."""
    if a in labels:
        raise ValueError(f"{a} already occurs in the list")
    return [i for i in range(len(labels)) if _between(labels[i - 1], a, labels[i])]


def core_polygons(M: Polymap) -> frozenset[int]:
    """Polygon ids left after repeatedly deleting leaf polygons."""
    alive = set(range(M.n_polygons))
    degree = {v: len(rot) for v, rot in M.rotators.items()}

    def shared(pid: int) -> int:
        return sum(1 for v in M.boundaries[pid] if degree[v] > 1)

    changed = True
    while changed and len(alive) > 1:
        changed = False
        for pid in sorted(alive):
            if len(alive) > 1 and shared(pid) == 1:
                alive.discard(pid)
                for v in M.boundaries[pid]:
                    degree[v] -= 1
                changed = True
    return frozenset(alive)


@dataclass(frozen=True)
class RootedCactus:
    """A labelled cactus with a distinguished root vertex ``0``; may be trivial."""

    polygons: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @property
    def is_trivial(self) -> bool:
        return not self.polygons

    @property
    def labels(self) -> frozenset[int]:
        return frozenset(label for label, _ in self.polygons)

    def vertices(self) -> frozenset[int]:
        out = {ROOT}
        for _, b in self.polygons:
            out.update(b)
        return frozenset(out)

    def polymap(self) -> Polymap:
        return Polymap.labelled(self.polygons, vertices=[ROOT])

    def branches(self) -> list["RootedCactus"]:
        """Split at the root: one cactus per polygon containing the root."""
        if self.is_trivial:
            return []
        M = self.polymap()
        out = []
        for pid in M.rotators[ROOT]:
            out.append(RootedCactus(tuple(sorted(_subtree(M, pid, ROOT)))))
        return out

    def root_labels(self) -> list[int]:
        return sorted(label for label, b in self.polygons if ROOT in b)


def _subtree(M: Polymap, pid: int, anchor: int, blocked: frozenset[int] = frozenset()) -> list[tuple[int, tuple[int, ...]]]:
    """Polygons reachable from ``pid`` without passing through ``anchor``."""
    seen = {pid}
    stack = [pid]
    seen_v = {anchor}
    while stack:
        p = stack.pop()
        for v in M.boundaries[p]:
            if v in seen_v:
                continue
            seen_v.add(v)
            for q in M.rotators[v]:
                if q not in seen and q not in blocked:
                    seen.add(q)
                    stack.append(q)
    return [(M.label(p), M.boundaries[p]) for p in seen]


def _rerooted(polys, v: int, new: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    return tuple(sorted((label, tuple(new if x == v else x for x in b)) for label, b in polys))


def default_face_labels(M: Polymap) -> dict[int, int]:
    """Label faces 1..m in order of their smallest descent vertex; map vertex -> face label."""
    owner = M.descent_vertex_face()
    order = sorted(range(M.n_faces), key=lambda fi: min(M.face_walks()[fi].descent_vertices))
    rank = {fi: j for j, fi in enumerate(order, 1)}
    return {v: rank[fi] for v, fi in owner.items()}


def face_label_order(M: Polymap, face_labels: Mapping[int, int]) -> dict[int, int]:
    """For the map's face indices, the face label carried by their descent vertices."""
    out = {}
    for fi, face in enumerate(M.face_walks()):
        labs = {face_labels[v] for v in face.descent_vertices}
        if len(labs) != 1:
            raise MapError(f"face {face.walk} descents carry labels {sorted(labs)}")
        out[fi] = labs.pop()
    if sorted(out.values()) != list(range(1, M.n_faces + 1)):
        raise MapError("face labels must be a bijection onto 1..m")
    return out


@dataclass(frozen=True)
class Branch:
    cactus: RootedCactus
    vertex: int
    face: int
    position: int
    index: int
    base_corner: tuple[int, int, int]


@dataclass
class CoreDecomposition:
    core: Polymap
    core_face_labels: dict[int, int]
    branches: list[Branch] = field(default_factory=list)


def _core_map(M: Polymap, core: frozenset[int]) -> Polymap:
    polys = [(M.label(p), M.boundaries[p]) for p in sorted(core)]
    verts = {v for p in core for v in M.boundaries[p]}
    if not verts:
        verts = set(M.vertices)
    return Polymap.labelled(polys, vertices=sorted(verts))


def core_and_branches(M: Polymap, face_labels: Mapping[int, int] | None = None) -> CoreDecomposition:
    """Split a proper polymap into its core and the branches hanging off it."""
    if not M.is_proper():
        raise MapError("pruning needs a proper polymap")
    if M.n_faces < 2:
        raise MapError("a single-face map is a cactus and has no core")
    if face_labels is None:
        face_labels = default_face_labels(M)
    face_labels = dict(face_labels)
    core_ids = core_polygons(M)
    S = _core_map(M, core_ids)
    core_fl = {v: face_labels[v] for v in S.vertices}
    face_label_of = face_label_order(S, core_fl)
    walks = S.face_walks()
    where = {d: (fi, i) for fi, w in enumerate(walks) for i, d in enumerate(w.darts)}

    out = CoreDecomposition(S, core_fl)
    core_vertices = set(S.vertices)
    for v in S.vertices:
        rot = M.rotators[v]
        if not any(p in core_ids for p in rot):
            continue
        k = len(rot)
        for j, p in enumerate(rot):
            if p in core_ids:
                continue
            prev = next(rot[(j - t) % k] for t in range(1, k) if rot[(j - t) % k] in core_ids)
            nxt = next(rot[(j + t) % k] for t in range(1, k) if rot[(j + t) % k] in core_ids)
            dart = (S.pid_of_label(M.label(nxt)), S.slot(S.pid_of_label(M.label(nxt)), v))
            fi, b = where[dart]
            walk = walks[fi]
            positions = insertion_positions(walk.labels, M.label(p))
            if b not in positions:
                raise MapError("branch is not at an admissible position")
            polys = _subtree(M, p, v, core_ids)
            if any(x in core_vertices and x != v for _, bd in polys for x in bd):
                raise MapError("branch re-enters the core")
            out.branches.append(
                Branch(
                    RootedCactus(_rerooted(polys, v, ROOT)),
                    v,
                    face_label_of[fi],
                    b,
                    positions.index(b) + 1,
                    (M.label(prev), v, M.label(nxt)),
                )
            )
    return out


@dataclass(frozen=True)
class Pruning:
    """``forests[j-1][i-1]`` is the cactus grafted at the i-th insertion slot of face j."""

    core: Polymap
    core_face_labels: dict[int, int]
    forests: tuple[tuple[RootedCactus, ...], ...]


def prune(M: Polymap, face_labels: Mapping[int, int] | None = None) -> Pruning:
    """The core of ``M`` together with one forest of rooted cacti per core face."""
    dec = core_and_branches(M, face_labels)
    S = dec.core
    face_label_of = face_label_order(S, dec.core_face_labels)
    theta = {face_label_of[fi]: len(w.descents) for fi, w in enumerate(S.face_walks())}
    grouped: dict[tuple[int, int], list] = {}
    for br in dec.branches:
        grouped.setdefault((br.face, br.index), []).extend(br.cactus.polygons)
    forests = tuple(
        tuple(RootedCactus(tuple(sorted(grouped.get((j, i), ())))) for i in range(1, theta[j] + 1))
        for j in range(1, S.n_faces + 1)
    )
    return Pruning(S, dec.core_face_labels, forests)


def graft(
    forests: Sequence[Sequence[RootedCactus]],
    core: Polymap,
    core_face_labels: Mapping[int, int],
) -> tuple[Polymap, dict[int, int]]:
    """Inverse of :func:`prune`: attach each cactus at its recorded slot of the core."""
    face_label_of = face_label_order(core, core_face_labels)
    walks = {face_label_of[fi]: w for fi, w in enumerate(core.face_walks())}
    if len(forests) != len(walks):
        raise MapError(f"{len(forests)} forests for {len(walks)} core faces")

    polygons = list(core.labelled_polygons())
    used_labels = {label for label, _ in polygons}
    used_vertices = set(core.vertices)
    face_labels = dict(core_face_labels)
    expected: list[tuple[int, int, int, int]] = []

    for j, forest in enumerate(forests, 1):
        walk = walks[j]
        if len(forest) != len(walk.descents):
            raise MapError(f"face {j} has {len(walk.descents)} slots, got {len(forest)} cacti")
        for i, cactus in enumerate(forest, 1):
            if cactus.labels & used_labels:
                raise MapError(f"label collision: {sorted(cactus.labels & used_labels)}")
            fresh = cactus.vertices() - {ROOT}
            if fresh & used_vertices:
                raise MapError(f"vertex collision: {sorted(fresh & used_vertices)}")
            used_labels |= cactus.labels
            used_vertices |= fresh
            for v in fresh:
                face_labels[v] = j
            for br in cactus.branches():
                (p,) = br.root_labels()
                positions = insertion_positions(walk.labels, p)
                if i > len(positions):
                    raise MapError(f"no slot {i} for label {p} in face {j}")
                s = positions[i - 1]
                v = walk.walk[s][0]
                expected.append((p, v, walk.labels[s - 1], walk.labels[s]))
                polygons.extend((label, tuple(v if x == ROOT else x for x in b)) for label, b in br.polygons)

    M = Polymap.labelled(polygons, vertices=core.vertices)
    core_labels = {label for label, _ in core.labelled_polygons()}
    for p, v, before, after in expected:
        rot = [M.label(q) for q in M.rotators[v]]
        k, j = len(rot), rot.index(p)
        prev = next(rot[(j - t) % k] for t in range(1, k) if rot[(j - t) % k] in core_labels)
        nxt = next(rot[(j + t) % k] for t in range(1, k) if rot[(j + t) % k] in core_labels)
        if (prev, nxt) != (before, after):
            raise MapError(f"label {p} at vertex {v} breaks the increasing rotator")
    return M, face_labels
