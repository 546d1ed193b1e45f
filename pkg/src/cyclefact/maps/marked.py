"""Marked polymaps: label-free polymaps with one distinguished corner per vertex.

Rotators are stored anchored: ``rotators[v][0]`` is the polygon met first on a
clockwise tour of ``v`` that starts inside its distinguished corner.  Marked
polymaps stay vertex-labelled; only polygon labels are forgotten, so polygon
ids carry no information and equality goes through a canonical renumbering.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from heapq import heapify, heappop, heappush
from typing import Mapping, Sequence

from .polymap import Dart, MapError, Polymap, normalize_cycle
from .pruning import ROOT, core_polygons


class MarkedPolymap(Polymap):
    """A polymap whose distinguished corners sit just before ``rotators[v][0]``."""

    def __init__(self, boundaries: Sequence[Sequence[int]], rotators: Mapping[int, Sequence[int]]):
        super().__init__(boundaries, rotators, labels=None)

    def is_marked_corner(self, prev: Dart, dart: Dart) -> bool:
        rot = self.rotators[self.dart_vertex(dart)]
        return dart[0] == rot[0]

    @cached_property
    def _canonical_order(self) -> list[int]:
        order: list[int] = []
        seen: set[int] = set()
        for v, rot in self.rotators.items():
            for p in rot:
                if p not in seen:
                    seen.add(p)
                    order.append(p)
        return order

    def canonical(self) -> "MarkedPolymap":
        """Same marked map with polygon ids assigned by first appearance in sorted-vertex rotators."""
        new = {old: i for i, old in enumerate(self._canonical_order)}
        boundaries = [normalize_cycle(self.boundaries[old]) for old in self._canonical_order]
        rotators = {v: [new[p] for p in rot] for v, rot in self.rotators.items()}
        return MarkedPolymap(boundaries, rotators)

    def key(self) -> tuple:
        new = {old: i for i, old in enumerate(self._canonical_order)}
        boundaries = tuple(normalize_cycle(self.boundaries[old]) for old in self._canonical_order)
        rotators = tuple((v, tuple(new[p] for p in rot)) for v, rot in self.rotators.items())
        return boundaries, rotators

    def relabel_vertices(self, mapping: Mapping[int, int]) -> "MarkedPolymap":
        boundaries = [tuple(mapping.get(v, v) for v in b) for b in self.boundaries]
        rotators = {mapping.get(v, v): rot for v, rot in self.rotators.items()}
        return MarkedPolymap(boundaries, rotators)

    def polygons_of(self, v: int) -> tuple[int, ...]:
        return self.rotators[v]


def mark_descents(M: Polymap, return_labels: bool = False):
    """Forget polygon labels of a proper polymap, keeping its descent corners.

    With ``return_labels`` also return ``{polygon id: former label}`` for the
    canonical ids of the result.
    """
    if not M.is_proper():
        raise MapError("mark_descents needs a proper polymap")
    rotators = {}
    for v, rot in M.rotators.items():
        if rot:
            i = min(range(len(rot)), key=lambda t: M.labels[rot[t]])
            rot = rot[i:] + rot[:i]
        rotators[v] = rot
    marked = MarkedPolymap(M.boundaries, rotators)
    canon = marked.canonical()
    if not return_labels:
        return canon
    labels = {i: M.labels[old] for i, old in enumerate(marked._canonical_order)}
    return canon, labels


def is_valid_labelling(M: MarkedPolymap, labels: Mapping[int, int]) -> bool:
    """Whether distinct ``labels`` make every anchored rotator increasing."""
    if sorted(labels) != list(range(M.n_polygons)) or len(set(labels.values())) != M.n_polygons:
        return False
    return all(
        all(labels[a] < labels[b] for a, b in zip(rot, rot[1:])) for rot in M.rotators.values()
    )


def validate_marking(M: MarkedPolymap) -> tuple[bool, dict[int, int] | None]:
    """Decide proper marking; on success also return a witness labelling 1..r."""
    succ: dict[int, set[int]] = {p: set() for p in range(M.n_polygons)}
    indeg = {p: 0 for p in range(M.n_polygons)}
    for rot in M.rotators.values():
        for a, b in zip(rot, rot[1:]):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    ready = [p for p, d in indeg.items() if d == 0]
    heapify(ready)
    order = []
    while ready:
        p = heappop(ready)
        order.append(p)
        for q in sorted(succ[p]):
            indeg[q] -= 1
            if indeg[q] == 0:
                heappush(ready, q)
    if len(order) < M.n_polygons:
        return False, None
    labels = {p: i for i, p in enumerate(order, 1)}
    labelled = Polymap(M.boundaries, M.rotators, [labels[p] for p in range(M.n_polygons)])
    if mark_descents(labelled) != M or not is_valid_labelling(M, labels):
        raise MapError("topological labelling failed to reproduce the marks")
    return True, labels


# -- pruning --------------------------------------------------------------------------

Corner = tuple[int, int]


def _group_cactus(M: MarkedPolymap, v: int, roots: Sequence[int], blocked: frozenset[int]) -> MarkedPolymap:
    """The rooted marked cactus formed by ``roots`` at ``v`` and everything hanging off them."""
    polys: set[int] = set()
    for p in roots:
        stack = [p]
        polys.add(p)
        seen_v = {v}
        while stack:
            q = stack.pop()
            for x in M.boundaries[q]:
                if x in seen_v:
                    continue
                seen_v.add(x)
                for t in M.rotators[x]:
                    if t not in polys and t not in blocked:
                        polys.add(t)
                        stack.append(t)
    ids = sorted(polys)
    new = {old: i for i, old in enumerate(ids)}
    boundaries = [tuple(ROOT if x == v else x for x in M.boundaries[old]) for old in ids]
    rotators: dict[int, list[int]] = {ROOT: [new[p] for p in roots]}
    for old in ids:
        for x in M.boundaries[old]:
            if x != v and x not in rotators:
                rotators[x] = [new[t] for t in M.rotators[x]]
    return MarkedPolymap(boundaries, rotators).canonical()


def trivial_cactus() -> MarkedPolymap:
    return MarkedPolymap([], {ROOT: []})


@dataclass(frozen=True)
class MarkedPruning:
    """``cacti[(v, 0)]`` is the pair (C1, C2) at the descent corner of core vertex v;
    ``cacti[(v, s)]`` for s >= 1 is the single cactus at the corner entered just
    before the s-th core polygon of v's anchored rotator (counting from 0)."""

    core: MarkedPolymap
    cacti: dict[Corner, object]


def marked_prune(M: MarkedPolymap) -> MarkedPruning:
    if M.n_faces < 2:
        raise MapError("a single-face map is a cactus and has no core")
    core_ids = core_polygons(M)
    cacti: dict[Corner, object] = {}
    core_rot: dict[int, list[int]] = {}
    for v, rot in M.rotators.items():
        idx = [i for i, p in enumerate(rot) if p in core_ids]
        if not idx:
            continue
        core_rot[v] = [rot[i] for i in idx]
        cacti[(v, 0)] = (
            _group_cactus(M, v, rot[: idx[0]], core_ids),
            _group_cactus(M, v, rot[idx[-1] + 1 :], core_ids),
        )
        for s in range(1, len(idx)):
            cacti[(v, s)] = _group_cactus(M, v, rot[idx[s - 1] + 1 : idx[s]], core_ids)
    ids = sorted(core_ids)
    new = {old: i for i, old in enumerate(ids)}
    core = MarkedPolymap(
        [M.boundaries[old] for old in ids], {v: [new[p] for p in rot] for v, rot in core_rot.items()}
    )
    return MarkedPruning(core.canonical(), cacti)


def marked_graft(core: MarkedPolymap, cacti: Mapping[Corner, object]) -> MarkedPolymap:
    """Inverse of :func:`marked_prune`."""
    expected = {(v, s) for v, rot in core.rotators.items() for s in range(len(rot))}
    if set(cacti) != expected:
        raise MapError("cacti must be given for exactly the corners of the core")
    boundaries = [tuple(b) for b in core.boundaries]
    rotators: dict[int, list[int]] = {}
    used_vertices = set(core.vertices)

    def attach(cactus: MarkedPolymap, v: int) -> list[int]:
        fresh = set(cactus.vertices) - {ROOT}
        if fresh & used_vertices:
            raise MapError(f"vertex collision: {sorted(fresh & used_vertices)}")
        used_vertices.update(fresh)
        offset = len(boundaries)
        for b in cactus.boundaries:
            boundaries.append(tuple(v if x == ROOT else x for x in b))
        for x, rot in cactus.rotators.items():
            if x != ROOT:
                rotators[x] = [offset + p for p in rot]
        return [offset + p for p in cactus.rotators[ROOT]]

    for v, rot in core.rotators.items():
        c1, c2 = cacti[(v, 0)]
        new_rot = attach(c1, v)
        for s, q in enumerate(rot):
            if s:
                new_rot += attach(cacti[(v, s)], v)
            new_rot.append(q)
        new_rot += attach(c2, v)
        rotators[v] = new_rot
    return MarkedPolymap(boundaries, rotators).canonical()


def corner_face(core: MarkedPolymap, corner: Corner) -> int:
    """Face index of ``core`` containing the corner ``(v, s)``."""
    v, s = corner
    p = core.rotators[v][s]
    return core.face_of_dart[(p, core.slot(p, v))]
