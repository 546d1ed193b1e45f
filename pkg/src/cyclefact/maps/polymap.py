"""Polymaps as rotation systems: polygon boundaries plus vertex rotators.

A polygon boundary lists its vertices clockwise.  A rotator lists the
polygons met on a small clockwise tour around a vertex.  Darts are
``(polygon id, slot)`` and run from ``boundary[slot]`` to ``boundary[slot + 1]``
with the polygon on their right, so white faces are kept on the left.  On
arriving at a vertex along polygon ``p`` the walk continues along the polygon
that follows ``p`` clockwise in that vertex's rotator; for a constellation
this moves a point through the factors in the order they act.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from ..perm import (
    CycleFactorization,
    Factorization,
    Permutation,
    UnionFind,
    product,
)


class MapError(ValueError):
    """Inconsistent map data."""


Dart = tuple[int, int]


def cyclic_descents(labels: Sequence[int]) -> list[int]:
    """Positions i with labels[i-1] >= labels[i] (cyclically, weak inequality)."""
    k = len(labels)
    return [i for i in range(k) if labels[i - 1] >= labels[i]]


def min_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (first one on ties)."""
    k = len(seq)
    best = 0
    for i in range(1, k):
        if tuple(seq[i:]) + tuple(seq[:i]) < tuple(seq[best:]) + tuple(seq[:best]):
            best = i
    return best


def normalize_cycle(cyc: Sequence[int]) -> tuple[int, ...]:
    """Rotate a cyclic tuple of distinct entries to start at its minimum."""
    if not cyc:
        return ()
    i = cyc.index(min(cyc))
    return tuple(cyc[i:]) + tuple(cyc[:i])


@dataclass(frozen=True)
class FaceWalk:
    """Boundary walk of a white face: entries ``(v_i, e_i)`` where ``e_i`` leaves ``v_i``.

    ``descents`` are the positions i whose corner ``(e_{i-1}, v_i, e_i)`` is a descent.
    An isolated vertex is the walk ``((v, None),)`` with one descent.
    """

    walk: tuple[tuple[int, int | None], ...]
    darts: tuple[Dart, ...]
    descents: tuple[int, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.walk)

    @property
    def labels(self) -> tuple[int | None, ...]:
        return tuple(e for _, e in self.walk)

    @property
    def degree(self) -> int:
        return len(self.darts)

    @property
    def descent_vertices(self) -> tuple[int, ...]:
        return tuple(self.walk[i][0] for i in self.descents)


class Polymap:
    """A 2-coloured planar map whose black faces (polygons) have cycle boundaries.

    ``labels[pid]`` is the integer label of polygon ``pid`` (None for label-free maps).
    Vertices with an empty rotator are isolated (only meaningful for one vertex).
    """

    def __init__(
        self,
        boundaries: Sequence[Sequence[int]],
        rotators: Mapping[int, Sequence[int]],
        labels: Sequence[int] | None = None,
    ):
        self.boundaries: tuple[tuple[int, ...], ...] = tuple(tuple(b) for b in boundaries)
        self.rotators: dict[int, tuple[int, ...]] = {v: tuple(rot) for v, rot in sorted(rotators.items())}
        self.labels: tuple[int, ...] | None = None if labels is None else tuple(labels)
        self._check()

    # -- construction ---------------------------------------------------------

    @classmethod
    def labelled(cls, polygons: Iterable[tuple[int, Sequence[int]]], vertices: Iterable[int] = ()) -> "Polymap":
        """Build a map whose rotators list incident polygons by increasing label.

        This is the rotation system of a proper polymap or of a loop-free
        constellation.  Polygon ids follow (label, boundary) order.
        """
        polys = sorted((label, tuple(b)) for label, b in polygons)
        rot: dict[int, list[int]] = {v: [] for v in vertices}
        for pid, (_, boundary) in enumerate(polys):
            for v in boundary:
                rot.setdefault(v, []).append(pid)
        # pids are already in label order, so each rotator is increasing
        return cls([b for _, b in polys], rot, [label for label, _ in polys])

    def _check(self) -> None:
        for pid, boundary in enumerate(self.boundaries):
            if len(boundary) < 1:
                raise MapError(f"polygon {pid} has an empty boundary")
            if len(set(boundary)) != len(boundary):
                raise MapError(f"polygon {pid} boundary {boundary} repeats a vertex")
            for v in boundary:
                if v not in self.rotators:
                    raise MapError(f"vertex {v} of polygon {pid} has no rotator")
        for v, rot in self.rotators.items():
            if len(set(rot)) != len(rot):
                raise MapError(f"rotator of {v} lists a polygon twice")
            for pid in rot:
                if not 0 <= pid < len(self.boundaries) or v not in self.boundaries[pid]:
                    raise MapError(f"rotator of {v} names polygon {pid} which does not contain it")
        for pid, boundary in enumerate(self.boundaries):
            for v in boundary:
                if pid not in self.rotators[v]:
                    raise MapError(f"polygon {pid} missing from rotator of {v}")
        if self.labels is not None and len(self.labels) != len(self.boundaries):
            raise MapError("one label per polygon required")

    # -- basic queries --------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self.rotators)

    @property
    def n_vertices(self) -> int:
        return len(self.rotators)

    @property
    def n_polygons(self) -> int:
        return len(self.boundaries)

    @property
    def n_edges(self) -> int:
        return sum(len(b) for b in self.boundaries)

    def label(self, pid: int) -> int:
        return pid if self.labels is None else self.labels[pid]

    def pid_of_label(self, label: int) -> int:
        return self._label_index[label]

    @cached_property
    def _label_index(self) -> dict[int, int]:
        if self.labels is None:
            return {pid: pid for pid in range(self.n_polygons)}
        index = {}
        for pid, label in enumerate(self.labels):
            if label in index:
                raise MapError(f"label {label} is not unique")
            index[label] = pid
        return index

    @cached_property
    def _slot(self) -> dict[tuple[int, int], int]:
        return {(pid, v): s for pid, b in enumerate(self.boundaries) for s, v in enumerate(b)}

    def slot(self, pid: int, v: int) -> int:
        return self._slot[(pid, v)]

    def poly_index(self) -> dict[int, int]:
        """Number of k-gons for each k."""
        counts: dict[int, int] = {}
        for b in self.boundaries:
            counts[len(b)] = counts.get(len(b), 0) + 1
        return dict(sorted(counts.items()))

    def is_connected(self) -> bool:
        uf = UnionFind(self.vertices)
        for b in self.boundaries:
            for v in b[1:]:
                uf.union(b[0], v)
        return len(uf.groups()) <= 1

    # -- face tracing ---------------------------------------------------------

    def dart_successor(self, dart: Dart) -> Dart:
        pid, s = dart
        boundary = self.boundaries[pid]
        v = boundary[(s + 1) % len(boundary)]
        rot = self.rotators[v]
        nxt = rot[(rot.index(pid) + 1) % len(rot)]
        return nxt, self._slot[(nxt, v)]

    def dart_vertex(self, dart: Dart) -> int:
        return self.boundaries[dart[0]][dart[1]]

    def is_marked_corner(self, prev: Dart, dart: Dart) -> bool:
        """Whether the corner (prev, v, dart) is a descent; labelled maps compare labels."""
        if self.labels is None:
            raise MapError("descents of a label-free map need marks")
        return self.labels[prev[0]] >= self.labels[dart[0]]

    @cached_property
    def _faces(self) -> tuple[FaceWalk, ...]:
        seen: set[Dart] = set()
        faces = []
        for pid, boundary in enumerate(self.boundaries):
            for s in range(len(boundary)):
                if (pid, s) in seen:
                    continue
                darts = []
                d = (pid, s)
                while d not in seen:
                    seen.add(d)
                    darts.append(d)
                    d = self.dart_successor(d)
                if d != (pid, s):
                    raise MapError("face trace did not close")
                faces.append(self._walk_of(darts))
        for v, rot in self.rotators.items():
            if not rot:
                faces.append(FaceWalk(((v, None),), (), (0,)))
        faces.sort(key=lambda f: (f.labels if f.darts else (), f.walk[0][0]))
        return tuple(faces)

    def _walk_of(self, darts: list[Dart]) -> FaceWalk:
        labels = [self.label(pid) for pid, _ in darts]
        vertices = [self.dart_vertex(d) for d in darts]
        # lexicographically least label sequence, ties broken by the smaller start vertex
        k = len(darts)
        best = min(range(k), key=lambda i: (tuple(labels[i:] + labels[:i]), vertices[i]))
        darts = darts[best:] + darts[:best]
        walk = tuple((self.dart_vertex(d), self.label(d[0])) for d in darts)
        descents = tuple(i for i in range(k) if self.is_marked_corner(darts[i - 1], darts[i]))
        return FaceWalk(walk, tuple(darts), descents)

    def face_walks(self) -> tuple[FaceWalk, ...]:
        return self._faces

    @cached_property
    def face_of_dart(self) -> dict[Dart, int]:
        return {d: fi for fi, face in enumerate(self._faces) for d in face.darts}

    @property
    def n_faces(self) -> int:
        return len(self._faces)

    def euler_genus(self) -> int:
        """g with V - E + (white faces + polygons) = 2 - 2g."""
        if not self.is_connected():
            raise MapError("euler_genus needs a connected map")
        chi = self.n_vertices - self.n_edges + self.n_faces + self.n_polygons
        if chi % 2 or chi > 2:
            raise MapError(f"Euler characteristic {chi} is not of an orientable closed surface")
        return (2 - chi) // 2

    def descent_vertex_face(self) -> dict[int, int]:
        """For each vertex, the index of the face holding its descent corner."""
        out: dict[int, int] = {}
        for fi, face in enumerate(self._faces):
            for v in face.descent_vertices:
                if v in out:
                    raise MapError(f"vertex {v} is at two descent corners")
                out[v] = fi
        missing = set(self.rotators) - set(out)
        if missing:
            raise MapError(f"vertices {sorted(missing)} are at no descent corner")
        return out

    def descent_cycles(self) -> Permutation:
        """The permutation whose cycles are the descent cycles of the faces."""
        self.descent_vertex_face()
        n = self.n_vertices
        if set(self.rotators) != set(range(1, n + 1)):
            raise MapError("descent_cycles needs vertices labelled 1..n")
        return Permutation.from_cycles([f.descent_vertices for f in self._faces], n)

    def is_proper(self) -> bool:
        """Distinct labels and every rotator cyclically increasing."""
        if self.labels is None or len(set(self.labels)) != len(self.labels):
            return False
        for rot in self.rotators.values():
            labs = [self.labels[p] for p in rot]
            if len(cyclic_descents(labs)) > 1 or (len(labs) > 1 and not cyclic_descents(labs)):
                return False
        return True

    # -- equality ---------------------------------------------------------------

    def key(self) -> tuple:
        """Structural identity: labels and vertex ids pin every cell."""
        if self.labels is None:
            raise MapError("key() of a label-free map is not canonical; use a MarkedPolymap")
        polys = tuple(sorted((self.labels[pid], normalize_cycle(b)) for pid, b in enumerate(self.boundaries)))
        rots = tuple((v, normalize_cycle([self.labels[p] for p in rot])) for v, rot in self.rotators.items())
        return polys, rots

    def __eq__(self, other):
        if not isinstance(other, Polymap) or type(other) is not type(self):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def labelled_polygons(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(self.label(pid), b) for pid, b in enumerate(self.boundaries)]

    def __repr__(self) -> str:
        polys = ", ".join(f"{self.label(pid)}:{b}" for pid, b in enumerate(self.boundaries))
        return f"{type(self).__name__}(V={self.n_vertices}, polygons=[{polys}])"


# -- constellations ------------------------------------------------------------------


def constellation_from_factorization(F: Factorization) -> Polymap:
    """The loop-free constellation of a minimal transitive factorization.

    Polygon label i carries the cycles of ``s_i`` read clockwise; fixed points
    (1-gons) stay implicit, and the increasing rotator stands in for <1,...,r>.
    """
    if not F.is_transitive():
        raise MapError("factorization is not transitive")
    if F.genus() != 0:
        raise MapError("factorization is not minimal")
    polygons = []
    for i in range(1, F.r + 1):
        for cyc in F.sigma(i).cycles(include_fixed=False):
            polygons.append((i, cyc))
    return Polymap.labelled(polygons, vertices=range(1, F.degree + 1))


def factorization_from_constellation(C: Polymap, r: int | None = None) -> Factorization:
    """Inverse of :func:`constellation_from_factorization`."""
    if C.labels is None:
        raise MapError("constellation polygons must be labelled")
    for v, rot in C.rotators.items():
        labs = [C.labels[p] for p in rot]
        if labs != sorted(labs) or len(set(labs)) != len(labs):
            raise MapError(f"rotator of vertex {v} is not increasing: {labs}")
    n = C.n_vertices
    if set(C.vertices) != set(range(1, n + 1)):
        raise MapError("constellation vertices must be 1..n")
    if r is None:
        r = max(C.labels, default=0)
    cycles: dict[int, list[tuple[int, ...]]] = {i: [] for i in range(1, r + 1)}
    for pid, b in enumerate(C.boundaries):
        if not 1 <= C.labels[pid] <= r:
            raise MapError(f"polygon label {C.labels[pid]} outside 1..{r}")
        if len(b) > 1:
            cycles[C.labels[pid]].append(b)
    sigmas = [Permutation.from_cycles(cycles[i], n) for i in range(1, r + 1)]
    factors = tuple(reversed(sigmas))
    target = product(factors, n)
    if all(s.is_cycle() for s in sigmas):
        return CycleFactorization(factors, target)
    return Factorization(factors, target)


def polymap_of(F: CycleFactorization) -> Polymap:
    """The proper polymap M_F of a cycle factorization (its loop-free constellation)."""
    return constellation_from_factorization(F)
