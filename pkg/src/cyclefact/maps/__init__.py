"""Polymaps, constellations, marked polymaps and the pruning bijections."""
from .marked import (
    MarkedPolymap,
    MarkedPruning,
    is_valid_labelling,
    mark_descents,
    marked_graft,
    marked_prune,
    validate_marking,
)
from .polymap import (
    FaceWalk,
    MapError,
    Polymap,
    constellation_from_factorization,
    cyclic_descents,
    factorization_from_constellation,
    polymap_of,
)
from .pruning import (
    Branch,
    Pruning,
    RootedCactus,
    core_and_branches,
    core_polygons,
    default_face_labels,
    graft,
    insertion_positions,
    prune,
)

