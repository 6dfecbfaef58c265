"""Minimum cuts and Z2-minimal even subgraphs on surface-embedded graphs."""

from .cover import BetaCapError, all_classes, build_cover, lift_walk, min_cycle_in_class, min_even_in_class
from .cuts import CutResult, global_min_cut, min_face_separator, min_st_cut, shortest_weighted_cycle
from .homology import (
    crossing_parity_vector,
    edge_signatures,
    forest_cotree_greedy,
    signature_of,
    tree_coforest,
)
from .slicing import slice_along
from .surface import (
    ClosedWalk,
    DualMap,
    EvenSubgraph,
    FormatError,
    Surface,
    SurfaceError,
    build_dual,
    canonical_form,
    cycle_decomposition,
    emit_surface,
    fill_boundaries,
    parse_surface,
    remove_faces,
)

__version__ = "0.1.0"

__all__ = [
    "BetaCapError",
    "ClosedWalk",
    "CutResult",
    "DualMap",
    "EvenSubgraph",
    "FormatError",
    "Surface",
    "SurfaceError",
    "all_classes",
    "build_cover",
    "build_dual",
    "canonical_form",
    "crossing_parity_vector",
    "cycle_decomposition",
    "edge_signatures",
    "emit_surface",
    "fill_boundaries",
    "forest_cotree_greedy",
    "global_min_cut",
    "lift_walk",
    "min_cycle_in_class",
    "min_even_in_class",
    "min_face_separator",
    "min_st_cut",
    "parse_surface",
    "remove_faces",
    "shortest_weighted_cycle",
    "signature_of",
    "slice_along",
    "tree_coforest",
]
