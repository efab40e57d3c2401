"""Paramodifications of Steiner 2-(n,k,1) designs."""

from .canon import (
    CanonicalCertificate,
    are_isomorphic,
    automorphism_generators,
    canonical_certificate,
    canonical_form,
    group_order,
    isomorphism,
)
from .coloring import (
    LineGraph,
    Resolution,
    coloring_from_resolution,
    enumerate_resolutions,
    enumerate_resolutions_bruteforce,
    equivalent,
    is_b_coloring,
    is_para_rigid,
    line_graph,
    parallel_classes,
)
from .design import (
    BlockColoring,
    BlockPencil,
    Design,
    DesignError,
    DerivedSystem,
    block_through,
    derived_system,
    pencil,
    replication_number,
    structured_matrix,
    trivial_coloring,
    validate,
)
from .explorer import ParamodGraph, class_stats, expand, explore
from .fileio import export_design, import_design
from .generators import affine_plane, hermitian_unital, projective_plane
from .transform import (
    Paramodification,
    enumerate_switchings,
    find_pasch,
    is_anti_pasch,
    nontrivial_class_count,
    paramodify,
    reverse_coloring,
    switching_excluded_by_bound,
)

__version__ = "0.1.0"
