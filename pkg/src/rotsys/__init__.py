"""Graph embeddings on surfaces via rotation systems.

Core machinery: signed rotation systems, face tracing, genus arithmetic,
triangularity row tests (core); current graphs and index-3 seeds deriving
large triangular embeddings (currents); embedding surgery — chords,
exchanges, flips, handles, crosscaps, contractions (surgery); exhaustive
and backtracking searches (search); case-by-case minimum, nonorientable,
and maximum genus constructions for complete graphs (recipes); bundled
input data (fixtures); command line (cli).
"""

from .core import (
    DisconnectedGraphError,
    EmbeddingError,
    Face,
    FixtureMissingError,
    GenusBounds,
    RefusalError,
    RotationSystem,
    SurfaceClass,
    check_rule_r,
    check_rule_r_star,
    complete_graph_rs,
    embedding_type,
    euler_surface,
    face_distribution,
    genus_bounds,
    is_nearly_triangular,
    is_orientable,
    is_triangular,
    parse_rot,
    serialize_rot,
    trace_faces,
)
from .recipes import Certificate, certify, construct, xuong_max_genus

__all__ = [
    "Certificate",
    "DisconnectedGraphError",
    "EmbeddingError",
    "Face",
    "FixtureMissingError",
    "GenusBounds",
    "RefusalError",
    "RotationSystem",
    "SurfaceClass",
    "certify",
    "check_rule_r",
    "check_rule_r_star",
    "complete_graph_rs",
    "construct",
    "embedding_type",
    "euler_surface",
    "face_distribution",
    "genus_bounds",
    "is_nearly_triangular",
    "is_orientable",
    "is_triangular",
    "parse_rot",
    "serialize_rot",
    "trace_faces",
    "xuong_max_genus",
]
