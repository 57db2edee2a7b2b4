from .graph import (
    Edge,
    EmbeddedGraph,
    Disconnected,
    InvalidEmbedding,
    NonContiguousPartition,
    ParseError,
    PlanarError,
    PointNotOnEdge,
    TooSmall,
    ORIGINAL,
    canonical_of,
    connected_component_count,
    connected_components_of,
    contract_edge,
    face_walks,
    faces,
    is_canonical,
    is_virtual,
    outer_face_index,
    read_graph,
    source_edge_of,
    split_vertex,
    subdivide_edge,
    subdivide_edge_at_points,
    validate_embedding,
    virtual,
    write_graph,
)
from .region import (
    PolygonalEmbedding,
    PolygonalRegion,
    induced_subgraph,
    point_in_polygon,
    polygon_area2,
)
from .rdivision import Division, Piece, r_division

__all__ = [
    "Edge", "EmbeddedGraph", "Disconnected", "InvalidEmbedding",
    "NonContiguousPartition", "ParseError", "PlanarError", "PointNotOnEdge",
    "TooSmall", "ORIGINAL", "canonical_of", "connected_component_count",
    "connected_components_of", "contract_edge", "face_walks", "faces",
    "is_canonical", "is_virtual", "outer_face_index", "read_graph",
    "source_edge_of", "split_vertex", "subdivide_edge",
    "subdivide_edge_at_points", "validate_embedding", "virtual",
    "write_graph", "PolygonalEmbedding", "PolygonalRegion",
    "induced_subgraph", "point_in_polygon", "polygon_area2", "Division",
    "Piece", "r_division",
]
