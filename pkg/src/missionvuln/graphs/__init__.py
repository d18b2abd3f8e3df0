"""Labeled graphs, GraphML codec, validation and mission composition."""

from .compose import compose_mission_spec
from .graphml import parse_graphml, write_graphml
from .model import (
    CONTAINS_RELATION,
    DESCRIPTOR_CATEGORIES,
    Arrow,
    DescriptorEntry,
    DescriptorSet,
    GraphKind,
    LabeledGraph,
    Vertex,
    VertexKind,
    Violation,
    validate,
)

__all__ = [
    "Arrow",
    "CONTAINS_RELATION",
    "DESCRIPTOR_CATEGORIES",
    "DescriptorEntry",
    "DescriptorSet",
    "GraphKind",
    "LabeledGraph",
    "Vertex",
    "VertexKind",
    "Violation",
    "compose_mission_spec",
    "parse_graphml",
    "validate",
    "write_graphml",
]
