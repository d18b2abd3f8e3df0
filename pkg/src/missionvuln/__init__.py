"""Mission-centric vulnerability analysis toolkit.

Encodes a system's mission as labeled graphs (requirements, admissible
behavior, structure, and their traced composition), matches structural
security descriptors against offline CVE/CWE/CAPEC snapshots to produce
candidate evidence, records analyst relevance triage, and computes attack
chains and mission-impact traces.
"""

from .graphs import (
    Arrow,
    DescriptorEntry,
    DescriptorSet,
    GraphKind,
    LabeledGraph,
    Vertex,
    VertexKind,
    compose_mission_spec,
    parse_graphml,
    validate,
    write_graphml,
)
from .evidence import (
    MatchConfig,
    RelevantEvidence,
    TriageLedger,
    enumerate_combinations,
    evidence,
    record_triage,
    rel_evidence,
)
from .impact import (
    ImpactTrace,
    PathSet,
    TraceSet,
    VulnerablePath,
    find_impact_traces,
    find_vulnerable_paths,
    mission_impact,
)
from .stpa import parse_stpa_tables, project_to_function, project_to_requirements
from .vulnfeeds import build_av_graph, ingest_snapshot, neighborhood

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "DescriptorEntry",
    "DescriptorSet",
    "GraphKind",
    "ImpactTrace",
    "LabeledGraph",
    "MatchConfig",
    "PathSet",
    "RelevantEvidence",
    "TraceSet",
    "TriageLedger",
    "Vertex",
    "VertexKind",
    "VulnerablePath",
    "build_av_graph",
    "compose_mission_spec",
    "enumerate_combinations",
    "evidence",
    "find_impact_traces",
    "find_vulnerable_paths",
    "ingest_snapshot",
    "mission_impact",
    "neighborhood",
    "parse_graphml",
    "parse_stpa_tables",
    "project_to_function",
    "project_to_requirements",
    "record_triage",
    "rel_evidence",
    "validate",
    "write_graphml",
]
