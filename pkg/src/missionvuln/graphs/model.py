"""Uniform labeled-graph data model.

One graph container holds all five analysis graphs (requirements, function,
structure, mission specification, attack-vector space), discriminated by a
`kind` field. Graphs are treated as immutable after construction; the
`validate` function reports every invariant violation instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping


class GraphKind(Enum):
    """Discriminant for the five graph roles. Values are the wire names."""

    REQUIREMENTS = "R"
    FUNCTION = "F"
    STRUCTURE = "Sigma"
    MISSION = "S"
    ATTACK = "AV"


class VertexKind(Enum):
    """Closed vocabulary of vertex roles; free-form kinds are rejected."""

    REQUIREMENT = "requirement"
    LOSS = "loss"
    HAZARD = "hazard"
    CONTROL_ACTION = "control-action"
    SAFETY_CONSTRAINT = "safety-constraint"
    BEHAVIOR = "behavior"
    COMPONENT = "component"
    ATTACK_VECTOR = "attack-vector"


#: Descriptor categories a structural element may carry.
DESCRIPTOR_CATEGORIES = (
    "information-flow",
    "property",
    "functionality",
    "non-functional",
    "interface-interaction",
)

#: Relation tag marking structural aggregation rather than information flow.
CONTAINS_RELATION = "contains"

#: Graph kinds whose elements may own descriptors.
DESCRIBED_KINDS = (GraphKind.STRUCTURE, GraphKind.MISSION)


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: VertexKind
    label: str = ""
    attributes: Mapping[str, str] = field(default_factory=dict)

    def sort_key(self) -> tuple:
        return (self.id, self.kind.value, self.label, tuple(sorted(self.attributes.items())))


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str
    relation: str = ""
    attributes: Mapping[str, str] = field(default_factory=dict)

    def sort_key(self) -> tuple:
        return (self.id, self.src, self.tgt, self.relation, tuple(sorted(self.attributes.items())))


@dataclass(frozen=True)
class DescriptorEntry:
    category: str
    key: str
    value: str


@dataclass(frozen=True)
class DescriptorSet:
    """Security attributes of one vertex or arrow, demarcated by a namespace."""

    owner: str
    owner_kind: str  # "vertex" or "arrow"
    namespace: str
    entries: tuple[DescriptorEntry, ...]

    def sort_key(self) -> tuple:
        return (self.owner_kind, self.owner, self.namespace,
                tuple(sorted((e.category, e.key, e.value) for e in self.entries)))

    def sorted_entries(self) -> list[DescriptorEntry]:
        return sorted(self.entries, key=lambda e: (e.category, e.key))


@dataclass(frozen=True)
class Violation:
    """One invariant violation, naming the offending element."""

    element: str
    invariant: str
    message: str

    def __str__(self) -> str:
        return f"{self.invariant}: {self.message} [{self.element}]"


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Directed multigraph with typed vertices, tagged arrows and descriptors.

    Vertices and arrows are kept as insertion-ordered tuples so that a graph
    parsed from a malformed document (duplicate ids, dangling endpoints) can
    still be handed to `validate` for a full report.
    """

    kind: GraphKind
    vertices: tuple[Vertex, ...] = ()
    arrows: tuple[Arrow, ...] = ()
    descriptors: tuple[DescriptorSet, ...] = ()

    @cached_property
    def vertex_map(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def incoming(self) -> dict[str, tuple[Arrow, ...]]:
        acc: dict[str, list[Arrow]] = {v.id: [] for v in self.vertices}
        for a in self.arrows:
            acc.setdefault(a.tgt, []).append(a)
        return {k: tuple(v) for k, v in acc.items()}

    @cached_property
    def outgoing(self) -> dict[str, tuple[Arrow, ...]]:
        acc: dict[str, list[Arrow]] = {v.id: [] for v in self.vertices}
        for a in self.arrows:
            acc.setdefault(a.src, []).append(a)
        return {k: tuple(v) for k, v in acc.items()}

    def descriptors_of(self, owner: str, owner_kind: str = "vertex") -> tuple[DescriptorSet, ...]:
        return tuple(d for d in self.descriptors
                     if d.owner == owner and d.owner_kind == owner_kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (self.kind == other.kind
                and sorted(v.sort_key() for v in self.vertices)
                == sorted(v.sort_key() for v in other.vertices)
                and sorted(a.sort_key() for a in self.arrows)
                == sorted(a.sort_key() for a in other.arrows)
                and sorted(d.sort_key() for d in self.descriptors)
                == sorted(d.sort_key() for d in other.descriptors))

    def __hash__(self) -> int:  # identity hash; equality is structural
        return id(self)


def _identical_copies(copies: Iterable[Vertex]) -> bool:
    keys = {v.sort_key() for v in copies}
    return len(keys) <= 1


def validate(
    g: LabeledGraph,
    sources: tuple[LabeledGraph, LabeledGraph, LabeledGraph] | None = None,
) -> list[Violation]:
    """Check every structural invariant of `g`; return all violations found.

    For a mission-specification graph, pass the (requirements, function,
    structure) triple as `sources` to also check vertex provenance and the
    descriptor-subset rule. An empty list means the graph is valid.
    """
    out: list[Violation] = []

    seen_v: dict[str, int] = {}
    for v in g.vertices:
        seen_v[v.id] = seen_v.get(v.id, 0) + 1
        if not v.id:
            out.append(Violation(repr(v.id), "vertex-id", "vertex id must be non-empty"))
    for vid, n in seen_v.items():
        if n > 1:
            out.append(Violation(vid, "unique-vertex-id", f"vertex id declared {n} times"))

    seen_a: dict[str, int] = {}
    for a in g.arrows:
        seen_a[a.id] = seen_a.get(a.id, 0) + 1
        if not a.id:
            out.append(Violation(repr(a.id), "arrow-id", "arrow id must be non-empty"))
        if a.src not in seen_v:
            out.append(Violation(a.id, "arrow-endpoint", f"source {a.src!r} is not a vertex"))
        if a.tgt not in seen_v:
            out.append(Violation(a.id, "arrow-endpoint", f"target {a.tgt!r} is not a vertex"))
    for aid, n in seen_a.items():
        if n > 1:
            out.append(Violation(aid, "unique-arrow-id", f"arrow id declared {n} times"))

    if g.descriptors and g.kind not in DESCRIBED_KINDS:
        out.append(Violation(g.kind.value, "descriptor-kind",
                             "only structure and mission graphs carry descriptors"))
    owners_seen: set[tuple[str, str]] = set()
    for d in g.descriptors:
        table = seen_v if d.owner_kind == "vertex" else seen_a
        if d.owner_kind not in ("vertex", "arrow"):
            out.append(Violation(d.owner, "descriptor-owner-kind",
                                 f"unknown owner kind {d.owner_kind!r}"))
        elif d.owner not in table:
            out.append(Violation(d.owner, "descriptor-owner",
                                 f"descriptor owner {d.owner!r} ({d.owner_kind}) does not exist"))
        if (d.owner_kind, d.owner) in owners_seen:
            out.append(Violation(d.owner, "descriptor-owner-unique",
                                 "element owns more than one descriptor set"))
        owners_seen.add((d.owner_kind, d.owner))
        keys_seen: set[str] = set()
        for e in d.entries:
            if e.category not in DESCRIPTOR_CATEGORIES:
                out.append(Violation(d.owner, "descriptor-category",
                                     f"unknown descriptor category {e.category!r}"))
            if e.key in keys_seen:
                out.append(Violation(d.owner, "descriptor-key-unique",
                                     f"duplicate descriptor key {(d.namespace, e.key)!r}"))
            keys_seen.add(e.key)

    if sources is not None and g.kind == GraphKind.MISSION:
        out.extend(_validate_mission_sources(g, sources))
    return out


def _validate_mission_sources(
    s: LabeledGraph,
    sources: tuple[LabeledGraph, LabeledGraph, LabeledGraph],
) -> list[Violation]:
    out: list[Violation] = []
    pool: dict[str, list[Vertex]] = {}
    for src_graph in sources:
        for v in src_graph.vertices:
            pool.setdefault(v.id, []).append(v)
    for v in s.vertices:
        copies = pool.get(v.id)
        if copies is None:
            out.append(Violation(v.id, "mission-vertex-source",
                                 "mission vertex is absent from every source graph"))
        elif not _identical_copies([*copies, v]):
            out.append(Violation(v.id, "mission-vertex-source",
                                 "mission vertex differs from its source-graph copy"))
    structure = sources[2]
    sigma_keys = {d.sort_key() for d in structure.descriptors}
    for d in s.descriptors:
        if d.sort_key() not in sigma_keys:
            out.append(Violation(d.owner, "mission-descriptor-source",
                                 "mission descriptor set does not appear verbatim in the structure graph"))
    return out
