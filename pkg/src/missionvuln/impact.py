"""Attack chains and mission-impact traces.

A vulnerable path is a head-to-tail arrow sequence in the structure graph
whose every hop is attested by relevant evidence on the hop's arrow or its
target vertex; a single evidenced vertex is the trivial path of length 0.
An impact trace walks the mission graph against the stored top-to-bottom
arrows, from an evidenced structural element up to an unacceptable loss.

Path families are unbounded on cyclic graphs, so enumeration is restricted
to simple (vertex-non-repeating) paths with a caller-set length bound; this
preserves every acyclic chain. Containment arrows are structural
aggregation, not information flow, and are never chain hops; impact-trace
enumeration uses them only to resolve an evidenced member to its aggregate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ImpactConfigError
from .evidence import RelevantEvidence
from .graphs.model import (
    CONTAINS_RELATION,
    Arrow,
    GraphKind,
    LabeledGraph,
    VertexKind,
)
from .vulnfeeds import AttackVectorSpace, source_of

EvidenceLike = RelevantEvidence | Iterable[str]


def _normalize_relevant(relevant: Mapping[str, EvidenceLike]) -> dict[str, frozenset[str]]:
    out: dict[str, frozenset[str]] = {}
    for element, ev in relevant.items():
        ids = ev.base if isinstance(ev, RelevantEvidence) else frozenset(ev)
        if ids:
            out[element] = frozenset(ids)
    return out


@dataclass(frozen=True)
class PathHop:
    arrow_id: str
    src: str
    tgt: str
    attacks: frozenset[str]

    def sort_key(self) -> tuple:
        return (self.arrow_id, self.src, self.tgt, tuple(sorted(self.attacks)))


@dataclass(frozen=True)
class VulnerablePath:
    start: str
    hops: tuple[PathHop, ...]

    @property
    def length(self) -> int:
        return len(self.hops)

    def vertices(self) -> list[str]:
        return [self.start] + [h.tgt for h in self.hops]

    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(h.arrow_id for h in self.hops)

    def sort_key(self) -> tuple:
        return (self.length, tuple(self.vertices()), self.arrow_ids())

    def contains_subpath(self, other: "VulnerablePath") -> bool:
        """True when `other` is a contiguous hop subsequence of this path."""
        if other.length == 0:
            return other.start in self.vertices()
        ours, theirs = self.arrow_ids(), other.arrow_ids()
        return any(ours[i:i + len(theirs)] == theirs
                   for i in range(len(ours) - len(theirs) + 1))


class PathSet:
    """Vulnerable paths collected as a disjoint union over path lengths."""

    def __init__(self, paths: Iterable[VulnerablePath] = ()):
        unique: dict[tuple, VulnerablePath] = {}
        for p in paths:
            unique.setdefault((p.start, p.arrow_ids()), p)
        self._paths = tuple(sorted(unique.values(), key=VulnerablePath.sort_key))

    def __iter__(self):
        return iter(self._paths)

    def __len__(self) -> int:
        return len(self._paths)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PathSet):
            return NotImplemented
        return self._paths == other._paths

    def by_length(self, n: int) -> tuple[VulnerablePath, ...]:
        return tuple(p for p in self._paths if p.length == n)

    def lengths(self) -> list[int]:
        return sorted({p.length for p in self._paths})

    def trivial(self) -> tuple[VulnerablePath, ...]:
        return self.by_length(0)

    def chains(self) -> tuple[VulnerablePath, ...]:
        """Maximal non-trivial paths: those not contained in a longer member.

        This is the analyst-facing view; sub-chains of a reported chain are
        still members of the set itself.
        """
        nontrivial = [p for p in self._paths if p.length > 0]
        out = []
        for p in nontrivial:
            if not any(q is not p and q.length > p.length and q.contains_subpath(p)
                       for q in nontrivial):
                out.append(p)
        return tuple(out)


def hop_attacks(arrow: Arrow, relevant: Mapping[str, frozenset[str]]) -> frozenset[str]:
    """CVE entries attesting a hop: relevant evidence carried by the arrow
    itself or by its target vertex. Weakness/pattern classes never label a
    hop; they are abstract, not executable attacks."""
    pool = relevant.get(arrow.id, frozenset()) | relevant.get(arrow.tgt, frozenset())
    return frozenset(a for a in pool if source_of(a) == "CVE")


def find_vulnerable_paths(sigma: LabeledGraph,
                          relevant: Mapping[str, EvidenceLike],
                          max_len: int = 8) -> PathSet:
    """Every simple attested path of length <= max_len, plus the trivial
    path of each vertex carrying relevant evidence.

    A hop must be an information-flow arrow (containment is skipped) whose
    arrow or target vertex carries relevant CVE evidence.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    ids = _normalize_relevant(relevant)

    paths: list[VulnerablePath] = []
    for v in sigma.vertices:
        if ids.get(v.id):
            paths.append(VulnerablePath(start=v.id, hops=()))

    attested: dict[str, list[tuple[Arrow, frozenset[str]]]] = {}
    for a in sigma.arrows:
        if a.relation == CONTAINS_RELATION:
            continue
        attacks = hop_attacks(a, ids)
        if attacks:
            attested.setdefault(a.src, []).append((a, attacks))

    def extend(start: str, hops: list[PathHop], visited: set[str]) -> None:
        if hops:
            paths.append(VulnerablePath(start=start, hops=tuple(hops)))
        if len(hops) >= max_len:
            return
        tail = hops[-1].tgt if hops else start
        for arrow, attacks in attested.get(tail, ()):
            if arrow.tgt in visited:
                continue
            hops.append(PathHop(arrow_id=arrow.id, src=arrow.src, tgt=arrow.tgt,
                                attacks=attacks))
            visited.add(arrow.tgt)
            extend(start, hops, visited)
            visited.discard(arrow.tgt)
            hops.pop()

    for v in sigma.vertices:
        extend(v.id, [], {v.id})

    return PathSet(paths)


@dataclass(frozen=True)
class TraceHop:
    arrow_id: str
    vertex: str  # vertex reached by walking the stored arrow in reverse


@dataclass(frozen=True)
class ImpactTrace:
    start: str
    hops: tuple[TraceHop, ...]

    @property
    def length(self) -> int:
        return len(self.hops)

    @property
    def loss(self) -> str:
        return self.hops[-1].vertex if self.hops else self.start

    def vertices(self) -> list[str]:
        return [self.start] + [h.vertex for h in self.hops]

    def sort_key(self) -> tuple:
        return (self.length, tuple(self.vertices()))


class TraceSet:
    """Impact traces collected as a disjoint union over trace lengths."""

    def __init__(self, traces: Iterable[ImpactTrace] = ()):
        unique: dict[tuple, ImpactTrace] = {}
        for t in traces:
            unique.setdefault((t.start, tuple(h.arrow_id for h in t.hops)), t)
        self._traces = tuple(sorted(unique.values(), key=ImpactTrace.sort_key))

    def __iter__(self):
        return iter(self._traces)

    def __len__(self) -> int:
        return len(self._traces)

    def by_length(self, n: int) -> tuple[ImpactTrace, ...]:
        return tuple(t for t in self._traces if t.length == n)

    def lengths(self) -> list[int]:
        return sorted({t.length for t in self._traces})

    def vertex_sequences(self) -> list[tuple[str, ...]]:
        return [tuple(t.vertices()) for t in self._traces]


def _containment_tops(s: LabeledGraph, vertex_id: str) -> list[str]:
    """Resolve a structural member to its topmost aggregate(s) by climbing
    stored aggregate->member arrows in reverse."""
    tops: list[str] = []
    stack = [vertex_id]
    seen = {vertex_id}
    while stack:
        current = stack.pop()
        parents = [a.src for a in s.incoming.get(current, ())
                   if a.relation == CONTAINS_RELATION]
        fresh = [p for p in parents if p not in seen]
        if not fresh:
            if not parents and current not in tops:
                tops.append(current)
            continue
        for p in fresh:
            seen.add(p)
            stack.append(p)
    return tops or [vertex_id]


def find_impact_traces(s: LabeledGraph, vulnerable: PathSet) -> TraceSet:
    """All simple reversed-arrow paths from evidenced structural elements to
    loss vertices.

    Evidenced elements are the trivial-path starts of `vulnerable`; each is
    first resolved to its containing aggregate, and enumeration then walks
    the stored top-to-bottom arrows in reverse, excluding containment.
    """
    if s.kind != GraphKind.MISSION:
        raise ImpactConfigError("impact traces are defined over a mission graph")
    losses = {v.id for v in s.vertices if v.kind == VertexKind.LOSS}
    if not losses:
        raise ImpactConfigError(
            "mission graph contains no loss vertex; impact is undefined without losses")

    starts: set[str] = set()
    for path in vulnerable.trivial():
        vertex = s.vertex_map.get(path.start)
        if vertex is None or vertex.kind != VertexKind.COMPONENT:
            continue
        starts.update(_containment_tops(s, path.start))

    traces: list[ImpactTrace] = []

    def walk(origin: str, hops: list[TraceHop], visited: set[str]) -> None:
        tail = hops[-1].vertex if hops else origin
        if tail in losses:
            if hops:
                traces.append(ImpactTrace(start=origin, hops=tuple(hops)))
            return
        for arrow in s.incoming.get(tail, ()):
            if arrow.relation == CONTAINS_RELATION or arrow.src in visited:
                continue
            hops.append(TraceHop(arrow_id=arrow.id, vertex=arrow.src))
            visited.add(arrow.src)
            walk(origin, hops, visited)
            visited.discard(arrow.src)
            hops.pop()

    for origin in sorted(starts):
        if s.vertex_map.get(origin) is None:
            continue
        walk(origin, [], {origin})

    return TraceSet(traces)


@dataclass(frozen=True)
class MissionImpactReport:
    """Deterministic, serializable analysis result."""

    chains: PathSet
    traces: TraceSet
    mission: LabeledGraph
    relevant: dict[str, frozenset[str]]
    av: AttackVectorSpace | None = None

    def to_dict(self) -> dict:
        loss_groups = self._loss_groups()
        return {
            "schema": "mission-impact-report@1",
            "vulnerable_paths": {
                "trivial": [p.start for p in self.chains.trivial()],
                "chains": [self._path_dict(p) for p in self.chains.chains()],
                "all_lengths": {str(n): len(self.chains.by_length(n))
                                for n in self.chains.lengths()},
            },
            "impact_traces": [self._trace_dict(t) for t in self.traces],
            "losses": loss_groups,
            "components": self._component_summaries(),
            "vertex_details": self._vertex_details(),
            "totals": {
                "chains": len(self.chains.chains()),
                "traces": len(self.traces),
            },
        }

    def _path_dict(self, p: VulnerablePath) -> dict:
        return {
            "start": p.start,
            "vertices": p.vertices(),
            "hops": [{"arrow": h.arrow_id, "source": h.src, "target": h.tgt,
                      "attacks": sorted(h.attacks)} for h in p.hops],
        }

    def _trace_dict(self, t: ImpactTrace) -> dict:
        return {"start": t.start, "vertices": t.vertices(), "loss": t.loss}

    def _loss_groups(self) -> list[dict]:
        groups: dict[str, list[ImpactTrace]] = {}
        for t in self.traces:
            groups.setdefault(t.loss, []).append(t)

        def priority(loss_id: str) -> int:
            vertex = self.mission.vertex_map.get(loss_id)
            if vertex is None:
                return 10 ** 6
            try:
                return int(vertex.attributes.get("priority", 10 ** 6))
            except ValueError:
                return 10 ** 6

        out = []
        for loss_id in sorted(groups, key=lambda l: (priority(l), l)):
            vertex = self.mission.vertex_map.get(loss_id)
            out.append({
                "loss": loss_id,
                "priority": priority(loss_id) if priority(loss_id) < 10 ** 6 else None,
                "description": vertex.attributes.get("description", "") if vertex else "",
                "traces": [t.vertices() for t in groups[loss_id]],
            })
        return out

    def _component_summaries(self) -> list[dict]:
        out = []
        for element in sorted(self.relevant):
            ids = self.relevant[element]
            cves = sorted(a for a in ids if source_of(a) == "CVE")
            classes = sorted(a for a in ids if source_of(a) != "CVE")
            summary = {
                "element": element,
                "relevant": sorted(ids),
                "cves": cves,
                "classes": [self._class_context(c) for c in classes],
            }
            out.append(summary)
        return out

    def _class_context(self, class_id: str) -> dict:
        if self.av is not None and class_id in self.av.entries:
            entry = self.av.entries[class_id]
            return {"id": class_id, "title": entry.title}
        return {"id": class_id, "title": ""}

    def _vertex_details(self) -> dict[str, dict]:
        mentioned: set[str] = set()
        for t in self.traces:
            mentioned.update(t.vertices())
        details = {}
        for vid in sorted(mentioned):
            vertex = self.mission.vertex_map.get(vid)
            if vertex is None:
                continue
            details[vid] = {
                "kind": vertex.kind.value,
                "label": vertex.label,
                "attributes": dict(sorted(vertex.attributes.items())),
            }
        return details

    def render_text(self) -> str:
        doc = self.to_dict()
        lines = ["MISSION IMPACT REPORT", "=" * 52, ""]
        lines.append(f"Attack chains: {doc['totals']['chains']}")
        for chain in doc["vulnerable_paths"]["chains"]:
            attacks = " | ".join(",".join(h["attacks"]) for h in chain["hops"])
            lines.append(f"  {' -> '.join(chain['vertices'])}   [{attacks}]")
        lines.append(f"Vulnerable elements: "
                     f"{', '.join(doc['vulnerable_paths']['trivial']) or '(none)'}")
        lines.append("")
        lines.append(f"Impact traces: {doc['totals']['traces']}")
        for group in doc["losses"]:
            rank = f"priority {group['priority']}" if group["priority"] else "unranked"
            lines.append(f"  {group['loss']} ({rank}): {group['description']}")
            for vertices in group["traces"]:
                lines.append(f"    {' -> '.join(vertices)}")
        lines.append("")
        lines.append("Relevant evidence:")
        for comp in doc["components"]:
            lines.append(f"  {comp['element']}: {', '.join(comp['relevant']) or '(none)'}")
            for cls in comp["classes"]:
                title = f": {cls['title']}" if cls["title"] else ""
                lines.append(f"    class {cls['id']}{title}")
        lines.append("")
        return "\n".join(lines)


def mission_impact(s: LabeledGraph, sigma: LabeledGraph,
                   relevant: Mapping[str, EvidenceLike], max_len: int = 8,
                   av: AttackVectorSpace | None = None) -> MissionImpactReport:
    """Full analysis: vulnerable paths in the structure graph, impact traces
    in the mission graph, grouped by loss priority with per-element evidence
    summaries. Deterministic for fixed inputs."""
    ids = _normalize_relevant(relevant)
    paths = find_vulnerable_paths(sigma, ids, max_len=max_len)
    if len(paths) == 0:
        traces = TraceSet()
    else:
        traces = find_impact_traces(s, paths)
    return MissionImpactReport(chains=paths, traces=traces, mission=s,
                               relevant=ids, av=av)
