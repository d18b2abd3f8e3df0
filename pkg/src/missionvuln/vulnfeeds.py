"""Offline CVE/CWE/CAPEC snapshot ingestion and attack-vector graph assembly.

Snapshots are plain files so the analysis stays hermetic:

* CVE: one JSON record per line with ``id``, ``summary``, ``cwe_refs``.
* CWE: JSON array of records with ``id``, ``name``, ``description``,
  ``parents`` (CWE ids) and ``capec_refs`` (CAPEC ids).
* CAPEC: JSON array of records with ``id``, ``name``, ``description``,
  ``parents`` (CAPEC ids) and ``cwe_refs`` (CWE ids).

Cross-database links are taken as the union of both sides. Malformed records
are skipped and reported in a machine-readable rejects list; dangling
references degrade to warnings because public feeds are chronically
inconsistent.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable

from .errors import UnknownEntryError
from .graphs.model import Arrow, GraphKind, LabeledGraph, Vertex, VertexKind

logger = logging.getLogger(__name__)

_ID_PATTERNS = {
    "CVE": re.compile(r"^CVE-\d{4}-\d{4,}$"),
    "CWE": re.compile(r"^CWE-\d+$"),
    "CAPEC": re.compile(r"^CAPEC-\d+$"),
}

#: Concreteness rank; arrows run concrete -> abstract.
CONCRETENESS = {"CVE": 0, "CWE": 1, "CAPEC": 2}

TAG_WEAKNESS_OF = "weakness-of"
TAG_PATTERN_OF = "pattern-of"
TAG_CHILD_OF = "child-of"

SCOPE_INTRA = "intrarelationship"
SCOPE_INTER = "interrelationship"


@dataclass(frozen=True)
class AttackVectorEntry:
    id: str
    source: str  # CVE | CWE | CAPEC
    title: str
    description: str
    references: tuple[str, ...] = ()


@dataclass(frozen=True)
class RejectedRecord:
    source: str
    locator: str  # line number or array index
    reason: str
    raw: str


@dataclass(frozen=True)
class IngestResult:
    entries: tuple[AttackVectorEntry, ...]
    rejects: tuple[RejectedRecord, ...]

    def count_by_source(self) -> dict[str, int]:
        out = {"CVE": 0, "CWE": 0, "CAPEC": 0}
        for e in self.entries:
            out[e.source] += 1
        return out


def source_of(attack_id: str) -> str | None:
    """Classify an attack id by its database prefix, or None if malformed."""
    for source, pattern in _ID_PATTERNS.items():
        if pattern.match(attack_id):
            return source
    return None


def _read_text(document: bytes | str | BinaryIO) -> str:
    if hasattr(document, "read"):
        document = document.read()
    if isinstance(document, bytes):
        return document.decode("utf-8")
    return document


def _ingest_cve(document: bytes | str | BinaryIO,
                entries: list[AttackVectorEntry], rejects: list[RejectedRecord]) -> None:
    for lineno, line in enumerate(_read_text(document).splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            rejects.append(RejectedRecord("CVE", f"line {lineno}", f"invalid JSON: {exc}", line))
            continue
        cve_id = str(rec.get("id", ""))
        if not _ID_PATTERNS["CVE"].match(cve_id):
            rejects.append(RejectedRecord("CVE", f"line {lineno}",
                                          f"id {cve_id!r} does not match CVE-YYYY-NNNN", line))
            continue
        summary = str(rec.get("summary", "")).strip()
        if not summary:
            rejects.append(RejectedRecord("CVE", f"line {lineno}",
                                          f"{cve_id} has an empty summary", line))
            continue
        refs = tuple(str(r) for r in rec.get("cwe_refs", []))
        entries.append(AttackVectorEntry(id=cve_id, source="CVE", title=cve_id,
                                         description=summary, references=refs))


def _ingest_record_array(document: bytes | str | BinaryIO, source: str, ref_field: str,
                         entries: list[AttackVectorEntry],
                         rejects: list[RejectedRecord]) -> None:
    text = _read_text(document).strip()
    if not text:
        return
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        rejects.append(RejectedRecord(source, "document", f"invalid JSON: {exc}", text[:200]))
        return
    if not isinstance(records, list):
        rejects.append(RejectedRecord(source, "document", "expected a JSON array", text[:200]))
        return
    for index, rec in enumerate(records):
        raw = json.dumps(rec)
        if not isinstance(rec, dict):
            rejects.append(RejectedRecord(source, f"index {index}", "record is not an object", raw))
            continue
        rec_id = str(rec.get("id", ""))
        if not _ID_PATTERNS[source].match(rec_id):
            rejects.append(RejectedRecord(source, f"index {index}",
                                          f"id {rec_id!r} does not match {source}-N", raw))
            continue
        description = str(rec.get("description", "")).strip()
        if not description:
            rejects.append(RejectedRecord(source, f"index {index}",
                                          f"{rec_id} has an empty description", raw))
            continue
        refs = [str(r) for r in rec.get("parents", [])]
        refs += [str(r) for r in rec.get(ref_field, [])]
        entries.append(AttackVectorEntry(id=rec_id, source=source,
                                         title=str(rec.get("name", rec_id)),
                                         description=description, references=tuple(refs)))


def ingest_snapshot(cve_doc: bytes | str | BinaryIO,
                    cwe_doc: bytes | str | BinaryIO,
                    capec_doc: bytes | str | BinaryIO) -> IngestResult:
    """Load the three snapshot documents; empty documents are legal.

    Well-formed entries are returned with their reference lists captured
    verbatim; malformed records land in the rejects list with a reason.
    """
    entries: list[AttackVectorEntry] = []
    rejects: list[RejectedRecord] = []
    _ingest_cve(cve_doc, entries, rejects)
    _ingest_record_array(cwe_doc, "CWE", "capec_refs", entries, rejects)
    _ingest_record_array(capec_doc, "CAPEC", "cwe_refs", entries, rejects)
    for reject in rejects:
        logger.warning("rejected %s record at %s: %s", reject.source, reject.locator,
                       reject.reason)
    return IngestResult(entries=tuple(entries), rejects=tuple(rejects))


@dataclass(frozen=True)
class AttackVectorSpace:
    """The attack-vector graph plus an id index over its entries."""

    graph: LabeledGraph
    entries: dict[str, AttackVectorEntry] = field(default_factory=dict, compare=False)
    warnings: tuple[str, ...] = ()

    def __contains__(self, attack_id: str) -> bool:
        return attack_id in self.entries

    def entry(self, attack_id: str) -> AttackVectorEntry:
        if attack_id not in self.entries:
            raise UnknownEntryError(f"{attack_id!r} is not in the attack-vector space")
        return self.entries[attack_id]

    def abstract_closure(self, cve_id: str) -> list[str]:
        """Weakness and pattern ids reachable from a CVE along the
        concrete->abstract arrows (excluding hierarchy links)."""
        out: list[str] = []
        frontier = [cve_id]
        seen = {cve_id}
        while frontier:
            current = frontier.pop(0)
            for arrow in self.graph.outgoing.get(current, ()):
                if arrow.relation not in (TAG_WEAKNESS_OF, TAG_PATTERN_OF):
                    continue
                if arrow.tgt in seen:
                    continue
                seen.add(arrow.tgt)
                out.append(arrow.tgt)
                frontier.append(arrow.tgt)
        return out


def build_av_graph(entries: Iterable[AttackVectorEntry]) -> AttackVectorSpace:
    """Assemble the attack-vector graph from ingested entries.

    Arrows run from the more concrete entry to the more abstract one:
    CVE->CWE (weakness-of), CWE->CAPEC (pattern-of) and child->parent inside
    one database (child-of). References to entries missing from the snapshot
    produce a warning, not an arrow.
    """
    by_id: dict[str, AttackVectorEntry] = {}
    for e in entries:
        by_id.setdefault(e.id, e)

    vertices = [
        Vertex(id=e.id, kind=VertexKind.ATTACK_VECTOR, label=e.title,
               attributes={"source": e.source, "description": e.description})
        for e in by_id.values()
    ]

    arrows: dict[tuple[str, str], Arrow] = {}
    warnings: list[str] = []

    def link(concrete: str, abstract: str, tag: str) -> None:
        if abstract not in by_id:
            warnings.append(f"{concrete} references {abstract}, absent from the snapshot")
            return
        key = (concrete, abstract)
        if key not in arrows:
            arrows[key] = Arrow(id=f"{concrete}--{abstract}", src=concrete, tgt=abstract,
                                relation=tag)

    for e in by_id.values():
        for ref in e.references:
            ref_source = source_of(ref)
            if ref_source is None:
                warnings.append(f"{e.id} carries malformed reference {ref!r}")
                continue
            if e.source == "CVE" and ref_source == "CWE":
                link(e.id, ref, TAG_WEAKNESS_OF)
            elif e.source == "CWE" and ref_source == "CAPEC":
                link(e.id, ref, TAG_PATTERN_OF)
            elif e.source == "CAPEC" and ref_source == "CWE":
                link(ref, e.id, TAG_PATTERN_OF)  # union of both sides, stored CWE->CAPEC
            elif e.source == ref_source and e.source in ("CWE", "CAPEC"):
                link(e.id, ref, TAG_CHILD_OF)  # parents list: child -> parent
            else:
                warnings.append(
                    f"{e.id} ({e.source}) reference to {ref} ({ref_source}) has no "
                    f"relationship rule")

    for message in warnings:
        logger.warning("%s", message)

    graph = LabeledGraph(kind=GraphKind.ATTACK, vertices=tuple(vertices),
                         arrows=tuple(sorted(arrows.values(), key=lambda a: a.id)))
    return AttackVectorSpace(graph=graph, entries=dict(by_id), warnings=tuple(warnings))


def relationship_scope(av: AttackVectorSpace, arrow: Arrow) -> str:
    """Scope of a relationship: intra when both endpoints share a database."""
    src = av.entries[arrow.src].source
    tgt = av.entries[arrow.tgt].source
    return SCOPE_INTRA if src == tgt else SCOPE_INTER


def neighborhood(av: AttackVectorSpace, attack_id: str, depth: int) -> LabeledGraph:
    """Subgraph of every entry within `depth` arrows of `attack_id`, walking
    arrows in either direction, with all induced arrows."""
    if attack_id not in av.entries:
        raise UnknownEntryError(f"{attack_id!r} is not in the attack-vector space")
    if depth < 0:
        raise ValueError("depth must be non-negative")

    keep = {attack_id}
    frontier = [attack_id]
    for _ in range(depth):
        nxt: list[str] = []
        for vid in frontier:
            for arrow in av.graph.outgoing.get(vid, ()):
                if arrow.tgt not in keep:
                    keep.add(arrow.tgt)
                    nxt.append(arrow.tgt)
            for arrow in av.graph.incoming.get(vid, ()):
                if arrow.src not in keep:
                    keep.add(arrow.src)
                    nxt.append(arrow.src)
        frontier = nxt

    vertices = tuple(v for v in av.graph.vertices if v.id in keep)
    arrows = tuple(a for a in av.graph.arrows if a.src in keep and a.tgt in keep)
    return LabeledGraph(kind=GraphKind.ATTACK, vertices=vertices, arrows=arrows)
