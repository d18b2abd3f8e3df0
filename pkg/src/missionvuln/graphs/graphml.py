"""GraphML reader/writer for labeled graphs.

The codec uses a fixed key registry so documents are portable:

* ``ma.kind``      (graph)      graph role, one of R | F | Sigma | S | AV
* ``ma.vkind``     (node)       vertex kind from the closed vocabulary
* ``ma.label``     (node)       display label
* ``ma.relation``  (edge)       relation tag
* ``ma.ns``        (node/edge)  descriptor namespace
* ``ma.desc.<category>.<key>``  (node/edge) one descriptor entry

Any other ``<data>`` key is preserved verbatim as a plain attribute, and
plain attributes are written back under their own key ids, so parse∘write is
the identity on the data model. Output is deterministic: vertices then
arrows, each sorted by id, attributes sorted by key.
"""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from typing import BinaryIO

from ..errors import GraphIntegrityError, GraphKindError, GraphParseError
from .model import (
    Arrow,
    DescriptorEntry,
    DescriptorSet,
    GraphKind,
    LabeledGraph,
    Vertex,
    VertexKind,
    validate,
)

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

KEY_KIND = "ma.kind"
KEY_VKIND = "ma.vkind"
KEY_LABEL = "ma.label"
KEY_RELATION = "ma.relation"
KEY_NS = "ma.ns"
DESC_PREFIX = "ma.desc."

_RESERVED = {KEY_KIND, KEY_VKIND, KEY_LABEL, KEY_RELATION, KEY_NS}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _data_of(elem: ET.Element) -> dict[str, str]:
    out: dict[str, str] = {}
    for child in elem:
        if _local(child.tag) == "data" and "key" in child.attrib:
            out[child.attrib["key"]] = child.text or ""
    return out


def _split_descriptor_key(key: str) -> tuple[str, str]:
    rest = key[len(DESC_PREFIX):]
    category, _, entry_key = rest.partition(".")
    return category, entry_key


def parse_graphml(document: bytes | str | BinaryIO, expected_kind: GraphKind) -> LabeledGraph:
    """Parse a GraphML document into a validated labeled graph.

    Raises GraphParseError on malformed XML (with line/column), GraphKindError
    when the declared kind disagrees with `expected_kind`, and
    GraphIntegrityError naming the first element whose invariants fail.
    """
    if hasattr(document, "read"):
        document = document.read()
    if isinstance(document, str):
        document = document.encode("utf-8")
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise GraphParseError(f"malformed GraphML: {exc.msg if hasattr(exc, 'msg') else exc}",
                              line=line, column=column) from exc

    graph_elem = None
    for child in root.iter():
        if _local(child.tag) == "graph":
            graph_elem = child
            break
    if graph_elem is None:
        raise GraphParseError("document contains no <graph> element")

    graph_data = _data_of(graph_elem)
    declared = graph_data.get(KEY_KIND)
    if declared is not None:
        try:
            declared_kind = GraphKind(declared)
        except ValueError:
            raise GraphKindError(f"unknown graph kind {declared!r}") from None
        if declared_kind != expected_kind:
            raise GraphKindError(
                f"declared kind {declared_kind.value!r} does not match expected "
                f"{expected_kind.value!r}")

    vertices: list[Vertex] = []
    arrows: list[Arrow] = []
    descriptors: list[DescriptorSet] = []

    for elem in graph_elem:
        tag = _local(elem.tag)
        if tag == "node":
            vid = elem.attrib.get("id", "")
            data = _data_of(elem)
            kind_name = data.pop(KEY_VKIND, VertexKind.COMPONENT.value)
            try:
                vkind = VertexKind(kind_name)
            except ValueError:
                raise GraphParseError(
                    f"node {vid!r} declares unknown vertex kind {kind_name!r}") from None
            label = data.pop(KEY_LABEL, vid)
            desc = _extract_descriptor(vid, "vertex", data)
            if desc is not None:
                descriptors.append(desc)
            vertices.append(Vertex(id=vid, kind=vkind, label=label, attributes=data))
        elif tag == "edge":
            aid = elem.attrib.get("id", "")
            src = elem.attrib.get("source", "")
            tgt = elem.attrib.get("target", "")
            data = _data_of(elem)
            relation = data.pop(KEY_RELATION, "")
            desc = _extract_descriptor(aid, "arrow", data)
            if desc is not None:
                descriptors.append(desc)
            arrows.append(Arrow(id=aid, src=src, tgt=tgt, relation=relation, attributes=data))

    graph = LabeledGraph(
        kind=expected_kind,
        vertices=tuple(vertices),
        arrows=tuple(arrows),
        descriptors=tuple(descriptors),
    )
    violations = validate(graph)
    if violations:
        first = violations[0]
        raise GraphIntegrityError(
            f"{len(violations)} invariant violation(s); first: {first}", element=first.element)
    return graph


def _extract_descriptor(owner: str, owner_kind: str, data: dict[str, str]) -> DescriptorSet | None:
    entry_keys = [k for k in data if k.startswith(DESC_PREFIX)]
    namespace = data.pop(KEY_NS, None)
    if not entry_keys and namespace is None:
        return None
    entries = []
    for raw in sorted(entry_keys):
        category, entry_key = _split_descriptor_key(raw)
        entries.append(DescriptorEntry(category=category, key=entry_key, value=data.pop(raw)))
    return DescriptorSet(
        owner=owner,
        owner_kind=owner_kind,
        namespace=namespace or owner,
        entries=tuple(entries),
    )


def write_graphml(g: LabeledGraph) -> bytes:
    """Serialize a valid labeled graph to deterministic UTF-8 GraphML bytes.

    Two serializations of equal graphs are byte-identical.
    """
    desc_by_owner: dict[tuple[str, str], DescriptorSet] = {
        (d.owner_kind, d.owner): d for d in g.descriptors
    }

    # Collect every key id that will appear, with its GraphML domain.
    key_domains: dict[str, str] = {KEY_KIND: "graph"}
    for v in sorted(g.vertices, key=lambda v: v.id):
        key_domains[KEY_VKIND] = "node"
        key_domains[KEY_LABEL] = "node"
        for attr in v.attributes:
            key_domains.setdefault(attr, "all")
    for a in g.arrows:
        key_domains[KEY_RELATION] = "edge"
        for attr in a.attributes:
            key_domains.setdefault(attr, "all")
    for d in g.descriptors:
        key_domains[KEY_NS] = "all"
        for e in d.entries:
            key_domains.setdefault(f"{DESC_PREFIX}{e.category}.{e.key}", "all")

    root = ET.Element("graphml", {"xmlns": GRAPHML_NS})
    for key_id in sorted(key_domains):
        ET.SubElement(root, "key", {
            "id": key_id,
            "for": key_domains[key_id],
            "attr.name": key_id,
            "attr.type": "string",
        })

    graph_elem = ET.SubElement(root, "graph", {"edgedefault": "directed"})
    _append_data(graph_elem, KEY_KIND, g.kind.value)

    for v in sorted(g.vertices, key=lambda v: v.id):
        node = ET.SubElement(graph_elem, "node", {"id": v.id})
        _append_data(node, KEY_VKIND, v.kind.value)
        _append_data(node, KEY_LABEL, v.label)
        _append_descriptor(node, desc_by_owner.get(("vertex", v.id)))
        for attr in sorted(v.attributes):
            _append_data(node, attr, v.attributes[attr])

    for a in sorted(g.arrows, key=lambda a: a.id):
        edge = ET.SubElement(graph_elem, "edge", {"id": a.id, "source": a.src, "target": a.tgt})
        _append_data(edge, KEY_RELATION, a.relation)
        _append_descriptor(edge, desc_by_owner.get(("arrow", a.id)))
        for attr in sorted(a.attributes):
            _append_data(edge, attr, a.attributes[attr])

    ET.indent(root, space="  ")
    buf = io.BytesIO()
    ET.ElementTree(root).write(buf, encoding="UTF-8", xml_declaration=True)
    buf.write(b"\n")
    return buf.getvalue()


def _append_data(elem: ET.Element, key: str, value: str) -> None:
    data = ET.SubElement(elem, "data", {"key": key})
    data.text = value


def _append_descriptor(elem: ET.Element, desc: DescriptorSet | None) -> None:
    if desc is None:
        return
    _append_data(elem, KEY_NS, desc.namespace)
    for e in desc.sorted_entries():
        _append_data(elem, f"{DESC_PREFIX}{e.category}.{e.key}", e.value)
