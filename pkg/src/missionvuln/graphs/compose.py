"""Mission-specification composition.

Builds the mission graph from the requirements, function and structure
graphs plus a list of trace tuples. Traces run top-to-bottom (requirements
level at the source side); impact analysis later walks them in reverse.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import CompositionError, TraceDirectionError
from .model import (
    Arrow,
    DescriptorSet,
    GraphKind,
    LabeledGraph,
    Vertex,
    VertexKind,
)

#: Modeling level of each vertex kind: requirements < behavior < structure.
_LEVEL = {
    VertexKind.REQUIREMENT: 0,
    VertexKind.LOSS: 0,
    VertexKind.HAZARD: 0,
    VertexKind.CONTROL_ACTION: 1,
    VertexKind.SAFETY_CONSTRAINT: 1,
    VertexKind.BEHAVIOR: 1,
    VertexKind.COMPONENT: 2,
    VertexKind.ATTACK_VECTOR: 2,
}

Trace = tuple[str, str, str]


def compose_mission_spec(
    r: LabeledGraph,
    f: LabeledGraph,
    sigma: LabeledGraph,
    traces: Sequence[Trace] | Iterable[Trace],
) -> LabeledGraph:
    """Compose the mission graph from trace tuples over the three sources.

    The output contains exactly the vertices referenced by traces, one arrow
    per trace, and the structure descriptors of included structural elements.
    A trace tuple that coincides with an existing source arrow (same
    endpoints and relation) adopts that arrow's id and attributes, so the
    structure graph's own descriptors carry over for embedded links.
    """
    sources = (r, f, sigma)
    vertex_pool: dict[str, Vertex] = {}
    for g in sources:
        for v in g.vertices:
            vertex_pool.setdefault(v.id, v)

    arrow_pool: dict[Trace, Arrow] = {}
    for g in sources:
        for a in g.arrows:
            arrow_pool.setdefault((a.src, a.tgt, a.relation), a)

    included: dict[str, Vertex] = {}
    arrows: list[Arrow] = []
    arrow_ids: set[str] = set()

    for index, (src, tgt, relation) in enumerate(traces):
        for endpoint in (src, tgt):
            if endpoint not in vertex_pool:
                raise CompositionError(
                    f"trace endpoint {endpoint!r} does not exist in any source graph")
        src_v, tgt_v = vertex_pool[src], vertex_pool[tgt]
        if _LEVEL[src_v.kind] > _LEVEL[tgt_v.kind]:
            raise TraceDirectionError(
                f"trace {src!r} -> {tgt!r} points upward "
                f"({src_v.kind.value} above {tgt_v.kind.value}); traces run top-to-bottom")
        included.setdefault(src, src_v)
        included.setdefault(tgt, tgt_v)

        adopted = arrow_pool.get((src, tgt, relation))
        if adopted is not None and adopted.id not in arrow_ids:
            arrows.append(adopted)
            arrow_ids.add(adopted.id)
        elif adopted is None:
            new_id = f"t{index:03d}"
            arrows.append(Arrow(id=new_id, src=src, tgt=tgt, relation=relation))
            arrow_ids.add(new_id)

    descriptors: list[DescriptorSet] = []
    for d in sigma.descriptors:
        if d.owner_kind == "vertex" and d.owner in included:
            descriptors.append(d)
        elif d.owner_kind == "arrow" and d.owner in arrow_ids:
            descriptors.append(d)

    return LabeledGraph(
        kind=GraphKind.MISSION,
        vertices=tuple(included[vid] for vid in included),
        arrows=tuple(arrows),
        descriptors=tuple(descriptors),
    )
