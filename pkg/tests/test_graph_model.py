from __future__ import annotations

import random

import pytest

from missionvuln.graphs import (
    Arrow,
    DescriptorEntry,
    DescriptorSet,
    GraphKind,
    LabeledGraph,
    Vertex,
    VertexKind,
    validate,
)

from conftest import random_attributed_graph


def _component(vid: str) -> Vertex:
    return Vertex(id=vid, kind=VertexKind.COMPONENT, label=vid)


def test_valid_uav_structure_has_no_violations(uav):
    assert validate(uav.structure) == []


def test_uav_structure_violations_rechecked_independently(uav):
    # Independent oracle: re-verify each invariant with separate scans.
    g = uav.structure
    vertex_ids = [v.id for v in g.vertices]
    assert len(vertex_ids) == len(set(vertex_ids))
    arrow_ids = [a.id for a in g.arrows]
    assert len(arrow_ids) == len(set(arrow_ids))
    for a in g.arrows:
        assert a.src in set(vertex_ids) and a.tgt in set(vertex_ids)
    for d in g.descriptors:
        table = vertex_ids if d.owner_kind == "vertex" else arrow_ids
        assert d.owner in table
        keys = [e.key for e in d.entries]
        assert len(keys) == len(set(keys))


def test_duplicate_vertex_id_is_one_violation():
    g = LabeledGraph(kind=GraphKind.STRUCTURE,
                     vertices=(_component("x"), _component("x")))
    violations = validate(g)
    assert len(violations) == 1
    assert violations[0].invariant == "unique-vertex-id"
    assert violations[0].element == "x"


def test_dangling_arrow_violation_names_the_arrow():
    g = LabeledGraph(kind=GraphKind.STRUCTURE, vertices=(_component("a"),),
                     arrows=(Arrow(id="e1", src="a", tgt="nX", relation="flow"),))
    violations = validate(g)
    assert [v.element for v in violations] == ["e1"]


def test_descriptor_owner_must_exist():
    d = DescriptorSet(owner="ghost", owner_kind="vertex", namespace="ns",
                      entries=(DescriptorEntry("property", "k", "v"),))
    g = LabeledGraph(kind=GraphKind.STRUCTURE, vertices=(_component("a"),),
                     descriptors=(d,))
    assert any(v.invariant == "descriptor-owner" for v in validate(g))


def test_descriptor_category_closed_vocabulary():
    d = DescriptorSet(owner="a", owner_kind="vertex", namespace="ns",
                      entries=(DescriptorEntry("made-up", "k", "v"),))
    g = LabeledGraph(kind=GraphKind.STRUCTURE, vertices=(_component("a"),),
                     descriptors=(d,))
    assert any(v.invariant == "descriptor-category" for v in validate(g))


def test_descriptors_only_on_structure_and_mission():
    d = DescriptorSet(owner="a", owner_kind="vertex", namespace="ns",
                      entries=(DescriptorEntry("property", "k", "v"),))
    g = LabeledGraph(kind=GraphKind.REQUIREMENTS, vertices=(_component("a"),),
                     descriptors=(d,))
    assert any(v.invariant == "descriptor-kind" for v in validate(g))


def test_duplicate_descriptor_key_per_owner():
    d = DescriptorSet(owner="a", owner_kind="vertex", namespace="ns",
                      entries=(DescriptorEntry("property", "k", "v1"),
                               DescriptorEntry("functionality", "k", "v2")))
    g = LabeledGraph(kind=GraphKind.STRUCTURE, vertices=(_component("a"),),
                     descriptors=(d,))
    assert any(v.invariant == "descriptor-key-unique" for v in validate(g))


def test_mission_vertex_outside_sources_is_rejected(uav):
    stray = _component("not-in-any-source")
    s = LabeledGraph(kind=GraphKind.MISSION,
                     vertices=uav.mission.vertices + (stray,),
                     arrows=uav.mission.arrows,
                     descriptors=uav.mission.descriptors)
    violations = validate(s, sources=(uav.requirements, uav.function, uav.structure))
    assert [v for v in violations if v.invariant == "mission-vertex-source"
            and v.element == "not-in-any-source"]


def test_mission_descriptor_outside_structure_is_rejected(uav):
    alien = DescriptorSet(owner="GPS", owner_kind="vertex", namespace="forged",
                          entries=(DescriptorEntry("property", "k", "v"),))
    s = LabeledGraph(kind=GraphKind.MISSION, vertices=uav.mission.vertices,
                     arrows=uav.mission.arrows,
                     descriptors=tuple(d for d in uav.mission.descriptors
                                       if d.owner != "GPS") + (alien,))
    violations = validate(s, sources=(uav.requirements, uav.function, uav.structure))
    assert any(v.invariant == "mission-descriptor-source" for v in violations)


def test_composed_mission_validates_against_sources(uav):
    assert validate(uav.mission,
                    sources=(uav.requirements, uav.function, uav.structure)) == []


def test_random_corruptions_are_caught():
    rng = random.Random(1729)
    caught = 0
    for _ in range(60):
        g = random_attributed_graph(rng)
        assert validate(g) == []
        if not g.arrows:
            continue
        arrows = list(g.arrows)
        victim = rng.randrange(len(arrows))
        a = arrows[victim]
        arrows[victim] = Arrow(id=a.id, src=a.src, tgt="__missing__", relation=a.relation,
                               attributes=a.attributes)
        bad = LabeledGraph(kind=g.kind, vertices=g.vertices, arrows=tuple(arrows),
                           descriptors=g.descriptors)
        violations = validate(bad)
        assert any(v.element == a.id and v.invariant == "arrow-endpoint"
                   for v in violations)
        caught += 1
    assert caught > 20


def test_graph_equality_is_order_insensitive():
    a, b = _component("a"), _component("b")
    e = Arrow(id="e", src="a", tgt="b", relation="flow")
    g1 = LabeledGraph(kind=GraphKind.STRUCTURE, vertices=(a, b), arrows=(e,))
    g2 = LabeledGraph(kind=GraphKind.STRUCTURE, vertices=(b, a), arrows=(e,))
    assert g1 == g2


def test_multigraph_parallel_arrows_allowed():
    g = LabeledGraph(kind=GraphKind.STRUCTURE,
                     vertices=(_component("a"), _component("b")),
                     arrows=(Arrow(id="e1", src="a", tgt="b", relation="flow"),
                             Arrow(id="e2", src="a", tgt="b", relation="flow")))
    assert validate(g) == []


@pytest.mark.parametrize("kind", list(VertexKind))
def test_vertex_kind_vocabulary_round_trips(kind):
    assert VertexKind(kind.value) is kind
