from __future__ import annotations

import random
import string

import pytest

from missionvuln import fixtures
from missionvuln.graphs import Arrow, GraphKind, LabeledGraph, Vertex, VertexKind


@pytest.fixture(scope="session")
def uav():
    return fixtures.uav_bundle()


@pytest.fixture(scope="session")
def uav_untriaged():
    return fixtures.uav_bundle(with_triage=False)


def random_structure_graph(rng: random.Random, max_vertices: int = 10,
                           allow_contains: bool = False) -> LabeledGraph:
    """Random directed multigraph of components for property tests."""
    n = rng.randint(1, max_vertices)
    vertex_ids = [f"v{i}" for i in range(n)]
    vertices = tuple(Vertex(id=vid, kind=VertexKind.COMPONENT, label=vid)
                     for vid in vertex_ids)
    relations = ["flow", "bus", "link"]
    if allow_contains:
        relations.append("contains")
    arrows = []
    if n > 1:
        for i in range(rng.randint(0, 2 * n)):
            src = rng.choice(vertex_ids)
            tgt = rng.choice([vid for vid in vertex_ids if vid != src])
            arrows.append(Arrow(id=f"a{i}", src=src, tgt=tgt,
                                relation=rng.choice(relations)))
    return LabeledGraph(kind=GraphKind.STRUCTURE, vertices=vertices, arrows=tuple(arrows))


def random_evidence_map(rng: random.Random, g: LabeledGraph,
                        vertex_rate: float = 0.4,
                        arrow_rate: float = 0.2) -> dict[str, frozenset[str]]:
    """Random relevant-evidence assignment over vertices and arrows."""
    pool = [f"CVE-2020-{1000 + i}" for i in range(6)]
    out: dict[str, frozenset[str]] = {}
    for v in g.vertices:
        if rng.random() < vertex_rate:
            out[v.id] = frozenset(rng.sample(pool, rng.randint(1, 3)))
    for a in g.arrows:
        if rng.random() < arrow_rate:
            out[a.id] = frozenset(rng.sample(pool, rng.randint(1, 2)))
    return out


def random_attributed_graph(rng: random.Random, kind: GraphKind = GraphKind.STRUCTURE,
                            max_vertices: int = 8) -> LabeledGraph:
    """Random graph with attributes and descriptors, for round-trip tests."""
    from missionvuln.graphs import DescriptorEntry, DescriptorSet
    from missionvuln.graphs.model import DESCRIPTOR_CATEGORIES

    def rand_word() -> str:
        return "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(2, 8)))

    def rand_text() -> str:
        return " ".join(rand_word() for _ in range(rng.randint(1, 5)))

    n = rng.randint(0, max_vertices)
    vertices = []
    for i in range(n):
        attrs = {rand_word(): rand_text() for _ in range(rng.randint(0, 3))}
        vertices.append(Vertex(id=f"v{i}", kind=VertexKind.COMPONENT,
                               label=rand_text(), attributes=attrs))
    arrows = []
    if n:
        for i in range(rng.randint(0, 2 * n)):
            attrs = {rand_word(): rand_text() for _ in range(rng.randint(0, 2))}
            arrows.append(Arrow(id=f"e{i}", src=f"v{rng.randrange(n)}",
                                tgt=f"v{rng.randrange(n)}", relation=rand_word(),
                                attributes=attrs))
    descriptors = []
    if kind in (GraphKind.STRUCTURE, GraphKind.MISSION):
        for v in vertices:
            if rng.random() < 0.4:
                entries = tuple(
                    DescriptorEntry(category=rng.choice(DESCRIPTOR_CATEGORIES),
                                    key=f"k{j}", value=rand_text())
                    for j in range(rng.randint(1, 3)))
                descriptors.append(DescriptorSet(owner=v.id, owner_kind="vertex",
                                                 namespace=rand_word(), entries=entries))
        for a in arrows:
            if rng.random() < 0.2:
                entries = (DescriptorEntry(category=rng.choice(DESCRIPTOR_CATEGORIES),
                                           key="k0", value=rand_text()),)
                descriptors.append(DescriptorSet(owner=a.id, owner_kind="arrow",
                                                 namespace=rand_word(), entries=entries))
    return LabeledGraph(kind=kind, vertices=tuple(vertices), arrows=tuple(arrows),
                        descriptors=tuple(descriptors))


def brute_force_attested_paths(g: LabeledGraph, relevant: dict[str, frozenset[str]],
                               max_len: int) -> set[tuple]:
    """Independent oracle: exhaustive enumeration of simple paths whose every
    hop is a non-containment arrow with CVE evidence on the arrow or target,
    plus trivial paths at evidenced vertices. Returns canonical keys."""
    def hop_ok(a: Arrow) -> bool:
        if a.relation == "contains":
            return False
        pool = relevant.get(a.id, frozenset()) | relevant.get(a.tgt, frozenset())
        return any(x.startswith("CVE-") for x in pool)

    results: set[tuple] = set()
    for v in g.vertices:
        if relevant.get(v.id):
            results.add((v.id, ()))

    usable = [a for a in g.arrows if hop_ok(a)]

    def grow(path: list[Arrow], seen: set[str]) -> None:
        if path:
            results.add((path[0].src, tuple(a.id for a in path)))
        if len(path) >= max_len:
            return
        tail = path[-1].tgt if path else None
        for a in usable:
            if path and a.src != tail:
                continue
            if not path and a.src not in seen:
                continue
            if a.tgt in seen:
                continue
            path.append(a)
            seen.add(a.tgt)
            grow(path, seen)
            seen.discard(a.tgt)
            path.pop()

    for v in g.vertices:
        grow([], {v.id})
    return results


def pathset_keys(paths) -> set[tuple]:
    return {(p.start, p.arrow_ids()) for p in paths}
