"""Workspace: the on-disk layout tying a mission analysis together.

A workspace is fully reconstructible from its files; nothing lives only in
memory. Layout under the root:

    graphs/structure.graphml     hand-authored structure graph
    graphs/requirements.graphml  written by `compose`
    graphs/function.graphml      written by `compose`
    graphs/mission.graphml       written by `compose`
    snapshots/cve.jsonl|cwe.json|capec.json
    stpa.json                    hazard-analysis dataset
    traces.json                  mission trace tuples
    match-config.json            matching configuration
    av.graphml                   written by `ingest`
    matches.json                 written by `match`
    triage.jsonl                 append-only triage ledger
    reports/report.json|report.txt   written by `analyze`
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import WorkspaceError
from .evidence import (
    Candidate,
    MatchConfig,
    TriageLedger,
    build_candidate_index,
)
from .graphs import GraphKind, LabeledGraph, parse_graphml, write_graphml
from .stpa import StpaDataset, parse_stpa_tables
from .vulnfeeds import AttackVectorSpace, IngestResult, build_av_graph, ingest_snapshot


@dataclass
class Workspace:
    root: Path

    def __init__(self, root: Path | str):
        self.root = Path(root)

    # -- paths ---------------------------------------------------------

    @property
    def graphs_dir(self) -> Path:
        return self.root / "graphs"

    @property
    def snapshots_dir(self) -> Path:
        return self.root / "snapshots"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    def graph_path(self, name: str) -> Path:
        return self.graphs_dir / f"{name}.graphml"

    @property
    def av_path(self) -> Path:
        return self.root / "av.graphml"

    @property
    def matches_path(self) -> Path:
        return self.root / "matches.json"

    @property
    def ledger_path(self) -> Path:
        return self.root / "triage.jsonl"

    @property
    def stpa_path(self) -> Path:
        return self.root / "stpa.json"

    @property
    def traces_path(self) -> Path:
        return self.root / "traces.json"

    @property
    def config_path(self) -> Path:
        return self.root / "match-config.json"

    # -- loaders -------------------------------------------------------

    def _require(self, path: Path, produced_by: str) -> Path:
        if not path.exists():
            raise WorkspaceError(
                f"workspace artifact missing: {path.relative_to(self.root)} "
                f"(produced by {produced_by})")
        return path

    def load_graph(self, name: str, kind: GraphKind) -> LabeledGraph:
        produced_by = "the modeling step" if name == "structure" else "`compose`"
        path = self._require(self.graph_path(name), produced_by)
        return parse_graphml(path.read_bytes(), kind)

    def load_structure(self) -> LabeledGraph:
        return self.load_graph("structure", GraphKind.STRUCTURE)

    def load_mission(self) -> LabeledGraph:
        return self.load_graph("mission", GraphKind.MISSION)

    def load_stpa(self) -> StpaDataset:
        return parse_stpa_tables(self._require(self.stpa_path, "the modeling step").read_bytes())

    def load_traces(self) -> list[tuple[str, str, str]]:
        path = self._require(self.traces_path, "the modeling step")
        return [tuple(t) for t in json.loads(path.read_text(encoding="utf-8"))]

    def load_config(self) -> MatchConfig:
        if self.config_path.exists():
            return MatchConfig.from_json(self.config_path.read_text(encoding="utf-8"))
        return MatchConfig()

    def load_av(self) -> AttackVectorSpace:
        path = self._require(self.av_path, "`ingest`")
        graph = parse_graphml(path.read_bytes(), GraphKind.ATTACK)
        from .vulnfeeds import AttackVectorEntry
        entries = {
            v.id: AttackVectorEntry(
                id=v.id, source=v.attributes.get("source", ""), title=v.label,
                description=v.attributes.get("description", ""))
            for v in graph.vertices
        }
        return AttackVectorSpace(graph=graph, entries=entries)

    def load_ledger(self) -> TriageLedger:
        return TriageLedger.load(self.ledger_path)

    def load_matches(self) -> dict[str, list[Candidate]]:
        path = self._require(self.matches_path, "`match`")
        raw = json.loads(path.read_text(encoding="utf-8"))
        return {
            component: [Candidate(attack_id=c["attack_id"], score=c["score"], via=c["via"],
                                  tokens=tuple(c.get("tokens", ())))
                        for c in cands]
            for component, cands in raw.items()
        }

    # -- producers -----------------------------------------------------

    def run_ingest(self, cve: Path | None = None, cwe: Path | None = None,
                   capec: Path | None = None) -> tuple[IngestResult, AttackVectorSpace]:
        cve = cve or self.snapshots_dir / "cve.jsonl"
        cwe = cwe or self.snapshots_dir / "cwe.json"
        capec = capec or self.snapshots_dir / "capec.json"
        for path in (cve, cwe, capec):
            if not Path(path).exists():
                raise FileNotFoundError(f"snapshot not readable: {path}")
        result = ingest_snapshot(Path(cve).read_bytes(), Path(cwe).read_bytes(),
                                 Path(capec).read_bytes())
        av = build_av_graph(result.entries)
        self.av_path.write_bytes(write_graphml(av.graph))
        return result, av

    def run_compose(self) -> LabeledGraph:
        from .graphs import compose_mission_spec
        from .stpa import project_to_function, project_to_requirements

        dataset = self.load_stpa()
        requirements = project_to_requirements(dataset)
        function = project_to_function(dataset)
        structure = self.load_structure()
        mission = compose_mission_spec(requirements, function, structure, self.load_traces())
        self.graphs_dir.mkdir(parents=True, exist_ok=True)
        self.graph_path("requirements").write_bytes(write_graphml(requirements))
        self.graph_path("function").write_bytes(write_graphml(function))
        self.graph_path("mission").write_bytes(write_graphml(mission))
        return mission

    def run_match(self) -> dict[str, list[Candidate]]:
        mission = self.load_mission()
        av = self.load_av()
        index = build_candidate_index(mission, av, self.load_config())
        payload = {
            component: [{"attack_id": c.attack_id, "score": c.score, "via": c.via,
                         "tokens": list(c.tokens)} for c in cands]
            for component, cands in index.items()
        }
        self.matches_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
        return index
