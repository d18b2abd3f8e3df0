"""Bundled UAV reconnaissance case study.

The fixture reproduces the worked small-UAV mission: the structure graph of
the airframe/ground segment, the hazard-analysis tables (the printed
fragment plus the reconstructed upstream control actions flagged as such),
the offline vulnerability snapshot with six CVEs, four CWEs and five
CAPECs, the mission trace tuples, and the recorded analyst triage.

``uav_bundle()`` assembles everything in memory; ``materialize()`` lays the
same data out as a runnable workspace directory.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..evidence import MatchConfig, TriageLedger
from ..graphs import GraphKind, LabeledGraph, compose_mission_spec, parse_graphml
from ..stpa import StpaDataset, parse_stpa_tables, project_to_function, project_to_requirements
from ..vulnfeeds import AttackVectorSpace, IngestResult, build_av_graph, ingest_snapshot


def uav_dir() -> Path:
    return Path(resources.files(__package__) / "uav")  # type: ignore[arg-type]


def load_structure() -> LabeledGraph:
    return parse_graphml((uav_dir() / "structure.graphml").read_bytes(),
                         GraphKind.STRUCTURE)


def load_stpa(extended: bool = True) -> StpaDataset:
    name = "stpa_extended.json" if extended else "stpa_tables.json"
    return parse_stpa_tables((uav_dir() / name).read_bytes())


def load_traces() -> list[tuple[str, str, str]]:
    raw = json.loads((uav_dir() / "traces.json").read_text(encoding="utf-8"))
    return [tuple(t) for t in raw]


def load_match_config() -> MatchConfig:
    return MatchConfig.from_json((uav_dir() / "match-config.json").read_text(encoding="utf-8"))


def load_triage() -> TriageLedger:
    return TriageLedger.load(uav_dir() / "triage.jsonl")


def ingest() -> IngestResult:
    snapshots = uav_dir() / "snapshots"
    return ingest_snapshot(
        (snapshots / "cve.jsonl").read_bytes(),
        (snapshots / "cwe.json").read_bytes(),
        (snapshots / "capec.json").read_bytes(),
    )


@dataclass(frozen=True)
class UavBundle:
    requirements: LabeledGraph
    function: LabeledGraph
    structure: LabeledGraph
    mission: LabeledGraph
    av: AttackVectorSpace
    ledger: TriageLedger
    config: MatchConfig
    traces: list[tuple[str, str, str]]


def uav_bundle(with_triage: bool = True) -> UavBundle:
    """The full case study, assembled from the bundled files."""
    dataset = load_stpa(extended=True)
    requirements = project_to_requirements(dataset)
    function = project_to_function(dataset)
    structure = load_structure()
    traces = load_traces()
    mission = compose_mission_spec(requirements, function, structure, traces)
    av = build_av_graph(ingest().entries)
    ledger = load_triage() if with_triage else TriageLedger()
    return UavBundle(requirements=requirements, function=function, structure=structure,
                     mission=mission, av=av, ledger=ledger, config=load_match_config(),
                     traces=traces)


def materialize(dest: Path | str, include_triage: bool = True) -> Path:
    """Write the fixture out as a workspace directory ready for the CLI."""
    from ..workspace import Workspace  # local import; workspace depends on fixtures' formats

    dest = Path(dest)
    (dest / "graphs").mkdir(parents=True, exist_ok=True)
    (dest / "snapshots").mkdir(parents=True, exist_ok=True)

    src = uav_dir()
    shutil.copy(src / "structure.graphml", dest / "graphs" / "structure.graphml")
    shutil.copy(src / "stpa_extended.json", dest / "stpa.json")
    shutil.copy(src / "traces.json", dest / "traces.json")
    shutil.copy(src / "match-config.json", dest / "match-config.json")
    for name in ("cve.jsonl", "cwe.json", "capec.json"):
        shutil.copy(src / "snapshots" / name, dest / "snapshots" / name)
    if include_triage:
        shutil.copy(src / "triage.jsonl", dest / "triage.jsonl")
    else:
        (dest / "triage.jsonl").write_text("", encoding="utf-8")
    return Path(dest)
