"""Command-line driver.

Exit codes: 0 clean, 1 validation or triage failure, 2 usage or I/O error,
3 analysis completed with a non-empty vulnerable-path set (mission at risk),
so review pipelines can gate on the result.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import MissionVulnError, TriageError, WorkspaceError
from .evidence import record_triage, relevant_evidence_map
from .graphs import GraphKind, validate, write_graphml
from .impact import mission_impact
from .workspace import Workspace


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="missionvuln",
        description="Mission-centric vulnerability analysis over a workspace directory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--workspace", "-w", required=True, help="workspace directory")
        return p

    p = add("ingest", "parse vulnerability snapshots and build the attack-vector graph")
    p.add_argument("--cve", help="CVE snapshot path (default: snapshots/cve.jsonl)")
    p.add_argument("--cwe", help="CWE snapshot path (default: snapshots/cwe.json)")
    p.add_argument("--capec", help="CAPEC snapshot path (default: snapshots/capec.json)")

    add("validate", "check every workspace graph against its invariants")

    add("compose", "project the hazard tables and compose the mission graph")

    p = add("match", "compute candidate attack vectors for every described element")
    p.add_argument("--config", help="matching configuration file (default: match-config.json)")

    triage = sub.add_parser("triage", help="analyst relevance decisions")
    triage_sub = triage.add_subparsers(dest="triage_command", required=True)
    p = triage_sub.add_parser("add", help="record one relevance decision")
    p.add_argument("--workspace", "-w", required=True)
    p.add_argument("--component", required=True, help="mission element id (vertex or arrow)")
    p.add_argument("--attack", required=True, help="attack id (CVE/CWE/CAPEC)")
    p.add_argument("--decision", required=True, choices=["relevant", "irrelevant"])
    p.add_argument("--analyst", required=True)
    p.add_argument("--rationale", default="")

    p = add("analyze", "compute attack chains and impact traces, write the report")
    p.add_argument("--max-len", type=int, default=8, help="chain length bound (default 8)")
    p.add_argument("--k", type=int, default=2, help="attack combination bound (default 2)")

    p = add("serve", "serve the HTTP API and triage UI")
    p.add_argument("--bind", default="127.0.0.1:8337", help="host:port (default 127.0.0.1:8337)")
    p.add_argument("--ui", help="directory of built UI assets")

    p = add("export", "export the mission graph annotated with impact-trace marks")
    p.add_argument("--out", help="output path (default: reports/mission-annotated.graphml)")
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--k", type=int, default=2)

    return parser


def cmd_ingest(args: argparse.Namespace) -> int:
    ws = Workspace(args.workspace)
    result, av = ws.run_ingest(
        Path(args.cve) if args.cve else None,
        Path(args.cwe) if args.cwe else None,
        Path(args.capec) if args.capec else None)
    summary = result.count_by_source()
    summary["rejects"] = len(result.rejects)
    print(json.dumps(summary, sort_keys=True))
    if result.rejects:
        for reject in result.rejects:
            print(f"rejected {reject.source} record at {reject.locator}: {reject.reason}",
                  file=sys.stderr)
    if not result.entries:
        print("warning: zero entries across all snapshot sources", file=sys.stderr)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    ws = Workspace(args.workspace)
    named = [("structure", GraphKind.STRUCTURE), ("requirements", GraphKind.REQUIREMENTS),
             ("function", GraphKind.FUNCTION), ("mission", GraphKind.MISSION)]
    loaded = {}
    total = 0
    for name, kind in named:
        if not ws.graph_path(name).exists():
            continue
        graph = ws.load_graph(name, kind)
        loaded[name] = graph
        sources = None
        if kind is GraphKind.MISSION and all(
                n in loaded for n in ("requirements", "function", "structure")):
            sources = (loaded["requirements"], loaded["function"], loaded["structure"])
        violations = validate(graph, sources=sources)
        total += len(violations)
        status = "ok" if not violations else f"{len(violations)} violation(s)"
        print(f"{name}: {status}")
        for violation in violations:
            print(f"  {violation}")
    return 0 if total == 0 else 1


def cmd_compose(args: argparse.Namespace) -> int:
    ws = Workspace(args.workspace)
    mission = ws.run_compose()
    print(f"mission graph: {len(mission.vertices)} vertices, {len(mission.arrows)} arrows, "
          f"{len(mission.descriptors)} descriptor sets")
    return 0


def cmd_match(args: argparse.Namespace) -> int:
    ws = Workspace(args.workspace)
    if args.config:
        from .evidence import MatchConfig
        ws.config_path.write_text(Path(args.config).read_text(encoding="utf-8"),
                                  encoding="utf-8")
    index = ws.run_match()
    for component in sorted(index):
        print(f"{component}: {len(index[component])} candidate(s)")
    return 0


def cmd_triage_add(args: argparse.Namespace) -> int:
    ws = Workspace(args.workspace)
    candidates = ws.load_matches()
    ledger = ws.load_ledger()
    record_triage(ledger, args.component, args.attack, args.decision,
                  args.analyst, args.rationale, candidates)
    ledger.save(ws.ledger_path)
    print(f"{args.component} / {args.attack}: {args.decision}")
    return 0


def _build_report(ws: Workspace, max_len: int, k: int):
    mission = ws.load_mission()
    structure = ws.load_structure()
    av = ws.load_av()
    ledger = ws.load_ledger()
    relevant = relevant_evidence_map(mission, av, ledger, k=k)
    return mission_impact(mission, structure, relevant, max_len=max_len, av=av)


def cmd_analyze(args: argparse.Namespace) -> int:
    ws = Workspace(args.workspace)
    report = _build_report(ws, args.max_len, args.k)
    ws.reports_dir.mkdir(parents=True, exist_ok=True)
    doc = report.to_dict()
    json_path = ws.reports_dir / "report.json"
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (ws.reports_dir / "report.txt").write_text(report.render_text(), encoding="utf-8")
    print(json_path)
    at_risk = len(report.chains) > 0
    return 3 if at_risk else 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.bind.rpartition(":")
    app = create_app(args.workspace, ui_dir=Path(args.ui) if args.ui else None)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    from .graphs.model import Arrow, LabeledGraph, Vertex

    ws = Workspace(args.workspace)
    report = _build_report(ws, args.max_len, args.k)
    mission = report.mission

    on_vertex: dict[str, list[int]] = {}
    on_arrow: dict[str, list[int]] = {}
    for index, trace in enumerate(report.traces):
        for vid in trace.vertices():
            on_vertex.setdefault(vid, []).append(index)
        for hop in trace.hops:
            on_arrow.setdefault(hop.arrow_id, []).append(index)

    def mark(attributes: dict, ids: list[int] | None) -> dict:
        if not ids:
            return attributes
        return {**attributes, "impact-traces": ",".join(str(i) for i in ids)}

    annotated = LabeledGraph(
        kind=mission.kind,
        vertices=tuple(
            Vertex(id=v.id, kind=v.kind, label=v.label,
                   attributes=mark(dict(v.attributes), on_vertex.get(v.id)))
            for v in mission.vertices),
        arrows=tuple(
            Arrow(id=a.id, src=a.src, tgt=a.tgt, relation=a.relation,
                  attributes=mark(dict(a.attributes), on_arrow.get(a.id)))
            for a in mission.arrows),
        descriptors=mission.descriptors,
    )
    out = Path(args.out) if args.out else ws.reports_dir / "mission-annotated.graphml"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(write_graphml(annotated))
    print(out)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    handlers = {
        "ingest": cmd_ingest,
        "validate": cmd_validate,
        "compose": cmd_compose,
        "match": cmd_match,
        "analyze": cmd_analyze,
        "serve": cmd_serve,
        "export": cmd_export,
    }
    try:
        if args.command == "triage":
            return cmd_triage_add(args)
        return handlers[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WorkspaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TriageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MissionVulnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
