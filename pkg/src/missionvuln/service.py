"""HTTP facade over a single workspace.

Thin by design: all analysis lives in the library modules, the service only
wires them to endpoints and serializes triage writes through one lock so
every acknowledged mutation is in the ledger file before the response.

Error payloads are ``{"code", "message", "detail"}`` with codes from a
closed set: unknown-graph-kind, unknown-component, unknown-candidate,
invalid-decision, missing-artifact, bad-request.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import TriageDecisionError, TriageError, WorkspaceError
from .evidence import TriageDecision, TriageLedger, record_triage, relevant_evidence_map
from .graphs import GraphKind, LabeledGraph
from .impact import mission_impact
from .workspace import Workspace

_GRAPH_NAMES = {
    "R": ("requirements", GraphKind.REQUIREMENTS),
    "F": ("function", GraphKind.FUNCTION),
    "Sigma": ("structure", GraphKind.STRUCTURE),
    "S": ("mission", GraphKind.MISSION),
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


class TriageRequest(BaseModel):
    component: str
    attack_id: str
    decision: str
    analyst: str
    rationale: str = ""


def _graph_dict(g: LabeledGraph) -> dict:
    return {
        "kind": g.kind.value,
        "vertices": [{"id": v.id, "kind": v.kind.value, "label": v.label,
                      "attributes": dict(sorted(v.attributes.items()))}
                     for v in sorted(g.vertices, key=lambda v: v.id)],
        "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt, "relation": a.relation,
                    "attributes": dict(sorted(a.attributes.items()))}
                   for a in sorted(g.arrows, key=lambda a: a.id)],
        "descriptors": [{"owner": d.owner, "owner_kind": d.owner_kind,
                         "namespace": d.namespace,
                         "entries": [{"category": e.category, "key": e.key, "value": e.value}
                                     for e in d.sorted_entries()]}
                        for d in sorted(g.descriptors, key=lambda d: d.sort_key())],
    }


def create_app(workspace_root: Path | str, ui_dir: Path | None = None,
               max_len: int = 8, k: int = 2) -> FastAPI:
    ws = Workspace(workspace_root)
    app = FastAPI(title="missionvuln", docs_url=None, redoc_url=None)

    # Immutable analysis inputs, loaded once; the ledger is re-read per
    # request so a restart always reproduces the same state as a live server.
    state = {
        "mission": ws.load_mission(),
        "structure": ws.load_structure(),
        "av": ws.load_av(),
        "matches": ws.load_matches(),
    }
    write_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content={
            "code": exc.code, "message": exc.message, "detail": exc.detail})

    def element_label(element_id: str) -> str:
        mission = state["mission"]
        vertex = mission.vertex_map.get(element_id)
        if vertex is not None:
            return vertex.label
        arrow = mission.arrow_map.get(element_id)
        if arrow is not None:
            return f"{arrow.src} -> {arrow.tgt}"
        return element_id

    @app.get("/api/graphs/{kind}")
    def get_graph(kind: str) -> dict:
        if kind == "AV":
            return _graph_dict(state["av"].graph)
        if kind not in _GRAPH_NAMES:
            raise ApiError(404, "unknown-graph-kind",
                           f"unknown graph kind {kind!r}",
                           "expected one of R, F, Sigma, S, AV")
        name, gk = _GRAPH_NAMES[kind]
        if kind == "S":
            return _graph_dict(state["mission"])
        if kind == "Sigma":
            return _graph_dict(state["structure"])
        try:
            return _graph_dict(ws.load_graph(name, gk))
        except WorkspaceError as exc:
            raise ApiError(404, "missing-artifact", str(exc)) from exc

    @app.get("/api/components")
    def get_components() -> list[dict]:
        ledger = ws.load_ledger()
        status = ledger.status_map()
        out = []
        for element_id, candidates in sorted(state["matches"].items()):
            relevant = sum(1 for (comp, _attack), decision in status.items()
                           if comp == element_id and decision == "relevant")
            mission = state["mission"]
            out.append({
                "id": element_id,
                "label": element_label(element_id),
                "element": "arrow" if element_id in mission.arrow_map else "vertex",
                "candidates": len(candidates),
                "relevant": relevant,
            })
        return out

    @app.get("/api/evidence/{component}")
    def get_evidence(component: str) -> dict:
        matches = state["matches"]
        if component not in matches:
            raise ApiError(404, "unknown-component",
                           f"{component!r} is not a described mission element")
        mission = state["mission"]
        av = state["av"]
        ledger = ws.load_ledger()
        status = ledger.status_map()
        descriptors = (mission.descriptors_of(component, "vertex")
                       + mission.descriptors_of(component, "arrow"))
        return {
            "component": component,
            "label": element_label(component),
            "descriptors": [{"namespace": d.namespace,
                             "entries": [{"category": e.category, "key": e.key,
                                          "value": e.value} for e in d.sorted_entries()]}
                            for d in descriptors],
            "candidates": [{
                "attack_id": c.attack_id,
                "title": av.entries[c.attack_id].title if c.attack_id in av.entries else "",
                "score": round(c.score, 4),
                "via": c.via,
                "status": status.get((component, c.attack_id), "candidate"),
            } for c in matches[component]],
        }

    @app.post("/api/triage")
    def post_triage(req: TriageRequest) -> dict:
        with write_lock:
            ledger = ws.load_ledger()
            try:
                record_triage(ledger, req.component, req.attack_id, req.decision,
                              req.analyst, req.rationale, state["matches"])
            except TriageDecisionError as exc:
                raise ApiError(400, "invalid-decision", str(exc)) from exc
            except TriageError as exc:
                raise ApiError(404, "unknown-candidate", str(exc)) from exc
            appended: TriageDecision = list(ledger)[-1]
            # The decision must be durable before the acknowledgment leaves.
            TriageLedger.append_to_file(ws.ledger_path, appended)
        return {"ok": True, "component": req.component, "attack_id": req.attack_id,
                "decision": req.decision}

    def build_report() -> dict:
        ledger = ws.load_ledger()
        relevant = relevant_evidence_map(state["mission"], state["av"], ledger, k=k)
        report = mission_impact(state["mission"], state["structure"], relevant,
                                max_len=max_len, av=state["av"])
        return report.to_dict()

    @app.get("/api/impact")
    def get_impact() -> dict:
        return build_report()

    @app.get("/api/report", response_class=PlainTextResponse)
    def get_report() -> str:
        ledger = ws.load_ledger()
        relevant = relevant_evidence_map(state["mission"], state["av"], ledger, k=k)
        report = mission_impact(state["mission"], state["structure"], relevant,
                                max_len=max_len, av=state["av"])
        return report.render_text()

    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if candidate.is_dir():
            ui_dir = candidate
    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:
        @app.get("/", response_class=PlainTextResponse)
        def index() -> str:
            return ("missionvuln service is running; the triage UI assets are not "
                    "built. API under /api/.")

    return app
