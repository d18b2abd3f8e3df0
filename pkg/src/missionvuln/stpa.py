"""Hazard-analysis dataset: unacceptable losses, hazards, hazardous control
actions and safety constraints, plus their projection into the requirements
and function graphs.

The analysis itself is human work; this module ingests its tabular output
(a JSON document with four record arrays) and cross-validates every
reference before anything downstream consumes it.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import BinaryIO

from .errors import StpaDuplicateError, StpaFormatError, StpaReferenceError
from .graphs.model import Arrow, GraphKind, LabeledGraph, Vertex, VertexKind

_LOSS_ID = re.compile(r"^L\d+$")
_HAZARD_ID = re.compile(r"^H\d+$")
_CA_ID = re.compile(r"^CA\d+\.\d+$")
_SC_ID = re.compile(r"^SC\d+\.\d+$")

#: The four hazardous-condition slots of a control action, in table order.
CONDITION_SLOTS = ("not_providing", "providing", "incorrect_timing", "stopped_or_too_long")


@dataclass(frozen=True)
class UnacceptableLoss:
    id: str
    description: str
    priority: int  # 1 = highest


@dataclass(frozen=True)
class Hazard:
    id: str
    description: str
    worst_case_environment: str
    associated_losses: tuple[str, ...]


@dataclass(frozen=True)
class HazardCondition:
    """One populated condition slot: the hazards it raises plus narrative."""

    hazards: tuple[str, ...]
    narrative: str = ""


@dataclass(frozen=True)
class HazardousControlAction:
    id: str
    name: str
    not_providing: HazardCondition | None = None
    providing: HazardCondition | None = None
    incorrect_timing: HazardCondition | None = None
    stopped_or_too_long: HazardCondition | None = None
    reconstructed: bool = False

    def conditions(self) -> dict[str, HazardCondition]:
        out = {}
        for slot in CONDITION_SLOTS:
            cond = getattr(self, slot)
            if cond is not None:
                out[slot] = cond
        return out

    def cited_hazards(self) -> tuple[str, ...]:
        seen: list[str] = []
        for cond in self.conditions().values():
            for hid in cond.hazards:
                if hid not in seen:
                    seen.append(hid)
        return tuple(seen)


@dataclass(frozen=True)
class SafetyConstraint:
    id: str
    related_control_action: str
    text: str
    refines: tuple[str, ...] = ()  # higher-level constraint ids this one refines
    reconstructed: bool = False


@dataclass(frozen=True)
class StpaDataset:
    losses: tuple[UnacceptableLoss, ...] = ()
    hazards: tuple[Hazard, ...] = ()
    control_actions: tuple[HazardousControlAction, ...] = ()
    safety_constraints: tuple[SafetyConstraint, ...] = ()

    loss_map: dict[str, UnacceptableLoss] = field(default_factory=dict, compare=False)
    hazard_map: dict[str, Hazard] = field(default_factory=dict, compare=False)


def _condition_from(raw: object, ca_id: str, slot: str) -> HazardCondition | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise StpaFormatError(f"{ca_id}.{slot} must be an object with 'hazards'")
    hazards = raw.get("hazards", [])
    if not isinstance(hazards, list) or not all(isinstance(h, str) for h in hazards):
        raise StpaFormatError(f"{ca_id}.{slot}.hazards must be a list of hazard ids")
    return HazardCondition(hazards=tuple(hazards), narrative=str(raw.get("narrative", "")))


def parse_stpa_tables(document: bytes | str | BinaryIO) -> StpaDataset:
    """Parse and cross-validate a hazard-analysis dataset document.

    Rejects duplicate ids, duplicate loss priorities and every dangling
    reference, naming both sides of the broken link.
    """
    if hasattr(document, "read"):
        document = document.read()
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise StpaFormatError(f"dataset is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise StpaFormatError("dataset root must be an object with four record arrays")

    losses: list[UnacceptableLoss] = []
    for rec in raw.get("losses", []):
        lid = str(rec.get("id", ""))
        if not _LOSS_ID.match(lid):
            raise StpaFormatError(f"loss id {lid!r} does not match L<number>")
        if "priority" not in rec:
            raise StpaFormatError(f"loss {lid} lacks a priority (mandatory)")
        priority = int(rec["priority"])
        if priority < 1:
            raise StpaFormatError(f"loss {lid} priority must be a positive rank")
        losses.append(UnacceptableLoss(id=lid, description=str(rec.get("description", "")),
                                       priority=priority))
    _reject_duplicates((l.id for l in losses), "loss id")
    priorities: dict[int, str] = {}
    for loss in losses:
        if loss.priority in priorities:
            raise StpaDuplicateError(
                f"losses {priorities[loss.priority]} and {loss.id} share priority "
                f"{loss.priority}; priorities must form a total order")
        priorities[loss.priority] = loss.id

    loss_ids = {l.id for l in losses}
    hazards: list[Hazard] = []
    for rec in raw.get("hazards", []):
        hid = str(rec.get("id", ""))
        if not _HAZARD_ID.match(hid):
            raise StpaFormatError(f"hazard id {hid!r} does not match H<number>")
        assoc = rec.get("associated_losses", [])
        if not assoc:
            raise StpaFormatError(f"hazard {hid} must associate at least one loss")
        for lid in assoc:
            if lid not in loss_ids:
                raise StpaReferenceError(f"hazard {hid} references undeclared loss {lid!r}")
        hazards.append(Hazard(id=hid, description=str(rec.get("description", "")),
                              worst_case_environment=str(rec.get("worst_case_environment", "")),
                              associated_losses=tuple(assoc)))
    _reject_duplicates((h.id for h in hazards), "hazard id")

    hazard_ids = {h.id for h in hazards}
    control_actions: list[HazardousControlAction] = []
    for rec in raw.get("control_actions", []):
        cid = str(rec.get("id", ""))
        if not _CA_ID.match(cid):
            raise StpaFormatError(f"control action id {cid!r} does not match CA<n>.<n>")
        slots = {slot: _condition_from(rec.get(slot), cid, slot) for slot in CONDITION_SLOTS}
        if all(v is None for v in slots.values()):
            raise StpaFormatError(f"control action {cid} populates no condition slot")
        for slot, cond in slots.items():
            if cond is None:
                continue
            for hid in cond.hazards:
                if hid not in hazard_ids:
                    raise StpaReferenceError(
                        f"control action {cid} ({slot}) references undeclared hazard {hid!r}")
        control_actions.append(HazardousControlAction(
            id=cid, name=str(rec.get("name", "")),
            reconstructed=bool(rec.get("reconstructed", False)), **slots))
    _reject_duplicates((c.id for c in control_actions), "control action id")

    ca_ids = {c.id for c in control_actions}
    sc_ids_declared = [str(rec.get("id", "")) for rec in raw.get("safety_constraints", [])]
    constraints: list[SafetyConstraint] = []
    for rec in raw.get("safety_constraints", []):
        sid = str(rec.get("id", ""))
        if not _SC_ID.match(sid):
            raise StpaFormatError(f"safety constraint id {sid!r} does not match SC<n>.<n>")
        ca = str(rec.get("related_control_action", ""))
        if ca not in ca_ids:
            raise StpaReferenceError(
                f"safety constraint {sid} references undeclared control action {ca!r}")
        if sid[2:] != ca[2:]:
            raise StpaReferenceError(
                f"safety constraint {sid} and control action {ca} have mismatched suffixes")
        refines = tuple(rec.get("refines", []))
        for parent in refines:
            if parent not in sc_ids_declared:
                raise StpaReferenceError(
                    f"safety constraint {sid} refines undeclared constraint {parent!r}")
        constraints.append(SafetyConstraint(
            id=sid, related_control_action=ca, text=str(rec.get("text", "")),
            refines=refines, reconstructed=bool(rec.get("reconstructed", False))))
    _reject_duplicates((s.id for s in constraints), "safety constraint id")

    return StpaDataset(
        losses=tuple(losses),
        hazards=tuple(hazards),
        control_actions=tuple(control_actions),
        safety_constraints=tuple(constraints),
        loss_map={l.id: l for l in losses},
        hazard_map={h.id: h for h in hazards},
    )


def _reject_duplicates(ids, what: str) -> None:
    seen: set[str] = set()
    for item in ids:
        if item in seen:
            raise StpaDuplicateError(f"duplicate {what} {item!r}")
        seen.add(item)


def project_to_requirements(dataset: StpaDataset) -> LabeledGraph:
    """Project losses and hazards into a requirements-graph fragment.

    One vertex per loss and hazard; one loss->hazard arrow per association,
    tagged "can-be-caused-by" and stored top-to-bottom.
    """
    vertices: list[Vertex] = []
    for loss in dataset.losses:
        vertices.append(Vertex(
            id=loss.id, kind=VertexKind.LOSS, label=loss.id,
            attributes={"description": loss.description, "priority": str(loss.priority)}))
    for hz in dataset.hazards:
        vertices.append(Vertex(
            id=hz.id, kind=VertexKind.HAZARD, label=hz.id,
            attributes={"description": hz.description,
                        "worst_case_environment": hz.worst_case_environment}))
    arrows = [
        Arrow(id=f"{lid}-{hz.id}", src=lid, tgt=hz.id, relation="can-be-caused-by")
        for hz in dataset.hazards
        for lid in hz.associated_losses
    ]
    return LabeledGraph(kind=GraphKind.REQUIREMENTS,
                        vertices=tuple(vertices), arrows=tuple(arrows))


def project_to_function(dataset: StpaDataset) -> LabeledGraph:
    """Project control actions and safety constraints into a function-graph
    fragment.

    Emits one vertex per control action and safety constraint, an
    SC->CA arrow per related_control_action ("constrains"), hazard->SC
    arrows ("mitigated-by") for hazards cited by the constrained action, and
    parent->child arrows between refined constraints ("refines"). Hazard
    vertices referenced by arrows are included so the fragment validates on
    its own.
    """
    vertices: list[Vertex] = []
    arrows: list[Arrow] = []

    for ca in dataset.control_actions:
        attrs = {"name": ca.name}
        for slot, cond in ca.conditions().items():
            attrs[f"{slot}_hazards"] = ",".join(cond.hazards)
            if cond.narrative:
                attrs[f"{slot}_narrative"] = cond.narrative
        if ca.reconstructed:
            attrs["reconstructed"] = "true"
        vertices.append(Vertex(id=ca.id, kind=VertexKind.CONTROL_ACTION,
                               label=ca.name or ca.id, attributes=attrs))

    hazard_vertices: dict[str, Vertex] = {}
    for sc in dataset.safety_constraints:
        attrs = {"text": sc.text}
        if sc.reconstructed:
            attrs["reconstructed"] = "true"
        vertices.append(Vertex(id=sc.id, kind=VertexKind.SAFETY_CONSTRAINT,
                               label=sc.id, attributes=attrs))
        arrows.append(Arrow(id=f"{sc.id}-{sc.related_control_action}", src=sc.id,
                            tgt=sc.related_control_action, relation="constrains"))
        ca = next(c for c in dataset.control_actions if c.id == sc.related_control_action)
        for hid in ca.cited_hazards():
            if hid not in hazard_vertices:
                hz = dataset.hazard_map[hid]
                hazard_vertices[hid] = Vertex(
                    id=hid, kind=VertexKind.HAZARD, label=hid,
                    attributes={"description": hz.description,
                                "worst_case_environment": hz.worst_case_environment})
            arrows.append(Arrow(id=f"{hid}-{sc.id}", src=hid, tgt=sc.id,
                                relation="mitigated-by"))
        for parent in sc.refines:
            arrows.append(Arrow(id=f"{parent}-{sc.id}", src=parent, tgt=sc.id,
                                relation="refines"))

    vertices.extend(hazard_vertices[h] for h in sorted(hazard_vertices))
    return LabeledGraph(kind=GraphKind.FUNCTION,
                        vertices=tuple(vertices), arrows=tuple(arrows))
