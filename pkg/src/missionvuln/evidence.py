"""Descriptor-to-attack matching and analyst triage.

Matching turns the descriptors of mission-specification elements into scored
candidate attack vectors; relevance is exclusively human-asserted through an
append-only triage ledger. Candidate scoring is a weighted Jaccard overlap
between descriptor tokens and entry text tokens: simple, explainable to
analysts, and swappable behind MatchConfig. Weakness and pattern entries
join the candidates of an element both by direct text match and by walking
the abstraction arrows from a matched CVE, so the class context always rides
along with its concrete instances.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping

from .errors import MatchConfigError, TriageDecisionError, TriageError
from .graphs.model import DESCRIPTOR_CATEGORIES, DescriptorSet, LabeledGraph
from .vulnfeeds import AttackVectorSpace, source_of

logger = logging.getLogger(__name__)

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")

#: Function words dropped from token streams before scoring.
STOP_TOKENS = frozenset("""
a an and are as at be been but by can could did do does for from had has have
if in into is it its may might must no nor not of on onto or other over shall
should so some such than that the their them then there these they this those
to too under until upon via was were when which while who whose will with
within without would
""".split())

DECISIONS = ("relevant", "irrelevant")


def tokenize(text: str) -> list[str]:
    """Lowercase split on non-alphanumerics with stop-token removal.

    One-character tokens and bare numbers below three digits are noise
    (version fragments mostly) and are dropped as well.
    """
    out = []
    for token in _TOKEN_SPLIT.split(text.lower()):
        if len(token) < 2 or token in STOP_TOKENS:
            continue
        if token.isdigit() and len(token) < 3:
            continue
        out.append(token)
    return out


@dataclass(frozen=True)
class MatchConfig:
    min_score: float = 0.08
    max_candidates: int = 25
    token_weights: Mapping[str, float] = field(
        default_factory=lambda: {c: 1.0 for c in DESCRIPTOR_CATEGORIES})

    def validated(self) -> "MatchConfig":
        if not 0.0 <= self.min_score <= 1.0:
            raise MatchConfigError(f"min_score {self.min_score} outside [0, 1]")
        if self.max_candidates < 1:
            raise MatchConfigError("max_candidates must be a positive integer")
        for category, weight in self.token_weights.items():
            if weight < 0:
                raise MatchConfigError(f"negative weight {weight} for {category!r}")
        return self

    @classmethod
    def from_json(cls, text: str | bytes) -> "MatchConfig":
        raw = json.loads(text)
        cfg = cls(
            min_score=float(raw.get("min_score", cls.min_score)),
            max_candidates=int(raw.get("max_candidates", cls.max_candidates)),
            token_weights={**{c: 1.0 for c in DESCRIPTOR_CATEGORIES},
                           **raw.get("token_weights", {})},
        )
        return cfg.validated()

    def to_json(self) -> str:
        return json.dumps({
            "min_score": self.min_score,
            "max_candidates": self.max_candidates,
            "token_weights": dict(sorted(self.token_weights.items())),
        }, indent=2) + "\n"


@dataclass(frozen=True)
class Candidate:
    attack_id: str
    score: float
    via: str  # "match" (text overlap) or "class-context" (abstraction of a match)
    tokens: tuple[str, ...] = ()  # overlap that produced a direct match


def descriptor_token_weights(descriptors: DescriptorSet | Iterable[DescriptorSet],
                             cfg: MatchConfig) -> dict[str, float]:
    """Token -> weight map for one or more descriptor sets; a token appearing
    under several categories keeps its highest weight."""
    if isinstance(descriptors, DescriptorSet):
        descriptors = (descriptors,)
    weights: dict[str, float] = {}
    for dset in descriptors:
        for entry in dset.entries:
            weight = cfg.token_weights.get(entry.category, 1.0)
            for token in tokenize(entry.value):
                weights[token] = max(weights.get(token, 0.0), weight)
    return weights


def weighted_jaccard(descriptor_weights: Mapping[str, float],
                     entry_tokens: Iterable[str]) -> tuple[float, tuple[str, ...]]:
    """Weighted Jaccard between a weighted token set and a plain token set.

    Entry tokens weigh 1.0. Returns the score and the shared tokens.
    """
    entry_set = set(entry_tokens)
    if not descriptor_weights or not entry_set:
        return 0.0, ()
    shared = sorted(t for t in entry_set if t in descriptor_weights)
    minimum = sum(min(descriptor_weights[t], 1.0) for t in shared)
    maximum = sum(max(w, 1.0) if t in entry_set else w
                  for t, w in descriptor_weights.items())
    maximum += sum(1.0 for t in entry_set if t not in descriptor_weights)
    if maximum == 0.0:
        return 0.0, ()
    return minimum / maximum, tuple(shared)


def evidence(descriptors: DescriptorSet | Iterable[DescriptorSet],
             av: AttackVectorSpace,
             cfg: MatchConfig | None = None) -> list[Candidate]:
    """Scored candidate attack vectors for a descriptor set.

    Entries qualify when they share at least one token with the descriptors
    and score at least `min_score`; weakness/pattern entries abstracting a
    qualifying CVE are appended as class context with the CVE's score. The
    result holds at most `max_candidates`, descending score, ties broken by
    id, and is a pure function of its inputs.
    """
    cfg = (cfg or MatchConfig()).validated()
    weights = descriptor_token_weights(descriptors, cfg)
    direct: dict[str, Candidate] = {}
    for entry in av.entries.values():
        score, shared = weighted_jaccard(weights, tokenize(f"{entry.title} {entry.description}"))
        if shared and score >= cfg.min_score:
            direct[entry.id] = Candidate(attack_id=entry.id, score=score,
                                         via="match", tokens=shared)

    merged = dict(direct)
    for cand in direct.values():
        if source_of(cand.attack_id) != "CVE":
            continue
        for class_id in av.abstract_closure(cand.attack_id):
            existing = merged.get(class_id)
            if existing is None or existing.score < cand.score:
                via = "match" if class_id in direct else "class-context"
                tokens = direct[class_id].tokens if class_id in direct else ()
                merged[class_id] = Candidate(attack_id=class_id, score=cand.score,
                                             via=via, tokens=tokens)

    ranked = sorted(merged.values(), key=lambda c: (-c.score, c.attack_id))
    return ranked[:cfg.max_candidates]


def component_evidence(s: LabeledGraph, element_id: str, av: AttackVectorSpace,
                       cfg: MatchConfig | None = None) -> list[Candidate]:
    """Candidates aggregated over every descriptor set an element owns."""
    descriptors = (s.descriptors_of(element_id, "vertex")
                   + s.descriptors_of(element_id, "arrow"))
    if not descriptors:
        return []
    return evidence(descriptors, av, cfg)


def build_candidate_index(s: LabeledGraph, av: AttackVectorSpace,
                          cfg: MatchConfig | None = None) -> dict[str, list[Candidate]]:
    """Candidates for every descriptor-owning element of the mission graph."""
    index: dict[str, list[Candidate]] = {}
    for dset in s.descriptors:
        if dset.owner in index:
            continue
        index[dset.owner] = component_evidence(s, dset.owner, av, cfg)
    return dict(sorted(index.items()))


@dataclass(frozen=True)
class TriageDecision:
    timestamp: str
    analyst: str
    component: str
    attack_id: str
    decision: str
    rationale: str

    def to_json(self) -> str:
        return json.dumps({
            "timestamp": self.timestamp,
            "analyst": self.analyst,
            "component": self.component,
            "attack_id": self.attack_id,
            "decision": self.decision,
            "rationale": self.rationale,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "TriageDecision":
        raw = json.loads(line)
        return cls(timestamp=raw["timestamp"], analyst=raw["analyst"],
                   component=raw["component"], attack_id=raw["attack_id"],
                   decision=raw["decision"], rationale=raw.get("rationale", ""))


class TriageLedger:
    """Append-only record of relevance decisions.

    The current status of a (component, attack) pair is its last decision;
    re-marking a pair is how a decision is reversed.
    """

    def __init__(self, decisions: Iterable[TriageDecision] = ()):
        self._decisions: list[TriageDecision] = list(decisions)

    def __len__(self) -> int:
        return len(self._decisions)

    def __iter__(self):
        return iter(self._decisions)

    def append(self, decision: TriageDecision) -> None:
        self._decisions.append(decision)

    def status_map(self) -> dict[tuple[str, str], str]:
        out: dict[tuple[str, str], str] = {}
        for d in self._decisions:
            out[(d.component, d.attack_id)] = d.decision
        return out

    def relevant_ids(self, component: str) -> frozenset[str]:
        return frozenset(attack for (comp, attack), decision in self.status_map().items()
                         if comp == component and decision == "relevant")

    def components(self) -> list[str]:
        return sorted({d.component for d in self._decisions})

    @classmethod
    def load(cls, path: Path | str) -> "TriageLedger":
        path = Path(path)
        decisions = []
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    decisions.append(TriageDecision.from_json(line))
        return cls(decisions)

    def save(self, path: Path | str) -> None:
        Path(path).write_text(
            "".join(d.to_json() + "\n" for d in self._decisions), encoding="utf-8")

    @staticmethod
    def append_to_file(path: Path | str, decision: TriageDecision) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(decision.to_json() + "\n")
            fh.flush()


def record_triage(ledger: TriageLedger, component: str, attack_id: str, decision: str,
                  analyst: str, rationale: str,
                  candidates: Mapping[str, Iterable[Candidate]],
                  timestamp: str | None = None) -> TriageLedger:
    """Append one relevance decision; the only mutation path for relevance.

    The pair must be an existing candidate (an analyst can never promote an
    unmatched attack) and the decision must be relevant or irrelevant.
    """
    if decision not in DECISIONS:
        raise TriageDecisionError(
            f"decision {decision!r} outside {{relevant, irrelevant}}")
    known = {c.attack_id for c in candidates.get(component, ())}
    if attack_id not in known:
        raise TriageError(
            f"{attack_id!r} is not a candidate for {component!r}; triage refused")
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    ledger.append(TriageDecision(timestamp=timestamp, analyst=analyst, component=component,
                                 attack_id=attack_id, decision=decision, rationale=rationale))
    return ledger


def enumerate_combinations(base_ids: Iterable[str], k: int) -> list[frozenset[str]]:
    """Subsets of the base up to size `k`, in size-then-lexicographic order.

    The empty set and every singleton are always present; only CVE entries
    participate in multi-element subsets, since weakness and pattern entries
    are abstract classes reported singly.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    base = sorted(set(base_ids))
    out: list[frozenset[str]] = [frozenset()]
    out.extend(frozenset((attack,)) for attack in base)
    cves = [a for a in base if source_of(a) == "CVE"]
    from itertools import combinations
    for size in range(2, k + 1):
        for combo in combinations(cves, size):
            out.append(frozenset(combo))
    return out


@dataclass(frozen=True)
class RelevantEvidence:
    """The analyst-confirmed evidence of one element: base ids plus the
    bounded combination sets (a subset of the power set of attack vectors)."""

    component: str
    base: frozenset[str]
    sets: tuple[frozenset[str], ...]

    def cve_ids(self) -> frozenset[str]:
        return frozenset(a for a in self.base if source_of(a) == "CVE")

    def class_ids(self) -> frozenset[str]:
        return self.base - self.cve_ids()


def rel_evidence(component: str, s: LabeledGraph, av: AttackVectorSpace,
                 ledger: TriageLedger, k: int = 2) -> RelevantEvidence:
    """Relevant evidence of an element: ids whose latest triage decision is
    `relevant`, closed under the bounded combinations.

    An element without descriptors in the mission graph yields {∅} with a
    warning, never an error.
    """
    descriptors = (s.descriptors_of(component, "vertex")
                   + s.descriptors_of(component, "arrow"))
    if not descriptors:
        logger.warning("element %r carries no descriptors in the mission graph; "
                       "relevant evidence is {∅}", component)
        return RelevantEvidence(component=component, base=frozenset(),
                                sets=(frozenset(),))
    base = frozenset(a for a in ledger.relevant_ids(component) if a in av.entries)
    return RelevantEvidence(component=component, base=base,
                            sets=tuple(enumerate_combinations(base, k)))


def relevant_evidence_map(s: LabeledGraph, av: AttackVectorSpace, ledger: TriageLedger,
                          k: int = 2) -> dict[str, RelevantEvidence]:
    """Relevant evidence for every element the ledger has decisions about."""
    out: dict[str, RelevantEvidence] = {}
    for component in ledger.components():
        ev = rel_evidence(component, s, av, ledger, k=k)
        if ev.base:
            out[component] = ev
    return out
