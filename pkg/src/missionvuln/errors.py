"""Exception hierarchy shared across the toolkit.

Every error raised on purpose derives from MissionVulnError so callers can
catch toolkit failures without swallowing programming errors.
"""

from __future__ import annotations


class MissionVulnError(Exception):
    """Base class for all toolkit errors."""


class GraphParseError(MissionVulnError):
    """Malformed GraphML input; carries the 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class GraphIntegrityError(MissionVulnError):
    """An arrow endpoint or descriptor owner does not resolve."""

    def __init__(self, message: str, element: str | None = None):
        self.element = element
        super().__init__(message)


class GraphKindError(MissionVulnError):
    """Declared graph kind conflicts with the expected one."""


class CompositionError(MissionVulnError):
    """A mission-spec trace references an unknown endpoint."""


class TraceDirectionError(MissionVulnError):
    """A trace arrow points upward (e.g. structure back to a requirement)."""


class StpaReferenceError(MissionVulnError):
    """A hazard-analysis record references an undeclared id."""


class StpaDuplicateError(MissionVulnError):
    """Duplicate id or duplicate loss priority in a hazard-analysis dataset."""


class StpaFormatError(MissionVulnError):
    """A hazard-analysis document does not follow the dataset format."""


class UnknownEntryError(MissionVulnError):
    """Lookup of an id that is not present in the attack-vector graph."""


class MatchConfigError(MissionVulnError):
    """A matching configuration violates its bounds."""


class TriageError(MissionVulnError):
    """Triage submitted for a pair that was never a candidate."""


class TriageDecisionError(MissionVulnError):
    """Triage decision outside the {relevant, irrelevant} domain."""


class ImpactConfigError(MissionVulnError):
    """Impact analysis requested on a mission graph without loss vertices."""


class WorkspaceError(MissionVulnError):
    """A workspace is missing an artifact required by the requested command."""
