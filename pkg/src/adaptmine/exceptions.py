"""Exception hierarchy shared by all adaptmine modules."""

from __future__ import annotations


class AdaptMineError(Exception):
    """Base class for every error raised by this package."""


class OntologyError(AdaptMineError):
    """Structurally invalid ontology (bad names, undeclared edge endpoints)."""


class EntailmentCycleError(OntologyError):
    """The entailment graph contains a cycle.

    ``cycle`` holds one offending path, e.g. ``["a", "b", "a"]``.
    """

    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("entailment cycle: " + " -> ".join(cycle))


class UnknownPropertyError(AdaptMineError):
    """A property name was used that the ontology does not declare."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown property: {name!r}")


class CaseBaseFormatError(AdaptMineError):
    """The case base document failed to parse or validate."""


class MiningGuardError(AdaptMineError):
    """A precondition guarding a mining operation was violated."""


class TooFewCasesError(MiningGuardError):
    """Pair generation needs at least two cases."""


class EmptyDatabaseError(MiningGuardError):
    """The transaction database contains no transactions."""


class UniverseTooLargeError(MiningGuardError):
    """The exhaustive oracle refuses item universes it cannot enumerate."""


class ZeroSupportError(AdaptMineError):
    """Closedness is undefined for an itemset no transaction contains."""


class RuleInterpretationError(AdaptMineError):
    """An itemset or rule record violates the rule invariants, e.g. no
    solution-side item, overlapping solution sets, or an accepted rule
    without an explanation."""


class NoSolutionError(AdaptMineError):
    """Target could not be solved; carries the diagnostics report."""

    def __init__(self, report):
        self.report = report
        super().__init__("no applicable case/rule combination for the target")


class StoreError(AdaptMineError):
    """Base class for workspace persistence errors."""


class IntegrityError(StoreError):
    """Stored files disagree with the manifest or with event replay."""


class StaleSequenceError(StoreError):
    """An event arrived with a sequence number that is not last + 1."""


class StaleWorkspaceError(StoreError):
    """The workspace directory changed on disk after this copy was loaded."""


class IllegalTransitionError(StoreError):
    """The requested review action is not legal for the rule's status."""


class WorkspaceLockError(StoreError):
    """The workspace directory is locked by another writer."""
