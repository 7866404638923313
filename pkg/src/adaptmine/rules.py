"""Turning mined itemsets into adaptation rules and running the solve loop.

An itemset that mentions solution-side change is read as a rule: its
problem items become the matching precondition against the difference
between a retrieved case and the new target, and its solution items say
which solution properties survive, which are dropped and which are added.
Solving retrieves nearest cases by problem similarity and applies the most
specific accepted rule that matches; when nothing applies, a diagnostic
report explains, case by case, what was missing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exceptions import CaseBaseFormatError, NoSolutionError, RuleInterpretationError
from .mining import Fci
from .model import Case, CaseBase, Ontology
from .transactions import Facet, Item, Polarity, delta, parse_item

STATUS_CANDIDATE = "candidate"
STATUS_ACCEPTED = "accepted"
STATUS_REJECTED = "rejected"
RULE_STATUSES = (STATUS_CANDIDATE, STATUS_ACCEPTED, STATUS_REJECTED)


@dataclass(frozen=True)
class AdaptationRule:
    """A reviewable adaptation rule derived from one mined itemset.

    ``pb_conditions`` are marked problem items that must all hold in the
    difference between the retrieved case and the target; the three solution
    sets partition the itemset's solution items by marker and drive the
    solution edit.
    """

    id: int
    source_fci: int
    pb_conditions: frozenset[Item]
    sol_keep: frozenset[str]
    sol_remove: frozenset[str]
    sol_add: frozenset[str]
    status: str = STATUS_CANDIDATE
    explanation: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pb_conditions", frozenset(self.pb_conditions))
        object.__setattr__(self, "sol_keep", frozenset(self.sol_keep))
        object.__setattr__(self, "sol_remove", frozenset(self.sol_remove))
        object.__setattr__(self, "sol_add", frozenset(self.sol_add))
        self.validate()

    def validate(self) -> None:
        if self.status not in RULE_STATUSES:
            raise RuleInterpretationError(f"unknown rule status {self.status!r}")
        for item in self.pb_conditions:
            if item.facet is not Facet.PB:
                raise RuleInterpretationError(
                    f"rule {self.id}: problem condition with non-problem item {item.canonical()}"
                )
        pools = [self.sol_keep, self.sol_remove, self.sol_add]
        names = ("sol-keep", "sol-remove", "sol-add")
        for i in range(3):
            for j in range(i + 1, 3):
                overlap = pools[i] & pools[j]
                if overlap:
                    raise RuleInterpretationError(
                        f"rule {self.id}: {names[i]} and {names[j]} overlap on "
                        f"{sorted(overlap)}"
                    )
        if self.status == STATUS_ACCEPTED:
            if not self.explanation.strip():
                raise RuleInterpretationError(
                    f"rule {self.id}: accepted rules need a non-empty explanation"
                )
            if not self.pb_conditions:
                raise RuleInterpretationError(
                    f"rule {self.id}: accepted rules need at least one problem condition"
                )

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "source-fci": self.source_fci,
            "pb-conditions": sorted(
                (item.canonical() for item in self.pb_conditions),
            ),
            "sol-keep": sorted(self.sol_keep),
            "sol-remove": sorted(self.sol_remove),
            "sol-add": sorted(self.sol_add),
            "status": self.status,
            "explanation": self.explanation,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "AdaptationRule":
        try:
            return cls(
                id=data["id"],
                source_fci=data["source-fci"],
                pb_conditions=frozenset(parse_item(s) for s in data["pb-conditions"]),
                sol_keep=frozenset(data["sol-keep"]),
                sol_remove=frozenset(data["sol-remove"]),
                sol_add=frozenset(data["sol-add"]),
                status=data.get("status", STATUS_CANDIDATE),
                explanation=data.get("explanation", ""),
            )
        except KeyError as exc:
            raise CaseBaseFormatError(f"rule record is missing key {exc}") from None


def fci_to_rule_candidate(fci: Fci, rule_id: Optional[int] = None) -> AdaptationRule:
    """Read one itemset as a candidate rule.

    Solution items split by marker: "=" properties are kept, "-" properties
    removed, "+" properties added. Itemsets without any solution item do not
    describe an adaptation and are rejected.
    """
    keep, remove, add = set(), set(), set()
    pb = set()
    for item in fci.items:
        if item.facet is Facet.PB:
            pb.add(item)
        elif item.polarity is Polarity.EQUAL:
            keep.add(item.prop)
        elif item.polarity is Polarity.MINUS:
            remove.add(item.prop)
        else:
            add.add(item.prop)
    if not (keep or remove or add):
        raise RuleInterpretationError(
            f"itemset {fci.id} has no solution items, so it describes no adaptation"
        )
    return AdaptationRule(
        id=fci.id if rule_id is None else rule_id,
        source_fci=fci.id,
        pb_conditions=frozenset(pb),
        sol_keep=frozenset(keep),
        sol_remove=frozenset(remove),
        sol_add=frozenset(add),
    )


def generate_candidates(fcis: Sequence[Fci]) -> list[AdaptationRule]:
    """Candidate rules for every solution-bearing itemset, with dense rule
    ids following itemset order."""
    rules = []
    for fci in fcis:
        if any(item.facet is Facet.SOL for item in fci.items):
            rules.append(fci_to_rule_candidate(fci, rule_id=len(rules)))
    return rules


@dataclass(frozen=True)
class TargetProblem:
    """A problem to solve, with no solution yet."""

    problem: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "problem", frozenset(self.problem))


def jaccard(a: frozenset, b: frozenset) -> Fraction:
    union = a | b
    if not union:
        return Fraction(1)  # two empty sets are identical
    return Fraction(len(a & b), len(union))


def retrieve(cb: CaseBase, target: TargetProblem, k: int) -> list[tuple[Case, Fraction]]:
    """The k cases nearest to the target by Jaccard similarity of closed
    problem sets; ties broken by ascending case id."""
    if not cb.cases:
        raise CaseBaseFormatError("cannot retrieve from an empty case base")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    onto = cb.ontology
    closed_target = onto.closure(target.problem)
    scored = [(case, jaccard(onto.closure(case.problem), closed_target)) for case in cb.cases]
    scored.sort(key=lambda pair: (-pair[1], pair[0].id))
    return scored[:k]


def _rule_gaps(
    rule: AdaptationRule, srce: Case, target: TargetProblem, onto: Ontology
) -> tuple[frozenset[Item], frozenset[str], frozenset[str]]:
    """What stands between a rule and this (case, target) pair.

    Returns unmet problem conditions, solution properties the rule expects
    the case to have but it lacks, and properties the rule would add that
    the case already has. All three empty means the rule matches.
    """
    diff = delta(onto.closure(srce.problem), onto.closure(target.problem), Facet.PB)
    unmet_pb = rule.pb_conditions - diff
    closed_sol = onto.closure(srce.solution)
    sol_missing = (rule.sol_keep | rule.sol_remove) - closed_sol
    sol_present = rule.sol_add & closed_sol
    return frozenset(unmet_pb), frozenset(sol_missing), frozenset(sol_present)


def match_rule(rule: AdaptationRule, srce: Case, target: TargetProblem, onto: Ontology) -> bool:
    """Whether the rule's conditions all hold for adapting this case to the
    target: problem conditions are among the observed differences, kept and
    removed solution properties are present, added ones are absent."""
    unmet_pb, sol_missing, sol_present = _rule_gaps(rule, srce, target, onto)
    return not (unmet_pb or sol_missing or sol_present)


def apply_rule(rule: AdaptationRule, srce: Case, onto: Ontology) -> frozenset[str]:
    """Edit the case's closed solution as the rule says and re-close it."""
    edited = (onto.closure(srce.solution) - rule.sol_remove) | rule.sol_add
    return onto.closure(edited)


@dataclass(frozen=True)
class TraceStep:
    rule_id: int
    removed: frozenset[str]
    added: frozenset[str]


@dataclass(frozen=True)
class AdaptationResult:
    """A solved target: the produced solution plus how it was produced."""

    target: TargetProblem
    solution: frozenset[str]
    used_case: str
    used_rules: tuple[int, ...]
    similarity: Fraction
    trace: tuple[TraceStep, ...]

    def to_json_dict(self, rules_by_id: Optional[dict[int, AdaptationRule]] = None) -> dict:
        rules_by_id = rules_by_id or {}
        trace = []
        for step in self.trace:
            rule = rules_by_id.get(step.rule_id)
            trace.append(
                {
                    "rule-id": step.rule_id,
                    "removed": sorted(step.removed),
                    "added": sorted(step.added),
                    "explanation": rule.explanation if rule is not None else "",
                }
            )
        return {
            "target": sorted(self.target.problem),
            "solution": sorted(self.solution),
            "used-case": self.used_case,
            "used-rules": list(self.used_rules),
            "similarity": f"{self.similarity.numerator}/{self.similarity.denominator}",
            "trace": trace,
        }


@dataclass(frozen=True)
class CaseDiagnostic:
    """Why one retrieved case produced no solution."""

    case_id: str
    similarity: Fraction
    nearest_rule: Optional[int]
    unmet_pb: frozenset[Item]
    sol_missing: frozenset[str]
    sol_present: frozenset[str]

    def to_json_dict(self) -> dict:
        return {
            "case": self.case_id,
            "similarity": f"{self.similarity.numerator}/{self.similarity.denominator}",
            "nearest-rule": self.nearest_rule,
            "unmet-pb": sorted(item.canonical() for item in self.unmet_pb),
            "sol-missing": sorted(self.sol_missing),
            "sol-present": sorted(self.sol_present),
        }


@dataclass(frozen=True)
class NoSolutionReport:
    """Per-case near-miss diagnostics for an unsolved target."""

    target: TargetProblem
    diagnostics: tuple[CaseDiagnostic, ...]

    def to_json_dict(self) -> dict:
        return {
            "target": sorted(self.target.problem),
            "solution": None,
            "diagnostics": [d.to_json_dict() for d in self.diagnostics],
        }


def solve_target(
    cb: CaseBase,
    rules: Iterable[AdaptationRule],
    target: TargetProblem,
    k: int = 5,
) -> AdaptationResult:
    """Solve by retrieve-then-adapt.

    Walk the k nearest cases in rank order. For each, apply the matching
    accepted rule with the most problem conditions (ties to the lowest rule
    id); an exactly-identical problem reuses the case's own solution when no
    rule applies. The first success wins; if every case fails, a
    :class:`NoSolutionError` carries the full diagnostic report.
    """
    rule_list = sorted(rules, key=lambda r: r.id)
    for rule in rule_list:
        if rule.status != STATUS_ACCEPTED:
            raise ValueError(f"solve only takes accepted rules, rule {rule.id} is {rule.status}")
    onto = cb.ontology
    onto.closure(target.problem)  # reject unknown properties up front
    ranked = retrieve(cb, target, k)

    diagnostics = []
    for case, similarity in ranked:
        matching = [r for r in rule_list if match_rule(r, case, target, onto)]
        if matching:
            best = max(matching, key=lambda r: (len(r.pb_conditions), -r.id))
            solution = apply_rule(best, case, onto)
            return AdaptationResult(
                target=target,
                solution=solution,
                used_case=case.id,
                used_rules=(best.id,),
                similarity=similarity,
                trace=(
                    TraceStep(
                        rule_id=best.id,
                        removed=frozenset(best.sol_remove),
                        added=frozenset(best.sol_add),
                    ),
                ),
            )
        if similarity == 1:
            # The target is this case's own problem; its solution transfers
            # unchanged.
            return AdaptationResult(
                target=target,
                solution=onto.closure(case.solution),
                used_case=case.id,
                used_rules=(),
                similarity=similarity,
                trace=(),
            )
        diagnostics.append(_diagnose(case, similarity, rule_list, target, onto))

    report = NoSolutionReport(target=target, diagnostics=tuple(diagnostics))
    raise NoSolutionError(report)


def _diagnose(
    case: Case,
    similarity: Fraction,
    rules: list[AdaptationRule],
    target: TargetProblem,
    onto: Ontology,
) -> CaseDiagnostic:
    best: Optional[tuple[int, int, frozenset, frozenset, frozenset]] = None
    for rule in rules:
        unmet_pb, sol_missing, sol_present = _rule_gaps(rule, case, target, onto)
        gap = len(unmet_pb) + len(sol_missing) + len(sol_present)
        key = (gap, rule.id)
        if best is None or key < best[:2]:
            best = (gap, rule.id, unmet_pb, sol_missing, sol_present)
    if best is None:
        return CaseDiagnostic(
            case_id=case.id,
            similarity=similarity,
            nearest_rule=None,
            unmet_pb=frozenset(),
            sol_missing=frozenset(),
            sol_present=frozenset(),
        )
    return CaseDiagnostic(
        case_id=case.id,
        similarity=similarity,
        nearest_rule=best[1],
        unmet_pb=best[2],
        sol_missing=best[3],
        sol_present=best[4],
    )


def with_status(
    rule: AdaptationRule, status: str, explanation: Optional[str] = None
) -> AdaptationRule:
    """A copy of the rule with a new status (and optionally explanation);
    validation runs again on the copy."""
    kwargs = {"status": status}
    if explanation is not None:
        kwargs["explanation"] = explanation
    return replace(rule, **kwargs)


def solve_json_payload(
    cb: CaseBase,
    rules_by_id: dict[int, AdaptationRule],
    target: TargetProblem,
    k: int = 5,
) -> tuple[bytes, bool]:
    """Solve and serialize to canonical JSON bytes, shared by the command
    line and the HTTP service so the two agree byte for byte.

    Only accepted rules take part. Returns the payload and whether a
    solution was found (the no-solution report is itself a payload).
    """
    accepted = [r for r in rules_by_id.values() if r.status == STATUS_ACCEPTED]
    try:
        doc = solve_target(cb, accepted, target, k).to_json_dict(rules_by_id)
        solved = True
    except NoSolutionError as exc:
        doc = exc.report.to_json_dict()
        solved = False
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    return payload.encode("utf-8"), solved
