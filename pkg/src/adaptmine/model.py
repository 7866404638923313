"""Cases, ontologies, and the deductive closure of boolean property sets.

A case pairs a problem description with its solution, both given as sets of
boolean property names. An ontology declares the usable properties plus a
directed acyclic "entails" graph between them; closing a property set under
that graph is what turns a raw description into the representation every
downstream step (differencing, mining, rule matching) works on.

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Union

from .exceptions import (
    CaseBaseFormatError,
    EntailmentCycleError,
    OntologyError,
    UnknownPropertyError,
)

PROPERTY_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")

DocumentSource = Union[str, Path, IO[str], dict]


def _check_property_name(name: object) -> str:
    if not isinstance(name, str) or not PROPERTY_NAME_RE.match(name):
        raise OntologyError(
            f"invalid property name {name!r}: need a non-empty string over "
            "[A-Za-z0-9_.-] with no whitespace"
        )
    return name


class Ontology:
    """A finite set of boolean properties plus an acyclic entailment graph.

    An edge (p, q) means every description having p implicitly has q. The
    reflexive closure is implicit and never stored. Cycles are rejected at
    construction with one witness path in the error.
    """

    __slots__ = ("properties", "entails", "_reach")

    def __init__(self, properties: Iterable[str], entails: Iterable[tuple[str, str]] = ()):
        props = []
        seen = set()
        for name in properties:
            _check_property_name(name)
            if name in seen:
                raise OntologyError(f"duplicate property declaration: {name!r}")
            seen.add(name)
            props.append(name)
        self.properties: frozenset[str] = frozenset(props)

        edges = []
        edge_seen = set()
        for edge in entails:
            p, q = edge
            for endpoint in (p, q):
                if endpoint not in self.properties:
                    raise OntologyError(
                        f"entailment edge ({p!r}, {q!r}) references undeclared "
                        f"property {endpoint!r}"
                    )
            if (p, q) in edge_seen:
                raise OntologyError(f"duplicate entailment edge: ({p!r}, {q!r})")
            edge_seen.add((p, q))
            edges.append((p, q))
        self.entails: frozenset[tuple[str, str]] = frozenset(edges)

        self._reach = self._compute_reachability()

    def _compute_reachability(self) -> dict[str, frozenset[str]]:
        """Full transitive reachability per property; rejects cycles."""
        out: dict[str, list[str]] = {p: [] for p in self.properties}
        indeg: dict[str, int] = {p: 0 for p in self.properties}
        for p, q in self.entails:
            out[p].append(q)
            indeg[q] += 1

        # Kahn's algorithm; whatever survives with nonzero in-degree sits on
        # a cycle, which we then walk to produce a concrete witness.
        order = []
        ready = sorted(p for p, d in indeg.items() if d == 0)
        while ready:
            p = ready.pop()
            order.append(p)
            for q in out[p]:
                indeg[q] -= 1
                if indeg[q] == 0:
                    ready.append(q)
        if len(order) < len(self.properties):
            residual = {p for p, d in indeg.items() if d > 0}
            start = sorted(residual)[0]
            path, seen_at = [start], {start: 0}
            while True:
                nxt = sorted(q for q in out[path[-1]] if q in residual)[0]
                if nxt in seen_at:
                    raise EntailmentCycleError(path[seen_at[nxt]:] + [nxt])
                seen_at[nxt] = len(path)
                path.append(nxt)

        reach: dict[str, frozenset[str]] = {}
        for p in reversed(order):  # successors first
            acc = {p}
            for q in out[p]:
                acc.update(reach[q])
            reach[p] = frozenset(acc)
        return reach

    def closure(self, props: Iterable[str]) -> frozenset[str]:
        """Smallest superset of ``props`` closed under the entailment edges.

        Equals the set of graph nodes reachable from ``props``. Idempotent,
        monotone, and extensive.
        """
        result: set[str] = set()
        for p in props:
            reach = self._reach.get(p)
            if reach is None:
                raise UnknownPropertyError(p)
            result.update(reach)
        return frozenset(result)

    def __contains__(self, name: str) -> bool:
        return name in self.properties

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return self.properties == other.properties and self.entails == other.entails

    def __hash__(self) -> int:
        return hash((self.properties, self.entails))

    def __repr__(self) -> str:
        return f"Ontology({len(self.properties)} properties, {len(self.entails)} edges)"

    def to_dict(self) -> dict:
        return {
            "properties": sorted(self.properties),
            "entails": sorted([p, q] for p, q in self.entails),
        }


@dataclass(frozen=True)
class Case:
    """One solved problem: an id, a raw problem set, and a raw solution set.

    Raw means pre-closure; apply :func:`format_case` to get the closed pair.
    """

    id: str
    problem: frozenset[str]
    solution: frozenset[str]

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise CaseBaseFormatError(f"case id must be a non-empty string, got {self.id!r}")
        object.__setattr__(self, "problem", frozenset(self.problem))
        object.__setattr__(self, "solution", frozenset(self.solution))


@dataclass(frozen=True)
class CaseBase:
    """An ordered collection of cases sharing one ontology."""

    cases: tuple[Case, ...]
    ontology: Ontology
    _index: dict = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(self.cases))
        index: dict[str, Case] = {}
        for case in self.cases:
            if case.id in index:
                raise CaseBaseFormatError(f"duplicate case id: {case.id!r}")
            for facet_name, props in (("problem", case.problem), ("solution", case.solution)):
                for p in props:
                    if p not in self.ontology:
                        raise UnknownPropertyError(p)
            index[case.id] = case
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self):
        return iter(self.cases)

    def case(self, case_id: str) -> Case:
        try:
            return self._index[case_id]
        except KeyError:
            raise CaseBaseFormatError(f"no case with id {case_id!r}") from None

    def to_dict(self) -> dict:
        return {
            "ontology": self.ontology.to_dict(),
            "cases": [
                {
                    "id": c.id,
                    "problem": sorted(c.problem),
                    "solution": sorted(c.solution),
                }
                for c in self.cases
            ],
        }


def closure(props: Iterable[str], onto: Ontology) -> frozenset[str]:
    """Function form of :meth:`Ontology.closure`."""
    return onto.closure(props)


def format_case(case: Case, onto: Ontology) -> tuple[frozenset[str], frozenset[str]]:
    """Close the problem and solution sets independently under the ontology."""
    return onto.closure(case.problem), onto.closure(case.solution)


def _load_json_document(source: DocumentSource, what: str) -> dict:
    if isinstance(source, dict):
        return source
    if not isinstance(source, (str, Path)) and not hasattr(source, "read"):
        raise CaseBaseFormatError(f"{what} must be a JSON object, path, or stream")
    try:
        if isinstance(source, (str, Path)):
            text = Path(source).read_text(encoding="utf-8")
        else:
            text = source.read()
        doc = json.loads(text)
    except OSError as exc:
        raise CaseBaseFormatError(f"cannot read {what}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CaseBaseFormatError(f"{what} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CaseBaseFormatError(f"{what} must be a JSON object")
    return doc


def _string_list(value: object, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise CaseBaseFormatError(f"{what} must be a list of strings")
    dupes = {v for v in value if value.count(v) > 1}
    if dupes:
        raise CaseBaseFormatError(f"duplicate entries in {what}: {sorted(dupes)}")
    return value


def load_ontology(source: DocumentSource) -> Ontology:
    """Parse an ontology document: ``{"properties": [...], "entails": [[p, q], ...]}``.

    Accepts a path, an open text stream, or an already-parsed dict.
    """
    doc = _load_json_document(source, "ontology document")
    if "properties" not in doc:
        raise CaseBaseFormatError('ontology document needs a "properties" list')
    props = _string_list(doc["properties"], '"properties"')
    raw_edges = doc.get("entails", [])
    if not isinstance(raw_edges, list):
        raise CaseBaseFormatError('"entails" must be a list of [p, q] pairs')
    edges = []
    for entry in raw_edges:
        if not (isinstance(entry, list) and len(entry) == 2 and all(isinstance(e, str) for e in entry)):
            raise CaseBaseFormatError(f'"entails" entry {entry!r} is not a [p, q] pair')
        edges.append((entry[0], entry[1]))
    try:
        return Ontology(props, edges)
    except EntailmentCycleError:
        raise
    except OntologyError as exc:
        raise CaseBaseFormatError(str(exc)) from exc


def load_case_base(source: DocumentSource) -> CaseBase:
    """Parse a case base document.

    Layout: ``{"ontology": {...}, "cases": [{"id", "problem", "solution"}, ...]}``.
    Property lists are order-insensitive sets; duplicate entries are rejected.
    """
    doc = _load_json_document(source, "case base document")
    if "ontology" not in doc or "cases" not in doc:
        raise CaseBaseFormatError('case base document needs "ontology" and "cases"')
    onto = load_ontology(doc["ontology"])
    raw_cases = doc["cases"]
    if not isinstance(raw_cases, list):
        raise CaseBaseFormatError('"cases" must be a list')
    cases = []
    for entry in raw_cases:
        if not isinstance(entry, dict) or "id" not in entry:
            raise CaseBaseFormatError(f"case entry {entry!r} needs an id")
        cid = entry["id"]
        if "problem" not in entry or "solution" not in entry:
            raise CaseBaseFormatError(f'case {cid!r} needs "problem" and "solution" lists')
        problem = _string_list(entry["problem"], f'case {cid!r} "problem"')
        solution = _string_list(entry["solution"], f'case {cid!r} "solution"')
        cases.append(Case(id=cid, problem=frozenset(problem), solution=frozenset(solution)))
    try:
        return CaseBase(cases=tuple(cases), ontology=onto)
    except UnknownPropertyError as exc:
        raise CaseBaseFormatError(str(exc)) from exc


def save_case_base(cb: CaseBase, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(cb.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
