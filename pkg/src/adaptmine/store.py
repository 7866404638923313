"""Workspace persistence with an append-only review audit trail.

A workspace directory holds the case base, the mined itemsets, the current
rule table, and every review event, plus a manifest with content hashes.
The rule table is never edited directly: review actions append events, and
the table is the fold of those events over the auto-generated candidates.
Loading re-runs that fold and refuses a directory whose files disagree.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Union

from filelock import FileLock, Timeout

from .exceptions import (
    IllegalTransitionError,
    IntegrityError,
    StaleSequenceError,
    StaleWorkspaceError,
    WorkspaceLockError,
)
from .mining import Fci
from .model import CaseBase, load_case_base
from .rules import (
    STATUS_ACCEPTED,
    STATUS_CANDIDATE,
    STATUS_REJECTED,
    AdaptationRule,
    generate_candidates,
)
from .transactions import parse_item, sort_items

EVENT_ACTIONS = ("created", "edited", "accepted", "rejected", "reopened")

CASEBASE_FILE = "casebase.json"
FCIS_FILE = "fcis.jsonl"
RULES_FILE = "rules.jsonl"
EVENTS_FILE = "events.jsonl"
MANIFEST_FILE = "manifest.json"
HASHED_FILES = (CASEBASE_FILE, FCIS_FILE, RULES_FILE, EVENTS_FILE)
LOCK_FILE = ".lock"

LOCK_TIMEOUT_SECONDS = 10.0


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass(frozen=True)
class ReviewEvent:
    """One analyst action on one rule; the payload is the full rule snapshot
    as it stands after the action."""

    sequence: int
    timestamp: str
    rule_id: int
    action: str
    payload: dict
    actor: str

    def __post_init__(self):
        if self.sequence < 1:
            raise IntegrityError(f"event sequence must start at 1, got {self.sequence}")
        if self.action not in EVENT_ACTIONS:
            raise IntegrityError(f"unknown event action {self.action!r}")
        try:
            datetime.fromisoformat(self.timestamp)
        except ValueError:
            raise IntegrityError(f"event timestamp is not ISO 8601: {self.timestamp!r}") from None

    def rule(self) -> AdaptationRule:
        return AdaptationRule.from_json_dict(self.payload)

    def to_json_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "timestamp": self.timestamp,
            "rule-id": self.rule_id,
            "action": self.action,
            "payload": self.payload,
            "actor": self.actor,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ReviewEvent":
        try:
            return cls(
                sequence=data["sequence"],
                timestamp=data["timestamp"],
                rule_id=data["rule-id"],
                action=data["action"],
                payload=data["payload"],
                actor=data["actor"],
            )
        except KeyError as exc:
            raise IntegrityError(f"event record is missing key {exc}") from None


def _apply_event(table: dict[int, AdaptationRule], event: ReviewEvent) -> None:
    """Check one event against the table and fold it in. Raises on any
    illegal transition or referential problem; mutates ``table`` on success."""
    rule = event.rule()
    if rule.id != event.rule_id:
        raise IntegrityError(
            f"event {event.sequence}: payload rule id {rule.id} does not match "
            f"event rule id {event.rule_id}"
        )
    if event.action == "created":
        if event.rule_id in table:
            raise IllegalTransitionError(
                f"event {event.sequence}: cannot create rule {event.rule_id}, id already in use"
            )
        if rule.status != STATUS_CANDIDATE:
            raise IllegalTransitionError(
                f"event {event.sequence}: created rules must start as candidates"
            )
        table[event.rule_id] = rule
        return

    current = table.get(event.rule_id)
    if current is None:
        raise IntegrityError(
            f"event {event.sequence} references unknown rule id {event.rule_id}"
        )
    if rule.source_fci != current.source_fci:
        raise IntegrityError(
            f"event {event.sequence}: rule {event.rule_id} cannot change its source "
            f"itemset ({current.source_fci} -> {rule.source_fci})"
        )
    expected_status = {
        "edited": STATUS_CANDIDATE,
        "accepted": STATUS_ACCEPTED,
        "rejected": STATUS_REJECTED,
        "reopened": STATUS_CANDIDATE,
    }[event.action]
    if rule.status != expected_status:
        raise IllegalTransitionError(
            f"event {event.sequence}: action {event.action!r} must leave the rule "
            f"{expected_status}, payload says {rule.status!r}"
        )
    legal_from = {
        "edited": (STATUS_CANDIDATE,),
        "accepted": (STATUS_CANDIDATE,),
        "rejected": (STATUS_CANDIDATE,),
        "reopened": (STATUS_ACCEPTED, STATUS_REJECTED),
    }[event.action]
    if current.status not in legal_from:
        raise IllegalTransitionError(
            f"event {event.sequence}: cannot apply {event.action!r} to rule "
            f"{event.rule_id} in status {current.status!r}"
        )
    table[event.rule_id] = rule


def replay_events(
    initial: dict[int, AdaptationRule],
    events: Iterable[ReviewEvent],
    known_fcis: Optional[set[int]] = None,
) -> dict[int, AdaptationRule]:
    """Fold events over the initial candidate table, validating sequence
    numbering and every transition along the way."""
    table = dict(initial)
    expected = 1
    for event in events:
        if event.sequence != expected:
            raise StaleSequenceError(
                f"event sequence jumped to {event.sequence}, expected {expected}"
            )
        if known_fcis is not None and event.action == "created":
            source = event.rule().source_fci
            if source not in known_fcis:
                raise IntegrityError(
                    f"event {event.sequence} creates a rule from unknown itemset {source}"
                )
        _apply_event(table, event)
        expected += 1
    return table


@dataclass
class Workspace:
    """One mining run plus everything the analyst has done to it."""

    case_base: CaseBase
    sigma: Fraction
    n_transactions: int
    fcis: list[Fci]
    rules: dict[int, AdaptationRule]
    events: list[ReviewEvent] = field(default_factory=list)
    pair_filter: Optional[float] = None
    base_digest: Optional[str] = None

    @classmethod
    def from_mining(
        cls,
        case_base: CaseBase,
        sigma: Fraction,
        fcis: list[Fci],
        n_transactions: int,
        pair_filter: Optional[float] = None,
    ) -> "Workspace":
        candidates = generate_candidates(fcis)
        return cls(
            case_base=case_base,
            sigma=sigma,
            n_transactions=n_transactions,
            fcis=fcis,
            rules={r.id: r for r in candidates},
            pair_filter=pair_filter,
        )

    @property
    def current_sequence(self) -> int:
        return self.events[-1].sequence if self.events else 0

    def etag(self) -> str:
        return hashlib.sha256(str(self.current_sequence).encode("ascii")).hexdigest()

    def fci_by_id(self, fci_id: int) -> Optional[Fci]:
        if 0 <= fci_id < len(self.fcis) and self.fcis[fci_id].id == fci_id:
            return self.fcis[fci_id]
        for f in self.fcis:
            if f.id == fci_id:
                return f
        return None

    def rule_id_for_fci(self, fci_id: int) -> Optional[int]:
        for rule in sorted(self.rules.values(), key=lambda r: r.id):
            if rule.source_fci == fci_id:
                return rule.id
        return None

    def record_event(self, event: ReviewEvent) -> "Workspace":
        if event.sequence != self.current_sequence + 1:
            raise StaleSequenceError(
                f"event sequence {event.sequence} is stale, next is {self.current_sequence + 1}"
            )
        if event.action == "created":
            source = event.rule().source_fci
            if self.fci_by_id(source) is None:
                raise IntegrityError(f"cannot create a rule from unknown itemset {source}")
        _apply_event(self.rules, event)
        self.events.append(event)
        return self

    def make_event(
        self,
        rule_id: int,
        action: str,
        actor: str,
        *,
        explanation: Optional[str] = None,
        edits: Optional[dict] = None,
        timestamp: Optional[str] = None,
    ) -> ReviewEvent:
        """Build the next event for an existing rule, deriving the payload
        snapshot from the current rule state plus the requested change."""
        if action not in ("edited", "accepted", "rejected", "reopened"):
            raise IllegalTransitionError(f"unknown review action {action!r}")
        current = self.rules.get(rule_id)
        if current is None:
            raise IntegrityError(f"no rule with id {rule_id}")
        data = current.to_json_dict()
        for key, value in (edits or {}).items():
            if key not in ("pb-conditions", "sol-keep", "sol-remove", "sol-add", "explanation"):
                raise IllegalTransitionError(f"field {key!r} is not editable")
            data[key] = value
        if explanation is not None:
            data["explanation"] = explanation
        data["status"] = {
            "edited": STATUS_CANDIDATE,
            "accepted": STATUS_ACCEPTED,
            "rejected": STATUS_REJECTED,
            "reopened": STATUS_CANDIDATE,
        }[action]
        payload = AdaptationRule.from_json_dict(data).to_json_dict()
        return ReviewEvent(
            sequence=self.current_sequence + 1,
            timestamp=timestamp or utc_now_iso(),
            rule_id=rule_id,
            action=action,
            payload=payload,
            actor=actor,
        )

    def make_created_event(
        self,
        rule: AdaptationRule,
        actor: str,
        *,
        timestamp: Optional[str] = None,
    ) -> ReviewEvent:
        if rule.id in self.rules:
            raise IllegalTransitionError(f"rule id {rule.id} is already in use")
        return ReviewEvent(
            sequence=self.current_sequence + 1,
            timestamp=timestamp or utc_now_iso(),
            rule_id=rule.id,
            action="created",
            payload=rule.to_json_dict(),
            actor=actor,
        )


def _canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in records)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _fci_from_json_dict(data: dict, n_transactions: int) -> Fci:
    try:
        count = data["count"]
        support_text = data["support"]
        expected = f"{count}/{n_transactions}"
        if support_text != expected:
            raise IntegrityError(
                f"itemset {data.get('id')}: support {support_text!r} does not match "
                f"count {count} over {n_transactions} transactions"
            )
        return Fci(
            id=data["id"],
            items=sort_items(parse_item(s) for s in data["items"]),
            count=count,
            support=Fraction(count, n_transactions) if n_transactions else Fraction(0, 1),
            parents=list(data["parents"]),
            children=list(data["children"]),
        )
    except KeyError as exc:
        raise IntegrityError(f"itemset record is missing key {exc}") from None


def workspace_file_bytes(w: Workspace) -> dict[str, bytes]:
    """Serialize every workspace file deterministically (events keep their
    recorded timestamps; nothing else carries time)."""
    fci_records = [f.to_json_dict(w.n_transactions) for f in w.fcis]
    rule_records = [w.rules[rid].to_json_dict() for rid in sorted(w.rules)]
    event_records = [e.to_json_dict() for e in w.events]
    return {
        CASEBASE_FILE: _canonical_json(w.case_base.to_dict()).encode("utf-8"),
        FCIS_FILE: _jsonl(fci_records).encode("utf-8"),
        RULES_FILE: _jsonl(rule_records).encode("utf-8"),
        EVENTS_FILE: _jsonl(event_records).encode("utf-8"),
    }


def _manifest_bytes(w: Workspace, hashes: dict[str, str]) -> bytes:
    manifest = {
        "sigma": str(w.sigma),
        "pair_filter": w.pair_filter,
        "n_cases": len(w.case_base.cases),
        "n_transactions": w.n_transactions,
        "n_fcis": len(w.fcis),
        "n_rules": len(w.rules),
        "hashes": hashes,
    }
    return _canonical_json(manifest).encode("utf-8")


def save_workspace(w: Workspace, directory: Union[str, Path], *, force: bool = False) -> None:
    """Write all workspace files atomically under a directory lock.

    A directory that already holds a workspace is only overwritten when it
    still matches the manifest digest recorded at load time (or when
    ``force`` is passed); this catches two writers racing on one directory.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lock = FileLock(str(directory / LOCK_FILE))
    try:
        lock.acquire(timeout=LOCK_TIMEOUT_SECONDS)
    except Timeout:
        raise WorkspaceLockError(f"workspace {directory} is locked by another writer") from None
    try:
        manifest_path = directory / MANIFEST_FILE
        if manifest_path.exists() and not force:
            on_disk = _sha256(manifest_path.read_bytes())
            if w.base_digest is None:
                raise StaleWorkspaceError(
                    f"{directory} already contains a workspace; refusing to overwrite"
                )
            if on_disk != w.base_digest:
                raise StaleWorkspaceError(
                    f"workspace {directory} changed on disk since this copy was loaded"
                )
        files = workspace_file_bytes(w)
        hashes = {name: _sha256(data) for name, data in files.items()}
        files[MANIFEST_FILE] = _manifest_bytes(w, hashes)
        for name, data in files.items():
            tmp = directory / (name + ".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, directory / name)
        w.base_digest = _sha256(files[MANIFEST_FILE])
    finally:
        lock.release()


def load_workspace(directory: Union[str, Path]) -> Workspace:
    """Read a workspace back, verifying hashes and replaying the audit
    trail; a rule table that is not the fold of its events is rejected."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_FILE
    if not manifest_path.exists():
        raise IntegrityError(f"{directory} has no workspace manifest")
    manifest_bytes = manifest_path.read_bytes()
    try:
        manifest = json.loads(manifest_bytes)
    except json.JSONDecodeError as exc:
        raise IntegrityError(f"unreadable manifest: {exc}") from None

    raw: dict[str, bytes] = {}
    for name in HASHED_FILES:
        path = directory / name
        if not path.exists():
            raise IntegrityError(f"workspace file missing: {name}")
        data = path.read_bytes()
        want = manifest.get("hashes", {}).get(name)
        if want != _sha256(data):
            raise IntegrityError(f"hash mismatch for {name}")
        raw[name] = data

    try:
        sigma = Fraction(manifest["sigma"])
        n_transactions = manifest["n_transactions"]
        pair_filter = manifest.get("pair_filter")
    except (KeyError, ValueError) as exc:
        raise IntegrityError(f"manifest is incomplete or malformed: {exc}") from None

    case_base = load_case_base(json.loads(raw[CASEBASE_FILE]))
    fcis = [
        _fci_from_json_dict(json.loads(line), n_transactions)
        for line in raw[FCIS_FILE].decode("utf-8").splitlines()
        if line.strip()
    ]
    stored_rules = [
        AdaptationRule.from_json_dict(json.loads(line))
        for line in raw[RULES_FILE].decode("utf-8").splitlines()
        if line.strip()
    ]
    events = [
        ReviewEvent.from_json_dict(json.loads(line))
        for line in raw[EVENTS_FILE].decode("utf-8").splitlines()
        if line.strip()
    ]

    initial = {r.id: r for r in generate_candidates(fcis)}
    replayed = replay_events(initial, events, known_fcis={f.id for f in fcis})

    stored_table = {r.id: r for r in stored_rules}
    for rid in sorted(set(replayed) | set(stored_table)):
        if replayed.get(rid) != stored_table.get(rid):
            raise IntegrityError(
                f"rule table does not match event replay; first divergent rule id: {rid}"
            )

    for check, actual in (
        ("n_cases", len(case_base.cases)),
        ("n_fcis", len(fcis)),
        ("n_rules", len(stored_rules)),
    ):
        if manifest.get(check) != actual:
            raise IntegrityError(f"manifest count {check}={manifest.get(check)} but found {actual}")

    return Workspace(
        case_base=case_base,
        sigma=sigma,
        n_transactions=n_transactions,
        fcis=fcis,
        rules=replayed,
        events=events,
        pair_filter=pair_filter,
        base_digest=_sha256(manifest_bytes),
    )
