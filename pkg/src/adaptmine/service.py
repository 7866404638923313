"""Local HTTP API for analyst review, plus static hosting of the UI build.

The service owns one workspace directory. Reads are cheap; mutations go
through the decision endpoint, which enforces the etag protocol (the etag
hashes the current event sequence, so two clients cannot both win a race),
records the review event, and persists the workspace before acknowledging.
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.staticfiles import StaticFiles

from .exceptions import (
    IllegalTransitionError,
    IntegrityError,
    MiningGuardError,
    RuleInterpretationError,
    StaleSequenceError,
    UnknownPropertyError,
)
from .mining import as_sigma
from .rules import TargetProblem, solve_json_payload
from .store import Workspace, load_workspace, save_workspace
from .transactions import TransactionDb, build_transaction_db

DEFAULT_PAGE_SIZE = 50

DECISION_ACTIONS = {
    "edit": "edited",
    "edited": "edited",
    "accept": "accepted",
    "accepted": "accepted",
    "reject": "rejected",
    "rejected": "rejected",
    "reopen": "reopened",
    "reopened": "reopened",
}


def default_ui_dir() -> Optional[Path]:
    """The bundled frontend build, when it has been produced."""
    here = Path(__file__).resolve()
    for base in (here.parent.parent.parent, here.parent):
        candidate = base / "frontend" / "dist"
        if candidate.is_dir():
            return candidate
    return None


class _ServiceState:
    """Shared mutable state behind the route handlers."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.workspace: Workspace = load_workspace(directory)
        self.db: Optional[TransactionDb] = None
        self.write_lock = threading.Lock()

    def transaction_db(self) -> TransactionDb:
        # Rebuilt lazily from the stored case base; differencing is
        # deterministic, so this reproduces exactly the mined transactions.
        if self.db is None:
            self.db = build_transaction_db(
                self.workspace.case_base, pair_filter=self.workspace.pair_filter
            )
        return self.db


def _fci_payload(state: _ServiceState, fci) -> dict:
    doc = fci.to_json_dict(state.workspace.n_transactions)
    doc["rule-id"] = state.workspace.rule_id_for_fci(fci.id)
    return doc


def create_app(workspace_dir: Union[str, Path], ui_dir: Optional[Path] = None) -> FastAPI:
    state = _ServiceState(Path(workspace_dir))
    app = FastAPI(title="adaptmine review service", docs_url="/docs")
    app.state.service = state

    @app.get("/api/workspace")
    def get_workspace():
        w = state.workspace
        return {
            "sigma": str(w.sigma),
            "pair-filter": w.pair_filter,
            "n-cases": len(w.case_base.cases),
            "n-transactions": w.n_transactions,
            "n-fcis": len(w.fcis),
            "n-rules": len(w.rules),
            "etag": w.etag(),
        }

    @app.get("/api/fcis")
    def list_fcis(
        response: Response,
        min_support: Optional[str] = Query(None, alias="min-support"),
        sort: str = "support-desc",
        page: int = 1,
        page_size: int = Query(DEFAULT_PAGE_SIZE, alias="page-size"),
    ):
        w = state.workspace
        fcis = list(w.fcis)
        if min_support is not None:
            try:
                threshold = as_sigma(min_support)
            except MiningGuardError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            fcis = [f for f in fcis if f.support >= threshold]
        if sort == "support-desc":
            fcis.sort(key=lambda f: (-f.count, f.id))
        elif sort == "support-asc":
            fcis.sort(key=lambda f: (f.count, f.id))
        elif sort == "id":
            fcis.sort(key=lambda f: f.id)
        else:
            raise HTTPException(status_code=400, detail=f"unknown sort order {sort!r}")
        if page < 1 or page_size < 1:
            raise HTTPException(status_code=400, detail="page and page_size start at 1")
        total = len(fcis)
        start = (page - 1) * page_size
        window = fcis[start:start + page_size]
        response.headers["X-Total-Count"] = str(total)
        return {
            "fcis": [_fci_payload(state, f) for f in window],
            "page": page,
            "page-size": page_size,
            "total": total,
            "etag": w.etag(),
        }

    @app.get("/api/fcis/{fci_id}")
    def get_fci(fci_id: int):
        fci = state.workspace.fci_by_id(fci_id)
        if fci is None:
            raise HTTPException(status_code=404, detail=f"no itemset with id {fci_id}")
        return _fci_payload(state, fci)

    @app.get("/api/fcis/{fci_id}/examples")
    def fci_examples(fci_id: int):
        w = state.workspace
        fci = w.fci_by_id(fci_id)
        if fci is None:
            raise HTTPException(status_code=404, detail=f"no itemset with id {fci_id}")
        db = state.transaction_db()
        codes = [db.dictionary.get_code(item) for item in fci.items]
        if any(c is None for c in codes):
            raise HTTPException(
                status_code=500, detail="itemset does not map onto the rebuilt transactions"
            )
        want = frozenset(codes)
        examples = []
        for i, row in enumerate(db.iter_row_codes()):
            if want <= frozenset(row):
                examples.append(
                    {
                        "pair": list(db.pair(i)),
                        "items": [db.dictionary.item(c).canonical() for c in row],
                    }
                )
        return {"fci": fci.id, "count": fci.count, "examples": examples}

    @app.get("/api/rules")
    def list_rules(status: Optional[str] = None):
        w = state.workspace
        rules = [w.rules[rid] for rid in sorted(w.rules)]
        if status is not None:
            rules = [r for r in rules if r.status == status]
        return {"rules": [r.to_json_dict() for r in rules], "etag": w.etag()}

    @app.get("/api/rules/{rule_id}")
    def get_rule(rule_id: int):
        rule = state.workspace.rules.get(rule_id)
        if rule is None:
            raise HTTPException(status_code=404, detail=f"no rule with id {rule_id}")
        return rule.to_json_dict()

    @app.post("/api/rules/{rule_id}/decision")
    def decide(rule_id: int, body: dict = Body(...)):
        action_name = body.get("action")
        if action_name not in DECISION_ACTIONS:
            raise HTTPException(status_code=422, detail=f"unknown action {action_name!r}")
        action = DECISION_ACTIONS[action_name]
        edits = body.get("edits")
        if edits is not None and action not in ("edited", "accepted"):
            raise HTTPException(
                status_code=422, detail=f"edits do not apply to action {action_name!r}"
            )
        with state.write_lock:
            w = state.workspace
            if w.rules.get(rule_id) is None:
                raise HTTPException(status_code=404, detail=f"no rule with id {rule_id}")
            if body.get("etag") != w.etag():
                raise HTTPException(
                    status_code=409, detail="stale etag: the workspace changed, reload"
                )
            try:
                event = w.make_event(
                    rule_id,
                    action,
                    actor=body.get("actor", "analyst"),
                    explanation=body.get("explanation"),
                    edits=edits,
                )
                w.record_event(event)
            except (IllegalTransitionError, RuleInterpretationError) as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            except StaleSequenceError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except IntegrityError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            save_workspace(w, state.directory)
            return {"rule": w.rules[rule_id].to_json_dict(), "etag": w.etag()}

    @app.post("/api/solve")
    def solve(body: dict = Body(...)):
        problem = body.get("problem")
        if not isinstance(problem, list):
            raise HTTPException(status_code=422, detail='body needs a "problem" list')
        k = body.get("k", 5)
        w = state.workspace
        try:
            payload, _ = solve_json_payload(
                w.case_base, w.rules, TargetProblem(problem=frozenset(problem)), k=k
            )
        except UnknownPropertyError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return Response(content=payload, media_type="application/json")

    resolved_ui = ui_dir if ui_dir is not None else default_ui_dir()
    if resolved_ui is not None and Path(resolved_ui).is_dir():
        app.mount("/", StaticFiles(directory=str(resolved_ui), html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return {
                "service": "adaptmine review service",
                "ui": "not built; API only",
                "routes": [
                    "/api/workspace",
                    "/api/fcis",
                    "/api/fcis/{id}",
                    "/api/fcis/{id}/examples",
                    "/api/rules",
                    "/api/rules/{id}",
                    "/api/rules/{id}/decision",
                    "/api/solve",
                ],
            }

    return app
