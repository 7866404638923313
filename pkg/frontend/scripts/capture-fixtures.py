"""Capture real service responses into tests/fixtures.json.

The UI tests run against a mocked fetch; this script keeps the mock's
payloads byte-shaped like the live API. Regenerate after any API change:

    python3 frontend/scripts/capture-fixtures.py
"""

import json
import tempfile
from fractions import Fraction
from pathlib import Path

from fastapi.testclient import TestClient

from adaptmine import (
    Workspace,
    build_transaction_db,
    demo_case_base,
    demo_pattern_items,
    lattice_links,
    mine_closed_frequent,
    renumber,
    save_workspace,
)
from adaptmine.service import create_app

EXPLANATION = "when a gives way to d, replace A with C"


def fresh_workspace(directory: Path) -> None:
    cb = demo_case_base()
    db = build_transaction_db(cb)
    fcis = renumber([f for f in mine_closed_frequent(db, "0.3") if f.items])
    lattice_links(fcis)
    w = Workspace.from_mining(cb, Fraction(3, 10), fcis, n_transactions=len(db))
    save_workspace(w, directory)


def main() -> None:
    out = {}
    with tempfile.TemporaryDirectory() as tmp:
        directory = Path(tmp) / "ws"
        fresh_workspace(directory)
        client = TestClient(create_app(directory, ui_dir=None))

        out["workspace"] = client.get("/api/workspace").json()
        out["fcis"] = client.get("/api/fcis").json()
        out["rules"] = client.get("/api/rules").json()
        out["fci_details"] = {
            str(f["id"]): client.get(f"/api/fcis/{f['id']}").json()
            for f in out["fcis"]["fcis"]
        }
        out["fci_examples"] = {
            str(f["id"]): client.get(f"/api/fcis/{f['id']}/examples").json()
            for f in out["fcis"]["fcis"]
        }

        pattern = {i.canonical() for i in demo_pattern_items()}
        pattern_fci = next(
            f for f in out["fcis"]["fcis"] if set(f["items"]) == pattern
        )
        out["pattern_rule_id"] = pattern_fci["rule-id"]
        out["explanation"] = EXPLANATION

        out["solve_cd_no_rules"] = client.post(
            "/api/solve", json={"problem": ["c", "d"]}
        ).json()
        out["solve_bcd_identity"] = client.post(
            "/api/solve", json={"problem": ["b", "c", "d"]}
        ).json()
        response = client.post("/api/solve", json={"problem": ["c", "zz"]})
        out["solve_unknown_detail"] = response.json()["detail"]

        etag = out["workspace"]["etag"]
        decided = client.post(
            f"/api/rules/{out['pattern_rule_id']}/decision",
            json={"action": "accept", "explanation": EXPLANATION, "etag": etag},
        )
        assert decided.status_code == 200, decided.text
        out["accepted_rule"] = decided.json()["rule"]

        out["solve_cd_accepted"] = client.post(
            "/api/solve", json={"problem": ["c", "d"]}
        ).json()
        out["solve_c_accepted"] = client.post(
            "/api/solve", json={"problem": ["c"]}
        ).json()

    target = Path(__file__).resolve().parent.parent / "tests" / "fixtures.json"
    target.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print("wrote", target)


if __name__ == "__main__":
    main()
