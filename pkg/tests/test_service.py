"""HTTP review service: reads, the etag-gated decision flow, solving."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from adaptmine.datasets import demo_pattern_items
from adaptmine.rules import TargetProblem, solve_json_payload
from adaptmine.service import create_app
from adaptmine.store import load_workspace
from adaptmine.transactions import sort_items


# A path that never exists keeps the JSON index active even when a real
# frontend build is present in the repo.
def absent_ui(workspace_dir):
    return Path(workspace_dir) / "no-ui"


@pytest.fixture()
def client(demo_workspace):
    app = create_app(demo_workspace, ui_dir=absent_ui(demo_workspace))
    with TestClient(app) as c:
        c.workspace_dir = demo_workspace
        yield c


def current_etag(client):
    return client.get("/api/workspace").json()["etag"]


def pattern_rule_id(client):
    pattern = {item for item in demo_pattern_items()}
    texts = {i.canonical() for i in pattern}
    for rule in client.get("/api/rules").json()["rules"]:
        conds = set(rule["pb-conditions"]) | {f"sol:-:{p}" for p in rule["sol-remove"]}
        conds |= {f"sol:=:{p}" for p in rule["sol-keep"]}
        conds |= {f"sol:+:{p}" for p in rule["sol-add"]}
        if conds == texts:
            return rule["id"]
    raise AssertionError("planted pattern rule not listed")


def accept(client, rule_id, explanation="replace A with C"):
    response = client.post(
        f"/api/rules/{rule_id}/decision",
        json={"action": "accept", "explanation": explanation,
              "etag": current_etag(client)},
    )
    assert response.status_code == 200, response.text
    return response


class TestReads:
    def test_workspace_summary(self, client):
        doc = client.get("/api/workspace").json()
        assert doc["sigma"] == "3/10"
        assert doc["n-cases"] == 6
        assert doc["n-transactions"] == 30
        assert doc["n-fcis"] == 7
        assert doc["n-rules"] >= 1
        assert len(doc["etag"]) == 64

    def test_fcis_default_sort(self, client):
        doc = client.get("/api/fcis").json()
        counts = [f["count"] for f in doc["fcis"]]
        assert counts == sorted(counts, reverse=True)
        assert doc["total"] == 7
        assert doc["page"] == 1 and doc["page-size"] == 50

    def test_fcis_pagination(self, client):
        response = client.get("/api/fcis", params={"page-size": 3, "page": 2})
        doc = response.json()
        assert len(doc["fcis"]) == 3
        assert response.headers["X-Total-Count"] == "7"
        last = client.get("/api/fcis", params={"page-size": 3, "page": 3}).json()
        assert len(last["fcis"]) == 1
        beyond = client.get("/api/fcis", params={"page-size": 3, "page": 4}).json()
        assert beyond["fcis"] == []

    def test_fcis_min_support_filter(self, client):
        doc = client.get("/api/fcis", params={"min-support": "0.9"}).json()
        assert doc["total"] < 7
        assert all(json.loads('"%s"' % f["support"]) for f in doc["fcis"])
        for f in doc["fcis"]:
            num, den = f["support"].split("/")
            assert int(num) / int(den) >= 0.9

    def test_fcis_bad_params(self, client):
        assert client.get("/api/fcis", params={"min-support": "nope"}).status_code == 400
        assert client.get("/api/fcis", params={"sort": "alphabetical"}).status_code == 400
        assert client.get("/api/fcis", params={"page": 0}).status_code == 400

    def test_fci_detail_and_examples(self, client):
        texts = [i.canonical() for i in sort_items(demo_pattern_items())]
        listing = client.get("/api/fcis", params={"page-size": 50}).json()["fcis"]
        target = next(f for f in listing if f["items"] == texts)
        detail = client.get(f"/api/fcis/{target['id']}").json()
        assert detail == target
        examples = client.get(f"/api/fcis/{target['id']}/examples").json()
        assert examples["count"] == target["count"]
        assert len(examples["examples"]) == target["count"]
        pairs = {tuple(e["pair"]) for e in examples["examples"]}
        assert ("case01", "case04") in pairs
        worked = next(e for e in examples["examples"]
                      if e["pair"] == ["case01", "case04"])
        assert set(texts) <= set(worked["items"])

    def test_fci_404(self, client):
        assert client.get("/api/fcis/999").status_code == 404
        assert client.get("/api/fcis/999/examples").status_code == 404

    def test_rules_listing(self, client):
        doc = client.get("/api/rules").json()
        assert all(r["status"] == "candidate" for r in doc["rules"])
        ids = [r["id"] for r in doc["rules"]]
        assert ids == sorted(ids)
        filtered = client.get("/api/rules", params={"status": "accepted"}).json()
        assert filtered["rules"] == []

    def test_rule_detail(self, client):
        rid = pattern_rule_id(client)
        doc = client.get(f"/api/rules/{rid}").json()
        assert doc["id"] == rid
        assert {"source-fci", "pb-conditions", "sol-keep", "sol-remove",
                "sol-add", "status", "explanation"} <= set(doc)
        assert client.get("/api/rules/999").status_code == 404

    def test_index_without_ui(self, client):
        doc = client.get("/").json()
        assert "routes" in doc

    def test_static_ui_mounts_when_present(self, demo_workspace, tmp_path):
        ui = tmp_path / "dist"
        ui.mkdir()
        ui.joinpath("index.html").write_text("<h1>analyst ui</h1>")
        app = create_app(demo_workspace, ui_dir=ui)
        with TestClient(app) as c:
            page = c.get("/")
            assert page.status_code == 200
            assert "analyst ui" in page.text
            # API routes still resolve ahead of the static mount.
            assert c.get("/api/workspace").status_code == 200


class TestDecisions:
    def test_accept_persists(self, client):
        rid = pattern_rule_id(client)
        before = current_etag(client)
        response = accept(client, rid)
        doc = response.json()
        assert doc["rule"]["status"] == "accepted"
        assert doc["etag"] != before
        stored = load_workspace(client.workspace_dir)
        assert stored.rules[rid].status == "accepted"
        assert stored.current_sequence == 1
        assert stored.events[-1].action == "accepted"

    def test_accept_needs_explanation(self, client):
        rid = pattern_rule_id(client)
        response = client.post(
            f"/api/rules/{rid}/decision",
            json={"action": "accept", "explanation": "", "etag": current_etag(client)},
        )
        assert response.status_code == 422
        assert load_workspace(client.workspace_dir).current_sequence == 0

    def test_stale_etag_409(self, client):
        rid = pattern_rule_id(client)
        stale = current_etag(client)
        accept(client, rid)
        response = client.post(
            f"/api/rules/{rid}/decision",
            json={"action": "reject", "etag": stale},
        )
        assert response.status_code == 409
        assert "reload" in response.json()["detail"]

    def test_two_clients_race(self, demo_workspace):
        app = create_app(demo_workspace, ui_dir=absent_ui(demo_workspace))
        with TestClient(app) as one, TestClient(app) as two:
            one.workspace_dir = demo_workspace
            rid = pattern_rule_id(one)
            shared = current_etag(one)
            first = one.post(
                f"/api/rules/{rid}/decision",
                json={"action": "accept", "explanation": "mine first", "etag": shared},
            )
            assert first.status_code == 200
            second = two.post(
                f"/api/rules/{rid}/decision",
                json={"action": "reject", "etag": shared},
            )
            assert second.status_code == 409

    def test_edit_then_accept(self, client):
        rid = pattern_rule_id(client)
        edited = client.post(
            f"/api/rules/{rid}/decision",
            json={
                "action": "edit",
                "edits": {"sol-add": []},
                "explanation": "drop the addition",
                "etag": current_etag(client),
            },
        )
        assert edited.status_code == 200
        assert edited.json()["rule"]["sol-add"] == []
        accepted = accept(client, rid, explanation="removal only")
        assert accepted.json()["rule"]["sol-add"] == []
        assert accepted.json()["rule"]["status"] == "accepted"

    def test_reject_then_reopen(self, client):
        rid = pattern_rule_id(client)
        rejected = client.post(
            f"/api/rules/{rid}/decision",
            json={"action": "reject", "etag": current_etag(client)},
        )
        assert rejected.status_code == 200
        assert rejected.json()["rule"]["status"] == "rejected"
        reopened = client.post(
            f"/api/rules/{rid}/decision",
            json={"action": "reopen", "etag": current_etag(client)},
        )
        assert reopened.status_code == 200
        assert reopened.json()["rule"]["status"] == "candidate"

    def test_edits_on_reject_422(self, client):
        rid = pattern_rule_id(client)
        response = client.post(
            f"/api/rules/{rid}/decision",
            json={"action": "reject", "edits": {"sol-add": []},
                  "etag": current_etag(client)},
        )
        assert response.status_code == 422

    def test_double_accept_422(self, client):
        rid = pattern_rule_id(client)
        accept(client, rid)
        response = client.post(
            f"/api/rules/{rid}/decision",
            json={"action": "accept", "explanation": "again",
                  "etag": current_etag(client)},
        )
        assert response.status_code == 422

    def test_unknown_rule_404(self, client):
        response = client.post(
            "/api/rules/999/decision",
            json={"action": "accept", "explanation": "x", "etag": current_etag(client)},
        )
        assert response.status_code == 404

    def test_unknown_action_422(self, client):
        rid = pattern_rule_id(client)
        response = client.post(
            f"/api/rules/{rid}/decision",
            json={"action": "promote", "etag": current_etag(client)},
        )
        assert response.status_code == 422


class TestSolve:
    def test_byte_parity_with_library(self, client):
        rid = pattern_rule_id(client)
        accept(client, rid)
        response = client.post("/api/solve", json={"problem": ["c", "d"]})
        assert response.status_code == 200
        stored = load_workspace(client.workspace_dir)
        payload, found = solve_json_payload(
            stored.case_base, stored.rules, TargetProblem(frozenset({"c", "d"}))
        )
        assert found
        assert response.content == payload
        doc = response.json()
        assert doc["solution"] == ["B", "C"]
        assert doc["used-case"] == "case03"

    def test_identity_fallback(self, client):
        response = client.post("/api/solve", json={"problem": ["b", "c", "d"]})
        assert response.status_code == 200
        doc = response.json()
        assert doc["used-rules"] == []
        assert doc["solution"] == ["B", "C"]

    def test_no_solution_report(self, client):
        response = client.post("/api/solve", json={"problem": ["c", "d"]})
        assert response.status_code == 200
        doc = response.json()
        assert doc["solution"] is None
        assert doc["diagnostics"]
        top = doc["diagnostics"][0]
        assert {"case", "similarity", "nearest-rule", "unmet-pb",
                "sol-missing", "sol-present"} <= set(top)

    def test_unknown_property_422(self, client):
        response = client.post("/api/solve", json={"problem": ["c", "zz"]})
        assert response.status_code == 422
        assert "zz" in response.json()["detail"]

    def test_missing_problem_422(self, client):
        assert client.post("/api/solve", json={}).status_code == 422
        assert client.post("/api/solve", json={"problem": "c"}).status_code == 422
