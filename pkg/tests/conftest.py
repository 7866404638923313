"""Suite-wide fixtures and the acceptance-criteria summary.

Tests marked ``@pytest.mark.acceptance(name="...")`` each print one
``ACCEPTANCE <name>: PASS|FAIL`` line at the end of the run.
"""

from __future__ import annotations

import pytest

_acceptance_nodes: dict[str, str] = {}
_acceptance_outcomes: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): a top-level acceptance criterion, reported in the summary"
    )


def pytest_collection_modifyitems(config, items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            _acceptance_nodes[item.nodeid] = marker.kwargs.get("name", item.name)


def pytest_runtest_logreport(report):
    if report.nodeid not in _acceptance_nodes:
        return
    if report.when == "call":
        _acceptance_outcomes[report.nodeid] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_nodes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid, name in sorted(_acceptance_nodes.items(), key=lambda kv: kv[1]):
        outcome = _acceptance_outcomes.get(nodeid)
        if outcome == "passed":
            status = "PASS"
        elif outcome == "skipped":
            status = "SKIP"
        elif outcome is None:
            status = "NOT RUN"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {name}: {status}")


@pytest.fixture()
def demo_workspace(tmp_path):
    """A mined demo workspace on disk, with lattice links and candidates."""
    from fractions import Fraction

    from adaptmine import (
        Workspace,
        build_transaction_db,
        demo_case_base,
        lattice_links,
        mine_closed_frequent,
        renumber,
        save_workspace,
    )

    cb = demo_case_base()
    db = build_transaction_db(cb)
    fcis = renumber([f for f in mine_closed_frequent(db, "0.3") if f.items])
    lattice_links(fcis)
    workspace = Workspace.from_mining(cb, Fraction(3, 10), fcis, n_transactions=len(db))
    directory = tmp_path / "workspace"
    save_workspace(workspace, directory)
    return directory
