"""Command-line front end: mine a workspace, solve targets, export data,
serve the review UI.

Standard output carries machine-readable payloads only (manifest JSON for
mine, result JSON for solve, FIMI or JSON lines for export); human-facing
summaries and error messages go to standard error. Exit codes: 1 for input
that fails to parse or read, 2 for a violated mining precondition, 3 for an
unsolvable target, 4 for workspace store conflicts.
"""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from .exceptions import (
    AdaptMineError,
    CaseBaseFormatError,
    MiningGuardError,
    NoSolutionError,
    OntologyError,
    StoreError,
    UnknownPropertyError,
)
from .mining import as_sigma, lattice_links, mine_closed_frequent, renumber
from .model import load_case_base
from .rules import TargetProblem, solve_json_payload
from .store import MANIFEST_FILE, Workspace, load_workspace, save_workspace
from .transactions import build_transaction_db, export_fimi

EXIT_PARSE = 1
EXIT_GUARD = 2
EXIT_NO_SOLUTION = 3
EXIT_STORE = 4


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


def _mapped_errors(func):
    """Translate package errors into the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except MiningGuardError as exc:
            _fail(EXIT_GUARD, f"error: {exc}")
        except (CaseBaseFormatError, OntologyError, UnknownPropertyError) as exc:
            _fail(EXIT_PARSE, f"error: {exc}")
        except StoreError as exc:
            _fail(EXIT_STORE, f"error: {exc}")
        except (OSError, json.JSONDecodeError) as exc:
            _fail(EXIT_PARSE, f"error: {exc}")
        except AdaptMineError as exc:
            _fail(EXIT_PARSE, f"error: {exc}")

    return wrapper


class SigmaParam(click.ParamType):
    """Support threshold as an exact rational: "0.05", "1/20", "0", "1"."""

    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return as_sigma(value)
        except MiningGuardError as exc:
            self.fail(str(exc), param, ctx)


SIGMA = SigmaParam()


@click.group()
def main():
    """Mine adaptation rules from a case base, review them, solve targets."""


@main.command()
@click.argument("casebase", type=click.Path(path_type=Path))
@click.argument("out", type=click.Path(path_type=Path))
@click.option("--sigma", type=SIGMA, required=True, help="Support threshold (exact rational).")
@click.option("--workers", type=int, default=1, show_default=True, help="Worker threads.")
@click.option(
    "--hide-empty-fci/--show-empty-fci",
    default=True,
    show_default=True,
    help="Drop the empty itemset from the results.",
)
@click.option(
    "--pair-filter",
    type=float,
    default=None,
    help="Keep only case pairs with problem Jaccard similarity at or above this.",
)
@click.option("--force", is_flag=True, help="Overwrite an existing workspace directory.")
@_mapped_errors
def mine(casebase: Path, out: Path, sigma: Fraction, workers: int, hide_empty_fci: bool,
         pair_filter: float, force: bool):
    """Difference all case pairs, mine closed frequent itemsets, derive
    candidate rules, and save a workspace directory."""
    cb = load_case_base(casebase)
    db = build_transaction_db(cb, pair_filter=pair_filter, workers=workers)
    fcis = mine_closed_frequent(db, sigma, workers=workers)
    if hide_empty_fci:
        fcis = renumber([f for f in fcis if f.items])
    lattice_links(fcis)
    workspace = Workspace.from_mining(
        cb, sigma, fcis, n_transactions=len(db), pair_filter=pair_filter
    )
    save_workspace(workspace, out, force=force)
    n = len(cb.cases)
    click.echo(
        f"mined {out}: {n} cases, {len(db)} transactions (n(n-1)={n * (n - 1)}"
        f"{', filtered' if pair_filter is not None else ''}), "
        f"{len(fcis)} closed frequent itemsets, {len(workspace.rules)} candidate rules",
        err=True,
    )
    sys.stdout.write((out / MANIFEST_FILE).read_text(encoding="utf-8"))


@main.command()
@click.argument("workspace", type=click.Path(path_type=Path))
@click.argument("target", type=click.Path(path_type=Path))
@click.option("--k", type=int, default=5, show_default=True, help="Retrieval depth.")
@_mapped_errors
def solve(workspace: Path, target: Path, k: int):
    """Solve a target problem with the workspace's accepted rules.

    TARGET is a JSON file: {"problem": ["prop", ...]}.
    """
    w = load_workspace(workspace)
    doc = json.loads(Path(target).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or "problem" not in doc:
        raise CaseBaseFormatError('target file must be a JSON object with a "problem" list')
    tgt = TargetProblem(problem=frozenset(doc["problem"]))
    payload, solved = solve_json_payload(w.case_base, w.rules, tgt, k=k)
    sys.stdout.buffer.write(payload)
    if not solved:
        click.echo("no solution; diagnostics above", err=True)
        sys.exit(EXIT_NO_SOLUTION)


@main.command()
@click.argument("workspace", type=click.Path(path_type=Path))
@click.option(
    "--format", "fmt", type=click.Choice(["fimi", "jsonl"]), required=True,
    help="fimi: transaction lines; jsonl: itemsets or rules.",
)
@click.option(
    "--kind", type=click.Choice(["fcis", "rules"]), default="fcis", show_default=True,
    help="What jsonl export writes.",
)
@click.option(
    "--sidecar", type=click.Path(path_type=Path), default=None,
    help="Where fimi export writes the code-to-item dictionary (JSON).",
)
@_mapped_errors
def export(workspace: Path, fmt: str, kind: str, sidecar: Path):
    """Write workspace data to standard output."""
    w = load_workspace(workspace)
    if fmt == "fimi":
        db = build_transaction_db(w.case_base, pair_filter=w.pair_filter)
        entries = export_fimi(db, sys.stdout)
        if sidecar is not None:
            sidecar.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")
        return
    if kind == "fcis":
        records = [f.to_json_dict(w.n_transactions) for f in w.fcis]
    else:
        records = [w.rules[rid].to_json_dict() for rid in sorted(w.rules)]
    for record in records:
        sys.stdout.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")


@main.command()
@click.argument("workspace", type=click.Path(path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=7474, show_default=True)
@click.option(
    "--ui-dir", type=click.Path(path_type=Path), default=None,
    help="Static frontend directory (defaults to the bundled build if present).",
)
@_mapped_errors
def serve(workspace: Path, host: str, port: int, ui_dir: Path):
    """Serve the review API and analyst UI for a workspace."""
    import uvicorn

    from .service import create_app

    app = create_app(workspace, ui_dir=ui_dir)
    click.echo(f"serving workspace {workspace} on http://{host}:{port}", err=True)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
