# Reviewing candidate rules and solving a new problem
#
# Mined itemsets become candidate adaptation rules; an analyst accepts the
# good ones with an explanation, and the solver then reuses them on fresh
# problems. Everything here persists through a workspace directory, the same
# layout the command line and the HTTP service use.
#
#     python3 demos/02_review_and_solve.py

import tempfile
from fractions import Fraction
from pathlib import Path

from adaptmine import (
    NoSolutionError,
    TargetProblem,
    Workspace,
    build_transaction_db,
    demo_case_base,
    demo_pattern_items,
    lattice_links,
    load_workspace,
    mine_closed_frequent,
    renumber,
    save_workspace,
    solve_target,
)

workdir = Path(tempfile.mkdtemp(prefix="adaptmine-demo-")) / "workspace"

# Mine the demo base and persist the workspace: case base, itemsets,
# candidate rule table, and an (empty) review log.

cb = demo_case_base()
db = build_transaction_db(cb)
fcis = renumber([f for f in mine_closed_frequent(db, "0.3") if f.items])
lattice_links(fcis)
w = Workspace.from_mining(cb, Fraction(3, 10), fcis, n_transactions=len(db))
save_workspace(w, workdir)
print("Workspace saved to", workdir)
print("Candidate rules:", sorted(w.rules))

# Find the rule read off the planted pattern. Its conditions say: the
# problem lost a, kept c, gained d; and when that happens, drop A from the
# solution, keep B, add C.

w = load_workspace(workdir)
fci_id = next(f.id for f in w.fcis if f.item_set == demo_pattern_items())
rule_id = w.rule_id_for_fci(fci_id)
rule = w.rules[rule_id]
print("\nThe planted rule, as a candidate:")
print("  conditions:", sorted(i.canonical() for i in rule.pb_conditions))
print("  keep:", sorted(rule.sol_keep), " remove:", sorted(rule.sol_remove),
      " add:", sorted(rule.sol_add))

# Accepting is an audited event: it needs an explanation, lands in the
# append-only log, and survives a save/load round trip.

w.record_event(w.make_event(
    rule_id, "accepted", "demo-analyst",
    explanation="when a gives way to d, replace treatment A with C",
))
save_workspace(w, workdir)
w = load_workspace(workdir)
print("\nRule", rule_id, "is now", w.rules[rule_id].status)
print("Review log:", [(e.sequence, e.action) for e in w.events])

# Solve target {c,d}. Retrieval ranks cases by problem overlap; the best
# match with an applicable rule is case03 = ({a,c},{A,B}), and the rule
# rewrites its solution {A,B} into {B,C}.

accepted = [r for r in w.rules.values() if r.status == "accepted"]
result = solve_target(cb, accepted, TargetProblem(frozenset({"c", "d"})))
print("\nSolved {c,d}:")
print("  reused case:", result.used_case, " similarity:", result.similarity)
print("  solution:", sorted(result.solution))
for step in result.trace:
    print("  applied rule", step.rule_id, "removed", sorted(step.removed),
          "added", sorted(step.added))

# Without any accepted rule the same target has no answer, and the error
# carries a diagnosis per retrieved case: which conditions were missed by
# the nearest rule.

try:
    solve_target(cb, [], TargetProblem(frozenset({"c", "d"})))
except NoSolutionError as err:
    print("\nWith no accepted rules the solver reports, per nearby case:")
    for diag in err.report.diagnostics:
        print("  case", diag.case_id, "similarity", diag.similarity,
              "nearest rule", diag.nearest_rule)
