"""Mining executable adaptation rules from the variations between solved
cases, reviewing them with an audit trail, and solving new problems with
the accepted rules.

The pipeline: difference every ordered pair of cases into a transaction of
marked items, mine the closed frequent itemsets, read the solution-bearing
ones as candidate adaptation rules, have an analyst accept or correct them,
then solve new targets by retrieve-and-adapt.
"""

from .exceptions import (
    AdaptMineError,
    CaseBaseFormatError,
    EmptyDatabaseError,
    EntailmentCycleError,
    IllegalTransitionError,
    IntegrityError,
    MiningGuardError,
    NoSolutionError,
    OntologyError,
    RuleInterpretationError,
    StaleSequenceError,
    StaleWorkspaceError,
    StoreError,
    TooFewCasesError,
    UniverseTooLargeError,
    UnknownPropertyError,
    WorkspaceLockError,
    ZeroSupportError,
)
from .model import (
    Case,
    CaseBase,
    Ontology,
    closure,
    format_case,
    load_case_base,
    load_ontology,
    save_case_base,
)
from .transactions import (
    Facet,
    Item,
    ItemDictionary,
    Polarity,
    Transaction,
    TransactionDb,
    build_transaction_db,
    delta,
    export_fimi,
    make_transaction,
    parse_item,
    read_fimi,
    sort_items,
)
from .mining import (
    Fci,
    as_sigma,
    brute_force_fcis,
    is_closed,
    lattice_links,
    mine_closed_frequent,
    min_count_for,
    renumber,
    support,
)
from .rules import (
    AdaptationResult,
    AdaptationRule,
    CaseDiagnostic,
    NoSolutionReport,
    TargetProblem,
    TraceStep,
    apply_rule,
    fci_to_rule_candidate,
    generate_candidates,
    jaccard,
    match_rule,
    retrieve,
    solve_json_payload,
    solve_target,
    with_status,
)
from .store import (
    ReviewEvent,
    Workspace,
    load_workspace,
    replay_events,
    save_workspace,
)
from .datasets import (
    demo_case_base,
    demo_ontology,
    demo_pattern_items,
    demo_target,
    random_case_base,
    random_ontology,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
