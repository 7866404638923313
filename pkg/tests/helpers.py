"""Shared construction helpers for the test suite."""

from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence

from adaptmine.model import Ontology
from adaptmine.transactions import (
    Item,
    Transaction,
    parse_item,
    transaction_db_from_transactions,
)


def items(*texts: str) -> frozenset[Item]:
    return frozenset(parse_item(t) for t in texts)


def db_of(*rows: Sequence[str], pairs: Optional[list] = None):
    """A transaction database from canonical item strings, one row per
    transaction."""
    transactions = []
    for i, row in enumerate(rows):
        pair = pairs[i] if pairs is not None else None
        transactions.append(Transaction(pair=pair, items=items(*row)))
    return transaction_db_from_transactions(transactions)


def random_dag_ontology(rng: random.Random, n_props: int, n_edges: int) -> Ontology:
    """Random acyclic entailments: edges only point from lower to higher
    property index."""
    props = [f"q{i:02d}" for i in range(n_props)]
    edges = set()
    attempts = 0
    while len(edges) < n_edges and attempts < n_edges * 10:
        attempts += 1
        if n_props < 2:
            break
        i, j = sorted(rng.sample(range(n_props), 2))
        edges.add((props[i], props[j]))
    return Ontology(properties=props, entails=sorted(edges))


def random_item_pool(n_items: int) -> list[Item]:
    """A deterministic mixed pool of problem and solution items."""
    pool = []
    for i in range(n_items):
        facet = "pb" if i % 2 == 0 else "sol"
        polarity = "-=+"[i % 3]
        pool.append(parse_item(f"{facet}:{polarity}:x{i:02d}"))
    return pool


def random_db(rng: random.Random, max_items: int = 12, max_rows: int = 30):
    """A random transaction database for oracle comparison."""
    n_items = rng.randint(2, max_items)
    n_rows = rng.randint(1, max_rows)
    pool = random_item_pool(n_items)
    rows = []
    for _ in range(n_rows):
        density = rng.uniform(0.2, 0.8)
        chosen = frozenset(it for it in pool if rng.random() < density)
        rows.append(Transaction(pair=None, items=chosen))
    return transaction_db_from_transactions(rows)


def fci_key_set(fcis: Iterable) -> set:
    """Identity of a mining result: itemsets with their counts."""
    return {(f.item_set, f.count) for f in fcis}
