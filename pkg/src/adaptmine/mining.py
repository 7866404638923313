"""Closed frequent itemset mining over a transaction database.

The miner explores a prefix tree of itemsets with vertical tidsets held as
Python ints, pruning with the classic four tidset-containment properties and
closing each survivor on emission. The set of closed frequent itemsets is
mathematically determined by the database and the support threshold, so the
output is identical for any worker count; results are numbered canonically
(descending support, then item order).

``brute_force_fcis`` is a direct-from-definition oracle for small inputs;
``support`` and ``is_closed`` are the definitional checks themselves.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Union

from .exceptions import (
    EmptyDatabaseError,
    MiningGuardError,
    UniverseTooLargeError,
    ZeroSupportError,
)
from .transactions import Item, TransactionDb, sort_items

BRUTE_FORCE_MAX_ITEMS = 20

SigmaLike = Union[Fraction, int, float, str]


def as_sigma(value: SigmaLike) -> Fraction:
    """Normalize a support threshold to an exact fraction in [0, 1].

    Floats go through their shortest decimal repr, so 0.1 means exactly
    1/10 rather than the nearest binary float.
    """
    try:
        if isinstance(value, float):
            sigma = Fraction(str(value))
        else:
            sigma = Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MiningGuardError(f"not a support threshold: {value!r}") from exc
    if not 0 <= sigma <= 1:
        raise MiningGuardError(f"support threshold must be within [0, 1], got {sigma}")
    return sigma


def min_count_for(sigma: SigmaLike, n_transactions: int) -> int:
    """Smallest absolute count that meets the threshold; never below 1."""
    return max(1, math.ceil(as_sigma(sigma) * n_transactions))


@dataclass
class Fci:
    """One closed frequent itemset, with its place in the result numbering
    and (after linking) in the containment lattice."""

    id: int
    items: tuple[Item, ...]
    count: int
    support: Fraction
    parents: list[int] = field(default_factory=list)
    children: list[int] = field(default_factory=list)

    @property
    def item_set(self) -> frozenset[Item]:
        return frozenset(self.items)

    def to_json_dict(self, n_transactions: int) -> dict:
        return {
            "id": self.id,
            "items": [item.canonical() for item in self.items],
            "count": self.count,
            "support": f"{self.count}/{n_transactions}",
            "parents": sorted(self.parents),
            "children": sorted(self.children),
        }


def _item_codes(items: Iterable[Item], db: TransactionDb) -> Optional[list[int]]:
    codes = []
    for item in set(items):
        code = db.dictionary.get_code(item)
        if code is None:
            return None
        codes.append(code)
    return codes


def support(items: Iterable[Item], db: TransactionDb) -> Fraction:
    """Fraction of transactions containing every item, straight from the
    definition (linear scan)."""
    n = len(db)
    if n == 0:
        raise EmptyDatabaseError("support is undefined over an empty database")
    codes = _item_codes(items, db)
    if codes is None:
        return Fraction(0, 1)
    want = frozenset(codes)
    count = sum(1 for row in db.iter_row_codes() if want <= frozenset(row))
    return Fraction(count, n)


def is_closed(items: Iterable[Item], db: TransactionDb) -> bool:
    """Whether no proper superset has the same support: the itemset must
    equal the intersection of the transactions covering it."""
    n = len(db)
    if n == 0:
        raise EmptyDatabaseError("closedness is undefined over an empty database")
    codes = _item_codes(items, db)
    want = frozenset(codes) if codes is not None else None
    inter: Optional[frozenset[int]] = None
    if want is not None:
        for row in db.iter_row_codes():
            row_set = frozenset(row)
            if want <= row_set:
                inter = row_set if inter is None else inter & row_set
    if inter is None:
        raise ZeroSupportError("closedness is undefined at zero support")
    return inter == want


def _tidsets(db: TransactionDb) -> tuple[list[int], int]:
    n = len(db)
    n_items = len(db.dictionary)
    buffers = [bytearray((n + 7) // 8) for _ in range(n_items)]
    for tid, row in enumerate(db.iter_row_codes()):
        byte, bit = tid >> 3, 1 << (tid & 7)
        for code in row:
            buffers[code][byte] |= bit
    return [int.from_bytes(b, "little") for b in buffers], n


class _ClosedRegistry:
    """Already-emitted closures, bucketed by tidset hash for the subsumption
    check: a candidate whose tidset matches a stored closure that contains it
    is not a new closed set."""

    def __init__(self):
        self._buckets: dict[int, list[tuple[frozenset[int], int]]] = {}
        self.results: dict[frozenset[int], int] = {}
        self.lock = threading.Lock()

    def subsumed(self, itemset: frozenset[int], count: int, bucket: int) -> bool:
        for stored, stored_count in self._buckets.get(bucket, ()):
            if stored_count == count and itemset <= stored:
                return True
        return False

    def add(self, closure: frozenset[int], count: int, bucket: int) -> None:
        self._buckets.setdefault(bucket, []).append((closure, count))
        self.results[closure] = count


def mine_closed_frequent(
    db: TransactionDb,
    sigma: SigmaLike,
    *,
    workers: int = 1,
) -> list[Fci]:
    """All closed itemsets with support >= sigma, canonically numbered.

    Worker threads each take whole root-level subtrees; since the closed
    sets are a property of the data, not the traversal, any worker count
    produces the same list.
    """
    n = len(db)
    if n == 0:
        raise EmptyDatabaseError("cannot mine an empty transaction database")
    min_count = min_count_for(sigma, n)
    tids, _ = _tidsets(db)
    counts = [t.bit_count() for t in tids]
    frequent = [c for c in range(len(tids)) if counts[c] >= min_count]

    registry = _ClosedRegistry()
    freq_tids = [(c, tids[c]) for c in frequent]

    def emit(itemset: frozenset[int], tidset: int, count: int) -> None:
        bucket = hash(tidset)
        with registry.lock:
            if registry.subsumed(itemset, count, bucket):
                return
        # Closure over frequent items only: any item of the closure covers
        # at least these transactions, hence is itself frequent.
        closure = frozenset(c for c, t in freq_tids if t & tidset == tidset)
        with registry.lock:
            if not registry.subsumed(closure, count, bucket):
                registry.add(closure, count, bucket)

    def explore(nodes: list) -> None:
        _sweep_level(nodes, emit, min_count, explore)

    roots: list[Optional[tuple[frozenset[int], int, int]]] = [
        (frozenset([c]), tids[c], counts[c])
        for c in sorted(frequent, key=lambda c: (counts[c], c))
    ]

    if workers <= 1:
        explore(roots)
    else:
        # The root sweep must stay sequential (siblings absorb each other);
        # each completed root subtree is then explored independently.
        subtrees: list[list] = []
        _sweep_level(roots, emit, min_count, subtrees.append)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(explore, subtrees))

    if not any(counts[c] == n for c in range(len(tids))):
        # No item covers every transaction, so the empty itemset is closed
        # (and always frequent: its count is n).
        registry.results.setdefault(frozenset(), n)

    fcis = []
    for codes, count in registry.results.items():
        items = sort_items(db.dictionary.item(c) for c in codes)
        fcis.append((items, count))
    fcis.sort(key=lambda pair: (-pair[1], tuple(item.sort_key() for item in pair[0])))
    return [
        Fci(id=i, items=items, count=count, support=Fraction(count, n))
        for i, (items, count) in enumerate(fcis)
    ]


def _sweep_level(nodes, emit, min_count, descend) -> None:
    """One pass over one prefix-tree level: grow each node against its later
    siblings using the four tidset-containment cases, emit its closure, and
    hand the completed child level to ``descend``."""
    for i, node in enumerate(nodes):
        if node is None:
            continue
        itemset, tidset, count = node
        grown = itemset
        raw_kids = []
        for j in range(i + 1, len(nodes)):
            sibling = nodes[j]
            if sibling is None:
                continue
            sib_set, sib_tid, sib_count = sibling
            both = tidset & sib_tid
            if both == tidset:
                grown = grown | sib_set
                if both == sib_tid:
                    nodes[j] = None  # identical tidset: absorbed entirely
                # else: this branch absorbs the sibling's items, but the
                # sibling still covers more and keeps its own branch
            elif both == sib_tid:
                nodes[j] = None  # sibling folds into this subtree
                raw_kids.append((sib_set, both, sib_count))
            else:
                both_count = both.bit_count()
                if both_count >= min_count:
                    raw_kids.append((sib_set, both, both_count))
        emit(grown, tidset, count)
        if raw_kids:
            # Children extend the grown itemset as finished after the whole
            # sibling sweep, not the bare prefix it started from.
            kids = [(grown | sib_set, t, c) for sib_set, t, c in raw_kids]
            kids.sort(key=lambda child: (child[2], sorted(child[0])))
            descend(list(kids))


def brute_force_fcis(db: TransactionDb, sigma: SigmaLike) -> list[Fci]:
    """Oracle miner: enumerate every subset of the occurring items and keep
    the closed frequent ones. Guarded to small universes."""
    n = len(db)
    if n == 0:
        raise EmptyDatabaseError("cannot mine an empty transaction database")
    min_count = min_count_for(sigma, n)
    rows = [frozenset(row) for row in db.iter_row_codes()]
    occurring = sorted({c for row in rows for c in row})
    if len(occurring) > BRUTE_FORCE_MAX_ITEMS:
        raise UniverseTooLargeError(
            f"brute force is limited to {BRUTE_FORCE_MAX_ITEMS} distinct items, "
            f"got {len(occurring)}"
        )
    found = []
    for size in range(len(occurring) + 1):
        for combo in combinations(occurring, size):
            want = frozenset(combo)
            cover = [row for row in rows if want <= row]
            if len(cover) < min_count:
                continue
            closure = frozenset.intersection(*cover) if cover else frozenset()
            if closure == want:
                found.append((want, len(cover)))
    fcis = []
    for codes, count in found:
        items = sort_items(db.dictionary.item(c) for c in codes)
        fcis.append((items, count))
    fcis.sort(key=lambda pair: (-pair[1], tuple(item.sort_key() for item in pair[0])))
    return [
        Fci(id=i, items=items, count=count, support=Fraction(count, n))
        for i, (items, count) in enumerate(fcis)
    ]


def lattice_links(fcis: list[Fci]) -> list[Fci]:
    """Fill in immediate containment links between the itemsets, in place.

    A parent is a maximal proper subset among the collection; links are
    stored as sorted id lists on both ends.
    """
    sets = {f.id: f.item_set for f in fcis}
    by_id = {f.id: f for f in fcis}
    for f in fcis:
        f.parents = []
        f.children = []
    order = sorted(fcis, key=lambda f: (len(f.items), f.id))
    for f in order:
        fset = sets[f.id]
        subs = [g for g in order if len(sets[g.id]) < len(fset) and sets[g.id] < fset]
        subs.sort(key=lambda g: -len(sets[g.id]))
        kept: list[Fci] = []
        for g in subs:
            gset = sets[g.id]
            if not any(gset < sets[k.id] for k in kept):
                kept.append(g)
        for g in kept:
            f.parents.append(g.id)
            by_id[g.id].children.append(f.id)
    for f in fcis:
        f.parents.sort()
        f.children.sort()
    return fcis


def renumber(fcis: list[Fci]) -> list[Fci]:
    """Reassign dense ids after filtering, preserving order; any existing
    lattice links are dropped (relink afterwards)."""
    out = []
    for i, f in enumerate(fcis):
        out.append(Fci(id=i, items=f.items, count=f.count, support=f.support))
    return out
