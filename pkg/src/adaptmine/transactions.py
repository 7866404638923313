"""Differencing ordered case pairs into transactions of marked items.

For an ordered pair of cases, each property of either closed set becomes one
item carrying a polarity marker: "-" for properties only the first case has,
"=" for shared properties, "+" for properties only the second case has.
Problem-side and solution-side differences are kept apart by a facet tag, so
one pair yields a single flat item set that a frequent-itemset miner can
consume directly.

A :class:`TransactionDb` materializes every ordered pair of distinct cases,
in (i, j) index order, together with a dense integer code for each distinct
item. Databases that outgrow the in-memory item cap spill to a FIMI text
file and are then served from disk.
"""

from __future__ import annotations

import io
import mmap
import os
import tempfile
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional, Sequence, Union

from .exceptions import CaseBaseFormatError, TooFewCasesError
from .model import Case, CaseBase, Ontology

DEFAULT_ITEM_CAP = 10_000_000


class Polarity(Enum):
    """Which side(s) of the ordered pair a property belongs to."""

    MINUS = "-"
    EQUAL = "="
    PLUS = "+"


class Facet(Enum):
    """Whether an item talks about the problem or the solution side."""

    PB = "pb"
    SOL = "sol"


_POLARITY_INDEX = {Polarity.MINUS: 0, Polarity.EQUAL: 1, Polarity.PLUS: 2}
_POLARITY_BY_INDEX = (Polarity.MINUS, Polarity.EQUAL, Polarity.PLUS)
_FACET_INDEX = {Facet.PB: 0, Facet.SOL: 1}
_FACET_BY_INDEX = (Facet.PB, Facet.SOL)


@dataclass(frozen=True, slots=True)
class Item:
    """One marked property, e.g. property "a" leaving the problem side."""

    prop: str
    polarity: Polarity
    facet: Facet

    def sort_key(self) -> tuple[int, str, int]:
        # Canonical order: facet, then property name, then polarity.
        return (_FACET_INDEX[self.facet], self.prop, _POLARITY_INDEX[self.polarity])

    def canonical(self) -> str:
        return f"{self.facet.value}:{self.polarity.value}:{self.prop}"

    def __repr__(self) -> str:
        return f"Item({self.canonical()!r})"


def parse_item(text: str) -> Item:
    """Inverse of :meth:`Item.canonical` (``"pb:-:a"`` style strings)."""
    parts = text.split(":", 2)
    if len(parts) != 3:
        raise CaseBaseFormatError(f"malformed item string: {text!r}")
    facet_s, pol_s, prop = parts
    try:
        facet = Facet(facet_s)
        polarity = Polarity(pol_s)
    except ValueError:
        raise CaseBaseFormatError(f"malformed item string: {text!r}") from None
    if not prop:
        raise CaseBaseFormatError(f"malformed item string: {text!r}")
    return Item(prop=prop, polarity=polarity, facet=facet)


def sort_items(items: Iterable[Item]) -> tuple[Item, ...]:
    return tuple(sorted(items, key=Item.sort_key))


@dataclass(frozen=True)
class Transaction:
    """The marked-item encoding of one ordered pair of cases.

    ``pair`` is ``(first_case_id, second_case_id)``; it is ``None`` for rows
    imported from a bare FIMI file, which carries no pair identity.
    """

    pair: Optional[tuple[str, str]]
    items: frozenset[Item]

    def __post_init__(self):
        if self.pair is not None and self.pair[0] == self.pair[1]:
            raise CaseBaseFormatError(f"transaction pair ids must differ, got {self.pair!r}")
        object.__setattr__(self, "items", frozenset(self.items))


def delta(first: Iterable[str], second: Iterable[str], facet: Facet) -> frozenset[Item]:
    """Partition two closed property sets into -, = and + items for a facet.

    Every property of either set appears exactly once; nothing else does.
    """
    a, b = frozenset(first), frozenset(second)
    items = []
    for p in a - b:
        items.append(Item(p, Polarity.MINUS, facet))
    for p in a & b:
        items.append(Item(p, Polarity.EQUAL, facet))
    for p in b - a:
        items.append(Item(p, Polarity.PLUS, facet))
    return frozenset(items)


def make_transaction(c1: Case, c2: Case, onto: Ontology) -> Transaction:
    """Difference two cases: problem deltas plus solution deltas, one item set."""
    if c1.id == c2.id:
        raise CaseBaseFormatError(f"cannot difference a case against itself: {c1.id!r}")
    items = delta(onto.closure(c1.problem), onto.closure(c2.problem), Facet.PB) | delta(
        onto.closure(c1.solution), onto.closure(c2.solution), Facet.SOL
    )
    return Transaction(pair=(c1.id, c2.id), items=items)


class ItemDictionary:
    """Bijection between items and dense integer codes, in assignment order."""

    __slots__ = ("_items", "_codes")

    def __init__(self, items: Iterable[Item] = ()):
        self._items: list[Item] = []
        self._codes: dict[Item, int] = {}
        for item in items:
            self.add(item)

    def add(self, item: Item) -> int:
        code = self._codes.get(item)
        if code is None:
            code = len(self._items)
            self._items.append(item)
            self._codes[item] = code
        return code

    def code(self, item: Item) -> int:
        return self._codes[item]

    def get_code(self, item: Item) -> Optional[int]:
        return self._codes.get(item)

    def item(self, code: int) -> Item:
        return self._items[code]

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Item]:
        return iter(self._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ItemDictionary):
            return NotImplemented
        return self._items == other._items

    def to_sidecar(self) -> list[dict]:
        return [{"code": i, "item": item.canonical()} for i, item in enumerate(self._items)]

    @classmethod
    def from_sidecar(cls, entries: Iterable[dict]) -> "ItemDictionary":
        pairs = sorted((e["code"], e["item"]) for e in entries)
        dictionary = cls()
        for expected, (code, text) in enumerate(pairs):
            if code != expected:
                raise CaseBaseFormatError(f"sidecar codes are not dense: missing {expected}")
            dictionary.add(parse_item(text))
        return dictionary


class _MemoryRows:
    """Row storage as one flat code array plus offsets."""

    __slots__ = ("codes", "offsets")

    def __init__(self, codes: array, offsets: array):
        self.codes = codes
        self.offsets = offsets

    def __len__(self) -> int:
        return len(self.offsets) - 1

    @property
    def total_items(self) -> int:
        return len(self.codes)

    def row(self, i: int) -> list[int]:
        return self.codes[self.offsets[i]:self.offsets[i + 1]].tolist()

    def iter_rows(self) -> Iterator[list[int]]:
        codes, offsets = self.codes, self.offsets
        for i in range(len(self)):
            yield codes[offsets[i]:offsets[i + 1]].tolist()


class _FimiFileRows:
    """Row storage backed by a FIMI text file, one line per transaction."""

    __slots__ = ("path", "line_offsets", "_total_items", "_mm")

    def __init__(self, path: Path, line_offsets: array, total_items: int):
        self.path = path
        self.line_offsets = line_offsets  # byte offset of each line start, plus EOF
        self._total_items = total_items
        self._mm = None

    def __len__(self) -> int:
        return len(self.line_offsets) - 1

    @property
    def total_items(self) -> int:
        return self._total_items

    def _map(self):
        if self._mm is None:
            with open(self.path, "rb") as fh:
                self._mm = mmap.mmap(fh.fileno(), 0, access=mmap.ACCESS_READ)
        return self._mm

    def row(self, i: int) -> list[int]:
        mm = self._map()
        chunk = mm[self.line_offsets[i]:self.line_offsets[i + 1]]
        text = chunk.rstrip(b"\n")
        return [int(tok) for tok in text.split()] if text else []

    def iter_rows(self) -> Iterator[list[int]]:
        with open(self.path, "r", encoding="ascii") as fh:
            for line in fh:
                stripped = line.strip()
                yield [int(tok) for tok in stripped.split()] if stripped else []


class _RowSink:
    """Accumulates rows in memory, spilling everything to a FIMI file once
    the total item count crosses the cap."""

    def __init__(self, item_cap: Optional[int], spill_path: Optional[Path]):
        self.item_cap = item_cap
        self.spill_path = spill_path
        self.codes = array("i")
        self.offsets = array("q", [0])
        self.total = 0
        self._fh: Optional[IO[str]] = None
        self._line_offsets: Optional[array] = None
        self._byte_pos = 0

    def _start_spill(self):
        if self.spill_path is None:
            fd, name = tempfile.mkstemp(prefix="adaptmine-", suffix=".fimi")
            os.close(fd)
            self.spill_path = Path(name)
        self._fh = open(self.spill_path, "w", encoding="ascii")
        self._line_offsets = array("q", [0])
        # replay what is already in memory
        for i in range(len(self.offsets) - 1):
            self._write_line(self.codes[self.offsets[i]:self.offsets[i + 1]].tolist())
        self.codes = array("i")
        self.offsets = array("q", [0])

    def _write_line(self, row: Sequence[int]):
        line = " ".join(map(str, row)) + "\n"
        self._fh.write(line)
        self._byte_pos += len(line)
        self._line_offsets.append(self._byte_pos)

    def append(self, row: Sequence[int]):
        self.total += len(row)
        if self._fh is not None:
            self._write_line(row)
            return
        self.codes.extend(row)
        self.offsets.append(len(self.codes))
        if self.item_cap is not None and self.total > self.item_cap:
            self._start_spill()

    def finish(self):
        if self._fh is not None:
            self._fh.close()
            return _FimiFileRows(self.spill_path, self._line_offsets, self.total)
        return _MemoryRows(self.codes, self.offsets)


class TransactionDb:
    """All ordered-pair transactions of a case base, in (i, j) order, with a
    dense item dictionary assigned by first occurrence."""

    def __init__(self, rows, pairs: Optional[list[tuple[str, str]]], dictionary: ItemDictionary):
        self._rows = rows
        self.pairs = pairs
        self.dictionary = dictionary

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def total_items(self) -> int:
        return self._rows.total_items

    @property
    def spilled(self) -> bool:
        return isinstance(self._rows, _FimiFileRows)

    def row_codes(self, i: int) -> list[int]:
        return self._rows.row(i)

    def iter_row_codes(self) -> Iterator[list[int]]:
        return self._rows.iter_rows()

    def pair(self, i: int) -> Optional[tuple[str, str]]:
        return self.pairs[i] if self.pairs is not None else None

    def transaction(self, i: int) -> Transaction:
        items = frozenset(self.dictionary.item(c) for c in self._rows.row(i))
        return Transaction(pair=self.pair(i), items=items)

    def __iter__(self) -> Iterator[Transaction]:
        for i in range(len(self)):
            yield self.transaction(i)


def _closed_masks(cb: CaseBase, prop_bit: dict[str, int]) -> tuple[list[int], list[int]]:
    pb_masks, sol_masks = [], []
    onto = cb.ontology
    for case in cb.cases:
        m = 0
        for p in onto.closure(case.problem):
            m |= 1 << prop_bit[p]
        pb_masks.append(m)
        m = 0
        for p in onto.closure(case.solution):
            m |= 1 << prop_bit[p]
        sol_masks.append(m)
    return pb_masks, sol_masks


def _pair_raw_keys(pm1: int, pm2: int, sm1: int, sm2: int) -> list[int]:
    """Raw item keys for one ordered pair.

    Key encoding: ``bit_index * 6 + facet * 3 + polarity`` with facet pb=0,
    sol=1 and polarity -=0, ==1, +=2. The traversal order (facet, polarity,
    ascending property bit) fixes first-occurrence dictionary assignment.
    """
    row = []
    append = row.append
    for facet_base, m1, m2 in ((0, pm1, pm2), (3, sm1, sm2)):
        inter = m1 & m2
        for pol_off, mask in ((0, m1 & ~inter), (1, inter), (2, m2 & ~inter)):
            base = facet_base + pol_off
            while mask:
                low = mask & -mask
                mask ^= low
                append((low.bit_length() - 1) * 6 + base)
    return row


def _item_from_raw(raw: int, prop_order: list[str]) -> Item:
    prop = prop_order[raw // 6]
    rem = raw % 6
    return Item(prop=prop, polarity=_POLARITY_BY_INDEX[rem % 3], facet=_FACET_BY_INDEX[rem // 3])


def _jaccard_ge(m1: int, m2: int, threshold: float) -> bool:
    union = (m1 | m2).bit_count()
    if union == 0:
        return True  # two empty sets count as identical
    return (m1 & m2).bit_count() >= threshold * union


def build_transaction_db(
    cb: CaseBase,
    *,
    pair_filter: Optional[float] = None,
    workers: int = 1,
    item_cap: Optional[int] = DEFAULT_ITEM_CAP,
    spill_path: Optional[Union[str, Path]] = None,
) -> TransactionDb:
    """Difference every ordered pair of distinct cases into a transaction.

    Pairs are enumerated in (i, j) index order with i != j, giving n(n-1)
    transactions; ``pair_filter`` optionally drops pairs whose closed problem
    sets have Jaccard similarity below the threshold. Worker threads split
    the pair enumeration into disjoint first-index ranges; their chunks are
    consumed in range order, so the result is identical for any worker count.
    """
    n = len(cb.cases)
    if n < 2:
        raise TooFewCasesError(f"need at least 2 cases to form pairs, got {n}")

    prop_order = sorted(cb.ontology.properties)
    prop_bit = {p: i for i, p in enumerate(prop_order)}
    pb_masks, sol_masks = _closed_masks(cb, prop_bit)
    ids = [c.id for c in cb.cases]

    def block(i_start: int, i_stop: int) -> list[tuple[int, int, list[int]]]:
        out = []
        for i in range(i_start, i_stop):
            pm1, sm1 = pb_masks[i], sol_masks[i]
            for j in range(n):
                if i == j:
                    continue
                if pair_filter is not None and not _jaccard_ge(pm1, pb_masks[j], pair_filter):
                    continue
                out.append((i, j, _pair_raw_keys(pm1, pb_masks[j], sm1, sol_masks[j])))
        return out

    if workers <= 1:
        chunks = iter([block(0, n)])
    else:
        step = max(1, (n + workers - 1) // workers)
        ranges = [(s, min(s + step, n)) for s in range(0, n, step)]
        pool = ThreadPoolExecutor(max_workers=workers)
        chunks = pool.map(lambda r: block(*r), ranges)

    code_of = [-1] * (len(prop_order) * 6)
    dictionary = ItemDictionary()
    sink = _RowSink(item_cap, Path(spill_path) if spill_path else None)
    pairs: list[tuple[str, str]] = []
    for chunk in chunks:
        for i, j, raw_row in chunk:
            row = []
            for raw in raw_row:
                code = code_of[raw]
                if code < 0:
                    code = code_of[raw] = dictionary.add(_item_from_raw(raw, prop_order))
                row.append(code)
            row.sort()
            sink.append(row)
            pairs.append((ids[i], ids[j]))
    if workers > 1:
        pool.shutdown()

    return TransactionDb(sink.finish(), pairs, dictionary)


def transaction_db_from_transactions(transactions: Iterable[Transaction]) -> TransactionDb:
    """Build a database from explicit transactions (mostly for small inputs
    and tests); dictionary codes follow first occurrence in canonical item
    order within each transaction."""
    dictionary = ItemDictionary()
    codes = array("i")
    offsets = array("q", [0])
    pairs: list[Optional[tuple[str, str]]] = []
    for t in transactions:
        row = sorted(dictionary.add(item) for item in sort_items(t.items))
        codes.extend(row)
        offsets.append(len(codes))
        pairs.append(t.pair)
    return TransactionDb(_MemoryRows(codes, offsets), pairs, dictionary)


def export_fimi(db: TransactionDb, sink: Union[IO[str], IO[bytes]]) -> list[dict]:
    """Write one line per transaction (ascending codes, newline-terminated)
    and return the code-to-item sidecar."""
    if len(db) == 0:
        raise CaseBaseFormatError("refusing to export an empty transaction database")
    text_sink = sink if isinstance(sink, io.TextIOBase) else io.TextIOWrapper(sink, encoding="ascii")
    for row in db.iter_row_codes():
        text_sink.write(" ".join(map(str, row)))
        text_sink.write("\n")
    text_sink.flush()
    if text_sink is not sink:
        text_sink.detach()
    return db.dictionary.to_sidecar()


def read_fimi(source: Union[str, Path, IO[str]], sidecar: Iterable[dict]) -> TransactionDb:
    """Parse a FIMI file plus its dictionary sidecar back into a database.

    Pair identities are not part of the FIMI format, so transactions come
    back with ``pair=None``.
    """
    dictionary = ItemDictionary.from_sidecar(sidecar)
    if isinstance(source, (str, Path)):
        stream = open(source, "r", encoding="ascii")
        close = True
    else:
        stream, close = source, False
    codes = array("i")
    offsets = array("q", [0])
    try:
        for line in stream:
            stripped = line.strip()
            row = sorted(int(tok) for tok in stripped.split()) if stripped else []
            for c in row:
                if not 0 <= c < len(dictionary):
                    raise CaseBaseFormatError(f"FIMI code {c} outside dictionary range")
            codes.extend(row)
            offsets.append(len(codes))
    finally:
        if close:
            stream.close()
    return TransactionDb(_MemoryRows(codes, offsets), None, dictionary)
