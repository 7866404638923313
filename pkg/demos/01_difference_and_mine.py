# Differencing case pairs and mining the closed patterns
#
# This walkthrough starts from the small built-in case base, differences one
# pair of cases by hand, then builds the full pairwise database and mines it.
# Run it top to bottom:
#
#     python3 demos/01_difference_and_mine.py

from adaptmine import (
    build_transaction_db,
    demo_case_base,
    demo_pattern_items,
    make_transaction,
    mine_closed_frequent,
    sort_items,
)

# The demo base holds six cases over problem properties a..e and solution
# properties A..C. Three cases share the solution {A,B}, three share {B,C}.

cb = demo_case_base()
print("The case base:")
for case in cb.cases:
    print(f"  {case.id}: ({{{','.join(sorted(case.problem))}}}, "
          f"{{{','.join(sorted(case.solution))}}})")

# Differencing an ordered pair marks every property by how it changes from
# the first case to the second: "-" it disappears, "=" it stays, "+" it
# appears. Problem and solution sides are marked separately.

first = cb.case("case01")
second = cb.case("case04")
transaction = make_transaction(first, second, cb.ontology)
print("\nDifference of", first.id, "against", second.id + ":")
print(" ", " ".join(i.canonical() for i in sort_items(transaction.items)))

# The full database differences every ordered pair, so six cases give
# 6*5 = 30 transactions.

db = build_transaction_db(cb)
print("\nDatabase:", len(db), "transactions over", len(db.dictionary), "distinct items")

# Mining keeps the closed frequent itemsets: the patterns whose supporting
# transactions pin them exactly. At a 30 percent threshold the planted
# adaptation pattern survives with 9 of 30 supporting pairs.

fcis = [f for f in mine_closed_frequent(db, "0.3") if f.items]
print("\nClosed itemsets at sigma = 0.3:")
for f in fcis:
    marker = "  <-- the planted pattern" if f.item_set == demo_pattern_items() else ""
    body = " ".join(i.canonical() for i in f.items)
    print(f"  [{f.id}] {body}   ({f.count}/{len(db)}){marker}")
