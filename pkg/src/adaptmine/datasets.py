"""Bundled case bases: a small hand-built demo and a seeded random generator.

The demo base plants one adaptation pattern across two groups of cases, so
mining it at threshold 0.3 surfaces the pattern as a closed itemset and the
derived rule solves a fresh target. The random generator exists for tests
and benchmarks; same seed, same base.
"""

from __future__ import annotations

import random
from typing import Optional

from .model import Case, CaseBase, Ontology
from .transactions import Facet, Item, Polarity
from .rules import TargetProblem


def demo_ontology() -> Ontology:
    return Ontology(
        properties=["a", "b", "c", "d", "e", "A", "B", "C"],
        entails=[],
    )


def demo_case_base() -> CaseBase:
    """Six cases in two families of three.

    The first family pairs problem property "a" (and never "d") with
    solutions {A, B}; the second has "d" (and never "a") with {B, C}.
    Differencing any first-family case against any second-family case
    always shows: "a" lost, "c" kept, "d" gained, solution A swapped for C
    around a kept B. That pattern covers 9 of the 30 ordered pairs.
    """
    onto = demo_ontology()
    cases = [
        Case(id="case01", problem={"a", "b", "c"}, solution={"A", "B"}),
        Case(id="case02", problem={"a", "c", "e"}, solution={"A", "B"}),
        Case(id="case03", problem={"a", "c"}, solution={"A", "B"}),
        Case(id="case04", problem={"b", "c", "d"}, solution={"B", "C"}),
        Case(id="case05", problem={"c", "d", "e"}, solution={"B", "C"}),
        Case(id="case06", problem={"b", "c", "d", "e"}, solution={"B", "C"}),
    ]
    return CaseBase(cases=cases, ontology=onto)


def demo_pattern_items() -> frozenset[Item]:
    """The planted pattern as marked items."""
    return frozenset(
        {
            Item("a", Polarity.MINUS, Facet.PB),
            Item("c", Polarity.EQUAL, Facet.PB),
            Item("d", Polarity.PLUS, Facet.PB),
            Item("A", Polarity.MINUS, Facet.SOL),
            Item("B", Polarity.EQUAL, Facet.SOL),
            Item("C", Polarity.PLUS, Facet.SOL),
        }
    )


def demo_target() -> TargetProblem:
    """A target the demo rule solves via the {a, c} case: expect {B, C}."""
    return TargetProblem(problem={"c", "d"})


def random_ontology(
    rng: random.Random,
    n_problem_props: int = 10,
    n_solution_props: int = 8,
    n_edges: int = 3,
) -> Ontology:
    """Two property pools with a few entailment edges inside each pool.

    Edges always point from a lower-numbered property to a higher one, so
    the graph is acyclic by construction.
    """
    pb_props = [f"p{i:02d}" for i in range(n_problem_props)]
    sol_props = [f"s{i:02d}" for i in range(n_solution_props)]
    edges = set()
    for pool in (pb_props, sol_props):
        if len(pool) < 2:
            continue
        for _ in range(n_edges):
            i, j = sorted(rng.sample(range(len(pool)), 2))
            edges.add((pool[i], pool[j]))
    return Ontology(properties=pb_props + sol_props, entails=sorted(edges))


def random_case_base(
    n_cases: int,
    seed: int,
    *,
    n_problem_props: int = 10,
    n_solution_props: int = 8,
    n_edges: int = 3,
    density: float = 0.5,
    ontology: Optional[Ontology] = None,
) -> CaseBase:
    """A reproducible random case base; solutions are never empty."""
    rng = random.Random(seed)
    onto = ontology or random_ontology(rng, n_problem_props, n_solution_props, n_edges)
    pb_props = sorted(p for p in onto.properties if p.startswith("p"))
    sol_props = sorted(p for p in onto.properties if p.startswith("s"))
    if not sol_props:
        raise ValueError("need at least one solution property")
    cases = []
    for i in range(n_cases):
        problem = {p for p in pb_props if rng.random() < density}
        solution = {p for p in sol_props if rng.random() < density}
        if not solution:
            solution = {rng.choice(sol_props)}
        cases.append(Case(id=f"case{i:04d}", problem=problem, solution=solution))
    return CaseBase(cases=cases, ontology=onto)
