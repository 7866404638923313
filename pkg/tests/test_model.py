"""Ontology, closure, and case-base behavior."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaptmine.exceptions import (
    CaseBaseFormatError,
    EntailmentCycleError,
    OntologyError,
    UnknownPropertyError,
)
from adaptmine.model import (
    Case,
    CaseBase,
    Ontology,
    closure,
    format_case,
    load_case_base,
    load_ontology,
    save_case_base,
)
from helpers import random_dag_ontology


class TestOntologyValidation:
    def test_accepts_plain_properties(self):
        onto = Ontology(properties=["a", "b_2", "x.y", "p-q"], entails=[])
        assert onto.properties == frozenset({"a", "b_2", "x.y", "p-q"})

    def test_rejects_bad_name(self):
        with pytest.raises(OntologyError):
            Ontology(properties=["a", "no spaces"], entails=[])

    def test_rejects_empty_name(self):
        with pytest.raises(OntologyError):
            Ontology(properties=[""], entails=[])

    def test_rejects_duplicate_property(self):
        with pytest.raises(OntologyError):
            Ontology(properties=["a", "a"], entails=[])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(OntologyError):
            Ontology(properties=["a", "b"], entails=[("a", "b"), ("a", "b")])

    def test_rejects_undeclared_endpoint(self):
        with pytest.raises(OntologyError):
            Ontology(properties=["a"], entails=[("a", "ghost")])

    def test_rejects_self_loop(self):
        with pytest.raises(EntailmentCycleError):
            Ontology(properties=["a"], entails=[("a", "a")])

    def test_cycle_names_a_witness(self):
        with pytest.raises(EntailmentCycleError) as exc_info:
            Ontology(properties=["a", "b", "c"], entails=[("a", "b"), ("b", "c"), ("c", "a")])
        cycle = exc_info.value.cycle
        assert cycle[0] == cycle[-1]
        assert set(cycle) <= {"a", "b", "c"}
        assert len(cycle) >= 3

    def test_equality_ignores_declaration_order(self):
        one = Ontology(properties=["a", "b"], entails=[("a", "b")])
        two = Ontology(properties=["b", "a"], entails=[("a", "b")])
        assert one == two
        assert hash(one) == hash(two)


class TestClosure:
    def test_chain(self):
        onto = Ontology(properties=["a", "b", "c"], entails=[("a", "b"), ("b", "c")])
        assert onto.closure({"a"}) == {"a", "b", "c"}
        assert onto.closure({"b"}) == {"b", "c"}
        assert onto.closure({"c"}) == {"c"}

    def test_diamond(self):
        onto = Ontology(
            properties=["top", "l", "r", "bot"],
            entails=[("top", "l"), ("top", "r"), ("l", "bot"), ("r", "bot")],
        )
        assert onto.closure({"top"}) == {"top", "l", "r", "bot"}

    def test_empty_set(self):
        onto = Ontology(properties=["a"], entails=[])
        assert onto.closure(frozenset()) == frozenset()

    def test_unknown_property(self):
        onto = Ontology(properties=["a"], entails=[])
        with pytest.raises(UnknownPropertyError) as exc_info:
            onto.closure({"zz"})
        assert "zz" in str(exc_info.value)

    def test_module_level_function_agrees(self):
        onto = Ontology(properties=["a", "b"], entails=[("a", "b")])
        assert closure({"a"}, onto) == onto.closure({"a"})

    @given(data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_laws_hold(self, data):
        seed = data.draw(st.integers(0, 2**31))
        rng = random.Random(seed)
        onto = random_dag_ontology(rng, n_props=rng.randint(1, 10), n_edges=rng.randint(0, 12))
        props = sorted(onto.properties)
        x = frozenset(p for p in props if rng.random() < 0.4)
        y = x | frozenset(p for p in props if rng.random() < 0.3)
        cx = onto.closure(x)
        assert x <= cx, "extensivity"
        assert onto.closure(cx) == cx, "idempotence"
        assert cx <= onto.closure(y), "monotonicity"


class TestCaseBase:
    def make(self):
        onto = Ontology(properties=["a", "b", "A"], entails=[])
        cases = [
            Case(id="c1", problem={"a"}, solution={"A"}),
            Case(id="c2", problem={"b"}, solution={"A"}),
        ]
        return CaseBase(cases=cases, ontology=onto)

    def test_lookup(self):
        cb = self.make()
        assert cb.case("c2").problem == {"b"}
        with pytest.raises(CaseBaseFormatError):
            cb.case("nope")

    def test_duplicate_ids_rejected(self):
        onto = Ontology(properties=["a"], entails=[])
        with pytest.raises(CaseBaseFormatError):
            CaseBase(
                cases=[
                    Case(id="c1", problem={"a"}, solution=set()),
                    Case(id="c1", problem=set(), solution={"a"}),
                ],
                ontology=onto,
            )

    def test_unknown_property_rejected(self):
        onto = Ontology(properties=["a"], entails=[])
        with pytest.raises(UnknownPropertyError):
            CaseBase(cases=[Case(id="c1", problem={"zz"}, solution=set())], ontology=onto)

    def test_format_case_closes_both_sides(self):
        onto = Ontology(properties=["a", "b", "A", "B"], entails=[("a", "b"), ("A", "B")])
        case = Case(id="c1", problem={"a"}, solution={"A"})
        pb, sol = format_case(case, onto)
        assert pb == {"a", "b"}
        assert sol == {"A", "B"}


class TestDocuments:
    def doc(self):
        return {
            "ontology": {
                "properties": ["a", "b", "A"],
                "entails": [["a", "b"]],
            },
            "cases": [
                {"id": "c1", "problem": ["a"], "solution": ["A"]},
                {"id": "c2", "problem": ["b"], "solution": ["A"]},
            ],
        }

    def test_load_from_dict(self):
        cb = load_case_base(self.doc())
        assert len(cb.cases) == 2
        assert cb.ontology.closure({"a"}) == {"a", "b"}

    def test_round_trip_via_file(self, tmp_path):
        cb = load_case_base(self.doc())
        path = tmp_path / "cb.json"
        save_case_base(cb, path)
        again = load_case_base(path)
        assert again.cases == cb.cases
        assert again.ontology == cb.ontology

    def test_save_is_deterministic(self, tmp_path):
        cb = load_case_base(self.doc())
        p1, p2 = tmp_path / "one.json", tmp_path / "two.json"
        save_case_base(cb, p1)
        save_case_base(cb, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_missing_key_rejected(self):
        doc = self.doc()
        del doc["cases"][0]["solution"]
        with pytest.raises(CaseBaseFormatError):
            load_case_base(doc)

    def test_duplicate_list_entry_rejected(self):
        doc = self.doc()
        doc["cases"][0]["problem"] = ["a", "a"]
        with pytest.raises(CaseBaseFormatError):
            load_case_base(doc)

    def test_cycle_error_passes_through(self):
        with pytest.raises(EntailmentCycleError):
            load_ontology({"properties": ["a", "b"], "entails": [["a", "b"], ["b", "a"]]})

    def test_load_ontology_from_stream(self, tmp_path):
        path = tmp_path / "onto.json"
        path.write_text(json.dumps({"properties": ["a"], "entails": []}))
        with open(path) as fh:
            onto = load_ontology(fh)
        assert onto.properties == frozenset({"a"})

    def test_non_object_rejected(self):
        with pytest.raises(CaseBaseFormatError):
            load_case_base([1, 2, 3])
