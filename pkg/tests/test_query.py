"""Triple-query parsing, SQL compilation, execution, and the reference evaluator."""

from __future__ import annotations

import random
import sqlite3

import pytest

from imagespace import store
from imagespace.errors import QuerySyntaxError, UnknownProperty, UnsafeQuery
from imagespace.model import InstanceDef, InstanceGraph, Literal, Ref
from imagespace.query import (
    Const, InstanceOfAtom, Lit, PropAtom, TripleQuery, Var, compile_query,
    eval_reference, execute_query, parse_query,
)

from conftest import q8_text, q8_literal_text
from randgen import random_query_env, random_safe_query

EXAMPLE = "http://www.cs.wayne.edu/example.jpg"


class TestParse:
    def test_paper_query_shape(self):
        q = parse_query(q8_text())
        assert q.head_vars == ("instanceID",)
        assert len(q.atoms) == 10
        assert q.atoms[0] == InstanceOfAtom(Var("instanceID"), "Vacation")
        assert q.atoms[5] == PropAtom("hasName", Var("P1"), Lit("Kathleen"))
        assert q.atoms[8] == PropAtom("hasAction", Var("A1"), Const("smiles"))

    def test_single_atom(self):
        q = parse_query("Answer($x) :- instanceOf($x, Vacation).")
        assert q.head_vars == ("x",)
        assert q.atoms == (InstanceOfAtom(Var("x"), "Vacation"),)

    def test_unsafe_head_variable(self):
        with pytest.raises(UnsafeQuery):
            parse_query("Answer($y) :- instanceOf($x, Vacation).")

    def test_syntax_error_carries_position(self):
        with pytest.raises(QuerySyntaxError) as info:
            parse_query("Answer($x) :- instanceOf($x Vacation).")
        assert info.value.position > 0

    def test_iri_constants(self):
        q = parse_query(f"Answer($x) :- hasActor({EXAMPLE}, $x).")
        assert q.atoms[0].subject == Const(EXAMPLE)

    def test_multiple_head_vars(self):
        q = parse_query("Answer($a, $b) :- hugs($a, $b).")
        assert q.head_vars == ("a", "b")

    def test_missing_dot(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("Answer($x) :- instanceOf($x, Vacation)")

    def test_head_must_be_answer(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("Find($x) :- instanceOf($x, Vacation).")


class TestCompile:
    def test_paper_query_plan(self, annotated_db):
        q = parse_query(q8_text())
        plan = compile_query(q, store.load_catalog(annotated_db))
        assert plan.sql.count(" a") >= 10  # one alias per atom
        for i in range(10):
            assert f"a{i}" in plan.sql
        assert plan.sql.startswith("SELECT DISTINCT")
        assert "Instance a0" in plan.sql
        for table in ("hasActor", "isSnapshotOf", "hasName", "hugs", "hasAction"):
            assert f'"{table}"' in plan.sql

    def test_constants_travel_as_parameters(self, annotated_db):
        q = parse_query(q8_text())
        plan = compile_query(q, store.load_catalog(annotated_db))
        assert plan.sql.count("?") == len(plan.params)
        assert "Kathleen" not in plan.sql
        assert "smiles" not in plan.sql
        assert "Kathleen" in plan.params
        assert "smiles" in plan.params

    def test_single_instanceof_atom(self):
        q = parse_query("Answer($x) :- instanceOf($x, Vacation).")
        plan = compile_query(q, store.Catalog())
        assert plan.sql == (
            "SELECT DISTINCT a0.instanceID AS v_x FROM Instance a0 WHERE a0.classID = ?"
        )
        assert plan.params == ("Vacation",)

    def test_repeated_variables_join(self):
        q = parse_query("Answer($x) :- p($x, $y), q($y, $x).")
        catalog = store.Catalog()
        store.property_table_name(catalog, "p")
        store.property_table_name(catalog, "q")
        plan = compile_query(q, catalog)
        assert "a1.subject = a0.value" in plan.sql
        assert "a1.value = a0.subject" in plan.sql

    def test_unknown_property_is_provably_empty(self):
        q = parse_query("Answer($x) :- ghostProp($x, smiles).")
        plan = compile_query(q, store.Catalog())
        assert plan.empty
        assert "0 = 1" in plan.sql

    def test_unknown_property_strict(self):
        q = parse_query("Answer($x) :- ghostProp($x, smiles).")
        with pytest.raises(UnknownProperty):
            compile_query(q, store.Catalog(), strict=True)

    def test_closure_expands_class_set(self, annotated_db):
        q = parse_query("Answer($x) :- instanceOf($x, Pictures).")
        closure_sets = {"Pictures": store.stored_subclass_closure(annotated_db, "Pictures")}
        plan = compile_query(
            q, store.load_catalog(annotated_db), closure=True, closure_sets=closure_sets
        )
        assert "IN (?, ?, ?)" in plan.sql
        assert set(plan.params) == {"Pictures", "Birthday_Party", "Vacation"}


class TestExecute:
    def test_paper_query_result(self, annotated_db):
        q = parse_query(q8_text())
        assert execute_query(annotated_db, q, closure=True) == {(EXAMPLE,)}
        assert execute_query(annotated_db, q, closure=False) == {(EXAMPLE,)}

    def test_literal_paper_query_is_empty(self, annotated_db):
        q = parse_query(q8_literal_text())
        assert execute_query(annotated_db, q, closure=True) == set()

    def test_mutating_kevin_action_empties_result(self, annotated_db):
        with annotated_db:
            annotated_db.execute(
                "UPDATE hasAction SET value = 'smiles' WHERE subject = 'Kevin-actor1'"
            )
        q = parse_query(q8_text())
        assert execute_query(annotated_db, q, closure=True) == set()

    def test_empty_database(self, album_db):
        q = parse_query(q8_text())
        assert execute_query(album_db, q, closure=True) == set()

    def test_closure_flag_matches_subclass_instances(self, annotated_db):
        q = parse_query("Answer($x) :- instanceOf($x, Pictures).")
        assert execute_query(annotated_db, q, closure=False) == set()
        assert execute_query(annotated_db, q, closure=True) == {(EXAMPLE,)}


class TestEvalReference:
    def test_paper_query(self, album, annotation_graph):
        q = parse_query(q8_text())
        assert eval_reference(annotation_graph, album, q, closure=True) == {(EXAMPLE,)}

    def test_single_instanceof_counts_instances(self, album):
        graph = InstanceGraph({
            f"a{i}": InstanceDef(f"a{i}", "Actor") for i in range(3)
        })
        q = parse_query("Answer($x) :- instanceOf($x, Actor).")
        assert len(eval_reference(graph, album, q)) == 3

    def test_literal_and_const_match_textually(self, album):
        graph = InstanceGraph({
            "a1": InstanceDef("a1", "Actor", assertions=(("hasAction", Literal("smiles")),)),
        })
        quoted = parse_query('Answer($x) :- hasAction($x, "smiles").')
        bare = parse_query("Answer($x) :- hasAction($x, smiles).")
        assert eval_reference(graph, album, quoted) == {("a1",)}
        assert eval_reference(graph, album, bare) == {("a1",)}


def _setup_env(doc, graph):
    conn = sqlite3.connect(":memory:")
    store.init_schema(conn)
    store.save_ontology(conn, doc)
    store.save_instances(conn, doc.ontology_id, graph)
    return conn


class TestProperties:
    def test_differential_smoke(self):
        rng = random.Random(777)
        for _ in range(20):
            doc, graph = random_query_env(rng)
            conn = _setup_env(doc, graph)
            for _ in range(10):
                q = random_safe_query(rng, doc, graph)
                closure = rng.random() < 0.5
                assert execute_query(conn, q, closure=closure) == eval_reference(
                    graph, doc, q, closure=closure
                )
            conn.close()

    def test_atom_order_invariance(self):
        rng = random.Random(31)
        doc, graph = random_query_env(rng)
        conn = _setup_env(doc, graph)
        for _ in range(20):
            q = random_safe_query(rng, doc, graph)
            atoms = list(q.atoms)
            rng.shuffle(atoms)
            permuted = TripleQuery(q.head_vars, tuple(atoms))
            assert execute_query(conn, q) == execute_query(conn, permuted)
            assert eval_reference(graph, doc, q) == eval_reference(graph, doc, permuted)
        conn.close()

    def test_monotonicity_adding_assertions(self):
        rng = random.Random(57)
        doc, graph = random_query_env(rng)
        queries = [random_safe_query(rng, doc, graph) for _ in range(15)]
        before = {i: eval_reference(graph, doc, q) for i, q in enumerate(queries)}
        pid = sorted(doc.properties)[0]
        some = sorted(graph.instances)[0]
        inst = graph.instances[some]
        from imagespace.model import PropertyKind

        value = (
            Ref(sorted(graph.instances)[-1])
            if doc.properties[pid].kind is PropertyKind.OBJECT
            else Literal("w0")
        )
        grown = graph.with_instance(InstanceDef(
            instance_id=inst.instance_id,
            class_id=inst.class_id,
            assertions=inst.assertions + ((pid, value),),
        ))
        for i, q in enumerate(queries):
            assert before[i] <= eval_reference(grown, doc, q)

    def test_distinct_semantics(self, annotated_db):
        # two derivations (A1/A2 swap is blocked by hasAction, but duplicates
        # can still arise from the join); the binding set has no duplicates
        q = parse_query("Answer($x) :- hasActor($x, $a), hasActor($x, $b).")
        result = execute_query(annotated_db, q)
        assert result == {(EXAMPLE,)}

    def test_closure_results_are_a_superset(self):
        rng = random.Random(4242)
        for _ in range(10):
            doc, graph = random_query_env(rng)
            conn = _setup_env(doc, graph)
            for _ in range(5):
                q = random_safe_query(rng, doc, graph)
                plain = execute_query(conn, q, closure=False)
                closed = execute_query(conn, q, closure=True)
                assert plain <= closed
            conn.close()

    def test_degenerate_shapes_agree_with_reference(self):
        rng = random.Random(1)
        doc, graph = random_query_env(rng)
        conn = _setup_env(doc, graph)
        p = sorted(doc.properties)[0]
        c = sorted(doc.classes)[0]
        shapes = [
            TripleQuery(("x",), (PropAtom(p, Var("x"), Var("x")),)),
            TripleQuery(("x", "x"), (PropAtom(p, Var("x"), Var("y")),)),
            TripleQuery(("x",), (PropAtom(p, Var("x"), Var("y")),
                                 PropAtom(p, Var("y"), Var("x")))),
            TripleQuery(("x",), (InstanceOfAtom(Var("x"), c),
                                 InstanceOfAtom(Var("x"), c))),
            TripleQuery(("x",), (PropAtom(p, Var("x"), Const("no-such-value")),)),
            TripleQuery(("x",), (PropAtom("ghost", Var("x"), Var("y")),)),
            TripleQuery(("x",), (InstanceOfAtom(Var("x"), "GhostClass"),)),
            TripleQuery(("x",), (PropAtom(p, Const("i0"), Var("x")),)),
        ]
        for q in shapes:
            for closure in (False, True):
                assert execute_query(conn, q, closure=closure) == eval_reference(
                    graph, doc, q, closure=closure
                ), (q, closure)
        conn.close()
