"""Second-pass coverage: corners of the derivations, queries, and CLI wiring."""

from __future__ import annotations

import sqlite3

from click.testing import CliRunner

from imagespace import store
from imagespace.cli import main
from imagespace.consistency import ViolationCode, validate_instance
from imagespace.model import (
    ClassDef, InstanceDef, InstanceGraph, OntologyDoc, PropertyDef,
    PropertyKind, Ref, Restriction, annotation_form_spec, effective_restrictions,
)
from imagespace.query import execute_query, parse_query


def make_doc(classes=(), properties=(), restrictions=(), instances=()):
    return OntologyDoc(
        ontology_id="t",
        classes={c.class_id: c for c in classes},
        properties={p.property_id: p for p in properties},
        restrictions={r.restriction_id: r for r in restrictions},
        instances={i.instance_id: i for i in instances},
    )


class TestFormSpecCorners:
    def test_restriction_mention_makes_property_applicable(self):
        # domain says Elsewhere, but the class constrains the property itself
        doc = make_doc(
            classes=[
                ClassDef("C", sub_class_of=frozenset({"_:r1"})),
                ClassDef("Elsewhere"),
            ],
            properties=[PropertyDef(
                "p", PropertyKind.DATATYPE, domain=frozenset({"Elsewhere"}),
            )],
            restrictions=[Restriction("_:r1", on_property="p", min_c=1)],
        )
        fields = annotation_form_spec(doc, "C").fields
        assert [f.property_id for f in fields] == ["p"]
        assert fields[0].min_c == 1

    def test_restriction_backed_fields_come_first(self):
        doc = make_doc(
            classes=[ClassDef("C", sub_class_of=frozenset({"_:r1"}))],
            properties=[
                PropertyDef("aaa", PropertyKind.DATATYPE, domain=frozenset({"C"})),
                PropertyDef("zzz", PropertyKind.DATATYPE, domain=frozenset({"C"})),
            ],
            restrictions=[Restriction("_:r1", on_property="zzz", max_c=2)],
        )
        assert [f.property_id for f in annotation_form_spec(doc, "C").fields] == ["zzz", "aaa"]


class TestEffectiveOrdering:
    def test_own_first_then_by_ancestor_distance(self):
        r_own = Restriction("_:r1", on_property="a", min_c=1)
        r_parent = Restriction("_:r2", on_property="b", min_c=1)
        r_grand = Restriction("_:r3", on_property="c", min_c=1)
        doc = make_doc(
            classes=[
                ClassDef("Grand", sub_class_of=frozenset({"_:r3"})),
                ClassDef("Parent", sub_class_of=frozenset({"Grand", "_:r2"})),
                ClassDef("Child", sub_class_of=frozenset({"Parent", "_:r1"})),
            ],
            properties=[
                PropertyDef(p, PropertyKind.DATATYPE) for p in ("a", "b", "c")
            ],
            restrictions=[r_own, r_parent, r_grand],
        )
        effs = effective_restrictions(doc, "Child")
        assert [e.restriction.restriction_id for e in effs] == ["_:r1", "_:r2", "_:r3"]
        assert [e.declared_on for e in effs] == ["Child", "Parent", "Grand"]


class TestValidationCorners:
    def test_range_accepts_descendant_instances(self, album):
        # hasActor's range is Actor; a more specific actor subclass still conforms
        doc = OntologyDoc(
            ontology_id=album.ontology_id,
            classes={
                **album.classes,
                "LeadActor": ClassDef("LeadActor", sub_class_of=frozenset({"Actor"})),
            },
            properties=album.properties,
            restrictions=album.restrictions,
            instances=album.instances,
        )
        graph = InstanceGraph({
            "star": InstanceDef("star", "LeadActor"),
            "pic": InstanceDef("pic", "Vacation", assertions=(("hasActor", Ref("star")),)),
        })
        assert validate_instance(doc, graph, "pic") == []

    def test_ref_to_missing_individual_is_dangling(self, album):
        graph = InstanceGraph({
            "pic": InstanceDef("pic", "Vacation", assertions=(("hasActor", Ref("ghost")),)),
        })
        codes = {v.code for v in validate_instance(album, graph, "pic")}
        assert codes == {ViolationCode.DanglingReference}

    def test_assertions_against_doc_resident_instances(self, album, annotation_graph):
        # Kathleen lives in the store already; a new actor can reference her
        merged = {**annotation_graph.instances}
        doc = OntologyDoc(
            ontology_id=album.ontology_id,
            classes=album.classes,
            properties=album.properties,
            restrictions=album.restrictions,
            instances=merged,
        )
        graph = InstanceGraph({
            "extra-actor": InstanceDef(
                "extra-actor", "Actor", assertions=(("isSnapshotOf", Ref("Kathleen")),),
            ),
        })
        assert validate_instance(doc, graph, "extra-actor") == []


class TestIriProperties:
    def test_query_over_iri_named_property(self):
        from imagespace.model import Literal

        doc = make_doc(
            classes=[ClassDef("Img")],
            properties=[PropertyDef("http://ex.org/fa#depicts", PropertyKind.DATATYPE)],
        )
        graph = InstanceGraph({
            "i1": InstanceDef(
                "i1", "Img",
                assertions=(("http://ex.org/fa#depicts", Literal("cat")),),
            ),
        })
        conn = sqlite3.connect(":memory:")
        store.init_schema(conn)
        store.save_ontology(conn, doc)
        store.save_instances(conn, "t", graph)
        q = parse_query('Answer($x) :- http://ex.org/fa#depicts($x, "cat").')
        assert execute_query(conn, q) == {("i1",)}
        conn.close()


class TestCliServeWiring:
    def test_serve_builds_config_and_invokes_uvicorn(self, tmp_path, monkeypatch):
        captured = {}

        def fake_run(app, host, port):
            captured["host"] = host
            captured["port"] = port
            captured["app"] = app

        import uvicorn

        monkeypatch.setattr(uvicorn, "run", fake_run)
        db = str(tmp_path / "serve.db")
        runner = CliRunner()
        assert runner.invoke(main, ["init-db", "--db", db]).exit_code == 0
        result = runner.invoke(main, ["serve", "--db", db, "--listen", "127.0.0.1:9321"])
        assert result.exit_code == 0, result.output
        assert captured["host"] == "127.0.0.1"
        assert captured["port"] == 9321
        assert captured["app"] is not None


class TestStoreCorners:
    def test_force_init_drops_split_tables(self, annotated_db):
        store.init_schema(annotated_db, force=True)
        names = {
            r[0] for r in annotated_db.execute("SELECT name FROM sqlite_master WHERE type='table'")
        }
        assert "hasActor" not in names
        assert store.load_catalog(annotated_db).by_property == {}

    def test_delete_ontology_removes_everything(self, annotated_db):
        store.delete_ontology(annotated_db, "fa")
        assert store.list_ontologies(annotated_db) == []
        for table in ("Class", "Property", "Instance", "Restriction", "SubClassOf"):
            assert annotated_db.execute(f"SELECT count(*) FROM {table}").fetchone()[0] == 0
        names = {
            r[0] for r in annotated_db.execute("SELECT name FROM sqlite_master WHERE type='table'")
        }
        assert "hasActor" not in names

    def test_one_of_order_survives_roundtrip(self, conn):
        doc = make_doc(
            classes=[ClassDef("Palette", one_of=("zebra", "apple", "mango"))],
            instances=[
                InstanceDef("zebra", "Palette"),
                InstanceDef("apple", "Palette"),
                InstanceDef("mango", "Palette"),
            ],
        )
        store.save_ontology(conn, doc)
        loaded = store.load_ontology(conn, "t")
        assert loaded.classes["Palette"].one_of == ("zebra", "apple", "mango")
