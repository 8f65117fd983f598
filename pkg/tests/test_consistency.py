"""Consistency mechanisms: checks, guarded edits, filters, instance validation."""

from __future__ import annotations

import random

import pytest

from imagespace.consistency import (
    Applied, Cascaded, DeleteClass, InsertClass, InsertRelation, Rejected,
    RemovedTuple, ViolationCode, apply_edit, candidate_classes, check_ontology,
    validate_instance,
)
from imagespace.errors import InconsistentInputDoc, UnknownClass, UnknownInstance
from imagespace.model import (
    ClassDef, InstanceDef, InstanceGraph, Literal, OntologyDoc, PropertyDef,
    PropertyKind, Qualifier, Ref, Restriction,
)

from randgen import random_doc, random_edit


def make_doc(classes=(), properties=(), restrictions=(), instances=()):
    return OntologyDoc(
        ontology_id="t",
        classes={c.class_id: c for c in classes},
        properties={p.property_id: p for p in properties},
        restrictions={r.restriction_id: r for r in restrictions},
        instances={i.instance_id: i for i in instances},
    )


def codes(violations):
    return [v.code for v in violations]


class TestCheckOntology:
    def test_fixture_is_consistent(self, album):
        assert check_ontology(album) == []

    def test_min_above_max(self):
        doc = make_doc(
            classes=[ClassDef("C", sub_class_of=frozenset({"_:r1"}))],
            properties=[PropertyDef("p", PropertyKind.DATATYPE)],
            restrictions=[Restriction("_:r1", on_property="p", min_c=3, max_c=2)],
        )
        assert codes(check_ontology(doc)) == [ViolationCode.CardinalityBounds]

    def test_to_class_with_has_class(self):
        doc = make_doc(
            classes=[ClassDef("C", sub_class_of=frozenset({"_:r1"})), ClassDef("D")],
            properties=[PropertyDef("p", PropertyKind.OBJECT)],
            restrictions=[Restriction("_:r1", on_property="p", to_class="D", has_class="D")],
        )
        assert codes(check_ontology(doc)) == [ViolationCode.ToClassExclusion]

    def test_to_class_with_qualifier(self):
        doc = make_doc(
            classes=[ClassDef("C", sub_class_of=frozenset({"_:r1"})), ClassDef("D")],
            properties=[PropertyDef("p", PropertyKind.OBJECT)],
            restrictions=[Restriction(
                "_:r1", on_property="p", to_class="D",
                qualifier=Qualifier("D", min_cq=1),
            )],
        )
        assert codes(check_ontology(doc)) == [ViolationCode.ToClassExclusion]

    def test_ancestor_in_disjoint_with(self):
        doc = make_doc(classes=[
            ClassDef("Top"),
            ClassDef("Mid", sub_class_of=frozenset({"Top"}),
                     disjoint_with=frozenset({"Top"})),
        ])
        assert codes(check_ontology(doc)) == [ViolationCode.AncestorInDisjointWith]

    def test_descendant_in_complement_of(self):
        doc = make_doc(classes=[
            ClassDef("Top", complement_of=frozenset({"Mid"})),
            ClassDef("Mid", sub_class_of=frozenset({"Top"})),
        ])
        assert codes(check_ontology(doc)) == [ViolationCode.AncestorInComplementOf]

    def test_subclass_cycle(self):
        doc = make_doc(classes=[
            ClassDef("A", sub_class_of=frozenset({"B"})),
            ClassDef("B", sub_class_of=frozenset({"A"})),
        ])
        assert ViolationCode.SubClassCycle in codes(check_ontology(doc))

    def test_subproperty_cycle(self):
        doc = make_doc(properties=[
            PropertyDef("p", PropertyKind.OBJECT, sub_property_of=frozenset({"q"})),
            PropertyDef("q", PropertyKind.OBJECT, sub_property_of=frozenset({"p"})),
        ])
        assert codes(check_ontology(doc)) == [ViolationCode.SubPropertyCycle]

    def test_dangling_reference(self):
        doc = make_doc(classes=[ClassDef("A", sub_class_of=frozenset({"Ghost"}))])
        out = check_ontology(doc)
        assert codes(out) == [ViolationCode.DanglingReference]
        assert out[0].subjects == ("A", "Ghost")

    def test_wrong_kind_reference_is_dangling(self):
        doc = make_doc(
            classes=[ClassDef("A", disjoint_with=frozenset({"p"}))],
            properties=[PropertyDef("p", PropertyKind.OBJECT)],
        )
        assert codes(check_ontology(doc)) == [ViolationCode.DanglingReference]

    def test_insertion_order_does_not_matter(self, album):
        reversed_doc = OntologyDoc(
            ontology_id=album.ontology_id,
            version_info=album.version_info,
            comment=album.comment,
            imports=album.imports,
            classes=dict(reversed(album.classes.items())),
            properties=dict(reversed(album.properties.items())),
            restrictions=dict(reversed(album.restrictions.items())),
            instances=dict(reversed(album.instances.items())),
        )
        assert check_ontology(album) == check_ontology(reversed_doc)


class TestApplyEdit:
    def test_delete_referenced_class_cascades(self):
        doc = make_doc(classes=[
            ClassDef("D"),
            ClassDef("E", disjoint_with=frozenset({"D"})),
        ])
        outcome = apply_edit(doc, DeleteClass("D"))
        assert isinstance(outcome, Cascaded)
        assert RemovedTuple("disjointWith", "E", "D") in outcome.removed
        assert check_ontology(outcome.doc) == []
        assert "D" not in outcome.doc.classes

    def test_insert_subclass_into_complement_rejected(self):
        doc = make_doc(classes=[
            ClassDef("A"),
            ClassDef("B", complement_of=frozenset({"A"})),
        ])
        outcome = apply_edit(doc, InsertRelation("subClassOf", "B", "A"))
        assert isinstance(outcome, Rejected)
        assert ViolationCode.AncestorInComplementOf in codes(outcome.violations)

    def test_insert_fresh_class_applied(self, album):
        outcome = apply_edit(album, InsertClass(ClassDef("Holiday")))
        assert isinstance(outcome, Applied)
        assert "Holiday" in outcome.doc.classes

    def test_inconsistent_input_refused(self):
        doc = make_doc(classes=[ClassDef("A", sub_class_of=frozenset({"Ghost"}))])
        with pytest.raises(InconsistentInputDoc):
            apply_edit(doc, InsertClass(ClassDef("B")))

    def test_cycle_insert_rejected(self, album):
        outcome = apply_edit(album, InsertRelation("subClassOf", "Pictures", "Birthday_Party"))
        assert isinstance(outcome, Rejected)
        assert ViolationCode.SubClassCycle in codes(outcome.violations)

    def test_delete_property_cascades_through_restrictions(self, album):
        from imagespace.consistency import DeleteProperty

        outcome = apply_edit(album, DeleteProperty("PictureDate"))
        assert isinstance(outcome, Cascaded)
        assert check_ontology(outcome.doc) == []
        assert all(
            r.on_property != "PictureDate" for r in outcome.doc.restrictions.values()
        )

    def test_closure_under_random_edit_sequences_smoke(self, album):
        rng = random.Random(99)
        doc = album
        applied = 0
        for _ in range(200):
            outcome = apply_edit(doc, random_edit(rng, doc))
            if isinstance(outcome, (Applied, Cascaded)):
                doc = outcome.doc
                applied += 1
                assert check_ontology(doc) == []
        assert applied > 0


class TestCandidateClasses:
    def test_disjoint_with_excludes_ancestors(self, album):
        names = candidate_classes(album, "Birthday_Party", "disjointWith")
        assert "Pictures" not in names
        assert "Birthday_Party" not in names
        assert {"Person", "Actor", "Vacation"} <= names

    def test_subclass_of_excludes_descendants_and_self(self, album):
        names = candidate_classes(album, "Pictures", "subClassOf")
        assert "Birthday_Party" not in names
        assert "Vacation" not in names
        assert "Pictures" not in names
        assert {"Person", "Actor"} <= names

    def test_single_class_ontology_has_no_disjoint_candidates(self):
        doc = make_doc(classes=[ClassDef("Only")])
        assert candidate_classes(doc, "Only", "disjointWith") == set()

    def test_unknown_class(self, album):
        with pytest.raises(UnknownClass):
            candidate_classes(album, "Nope", "disjointWith")

    def test_invalid_relation_kind(self, album):
        with pytest.raises(ValueError):
            candidate_classes(album, "Pictures", "oneOf")

    @pytest.mark.parametrize("relation", [
        "disjointWith", "complementOf", "subClassOf", "sameClassAs",
        "unionOf", "intersectionOf", "disjointUnionOf",
    ])
    def test_matches_edit_simulation_on_fixture(self, album, relation):
        for cid in album.classes:
            names = candidate_classes(album, cid, relation)
            for other in album.classes:
                outcome = apply_edit(album, InsertRelation(relation, cid, other))
                assert (other in names) == isinstance(outcome, Applied), (
                    f"{relation}({cid}, {other}) filter/simulation disagreement"
                )

    def test_matches_edit_simulation_on_random_docs(self):
        rng = random.Random(5)
        for _ in range(10):
            doc = random_doc(rng)
            if len(doc.classes) > 15:
                continue
            for relation in ("disjointWith", "complementOf", "subClassOf"):
                for cid in doc.classes:
                    names = candidate_classes(doc, cid, relation)
                    for other in doc.classes:
                        outcome = apply_edit(doc, InsertRelation(relation, cid, other))
                        assert (other in names) == isinstance(outcome, Applied)


class TestValidateInstance:
    def test_paper_annotation_is_clean(self, album, annotation_graph):
        for iid in annotation_graph.instances:
            assert validate_instance(album, annotation_graph, iid) == []

    def test_missing_picture_date(self, album):
        graph = InstanceGraph({
            "pic1": InstanceDef("pic1", "Pictures", assertions=(
                ("PicturePlace", Literal("Detroit")),
            )),
        })
        out = validate_instance(album, graph, "pic1")
        assert ViolationCode.CardinalityUnmet in codes(out)
        assert any(v.subjects == ("pic1", "PictureDate") for v in out)

    def test_person_value_where_actor_required(self, album):
        graph = InstanceGraph({
            "Ann": InstanceDef("Ann", "Person", assertions=(("hasName", Literal("Ann")),)),
            "pic1": InstanceDef("pic1", "Vacation", assertions=(
                ("PicturePersons", Ref("Ann")),
            )),
        })
        out = validate_instance(album, graph, "pic1")
        assert ViolationCode.RangeViolation in codes(out)

    def test_no_restrictions_no_assertions_clean(self, album):
        graph = InstanceGraph({"solo": InstanceDef("solo", "Actor")})
        assert validate_instance(album, graph, "solo") == []

    def test_unknown_instance(self, album):
        with pytest.raises(UnknownInstance):
            validate_instance(album, InstanceGraph(), "missing")

    def test_cardinality_exceeded(self, album):
        graph = InstanceGraph({
            "pic1": InstanceDef("pic1", "Vacation", assertions=(
                ("PictureDate", Literal("2004-01-01T00:00:00", "dateTime")),
                ("PictureDate", Literal("2004-01-02T00:00:00", "dateTime")),
            )),
        })
        out = validate_instance(album, graph, "pic1")
        assert ViolationCode.CardinalityExceeded in codes(out)

    def test_domain_violation(self, album):
        graph = InstanceGraph({
            "Ann": InstanceDef("Ann", "Person", assertions=(
                ("hasName", Literal("Ann")),
                ("hasAction", Literal("waves")),  # domain is Actor
            )),
        })
        out = validate_instance(album, graph, "Ann")
        assert ViolationCode.DomainViolation in codes(out)

    def test_unique_property(self):
        doc = make_doc(
            classes=[ClassDef("C")],
            properties=[PropertyDef(
                "tag", PropertyKind.DATATYPE, characteristics=frozenset({"unique"}),
            )],
        )
        graph = InstanceGraph({
            "i": InstanceDef("i", "C", assertions=(
                ("tag", Literal("a")), ("tag", Literal("b")),
            )),
        })
        out = validate_instance(doc, graph, "i")
        assert ViolationCode.UniquePropertyViolation in codes(out)

    def test_has_value_missing(self):
        doc = make_doc(
            classes=[ClassDef("C", sub_class_of=frozenset({"_:r1"}))],
            properties=[PropertyDef("tag", PropertyKind.DATATYPE)],
            restrictions=[Restriction("_:r1", on_property="tag",
                                      has_value=Literal("required"))],
        )
        graph = InstanceGraph({
            "i": InstanceDef("i", "C", assertions=(("tag", Literal("other")),)),
        })
        out = validate_instance(doc, graph, "i")
        assert ViolationCode.HasValueMissing in codes(out)

    def test_qualified_cardinality(self):
        doc = make_doc(
            classes=[ClassDef("C", sub_class_of=frozenset({"_:r1"})), ClassDef("T")],
            properties=[PropertyDef("link", PropertyKind.OBJECT)],
            restrictions=[Restriction(
                "_:r1", on_property="link",
                qualifier=Qualifier("T", min_cq=1),
            )],
        )
        graph = InstanceGraph({
            "other": InstanceDef("other", "C"),
            "i": InstanceDef("i", "C", assertions=(("link", Ref("other")),)),
        })
        out = validate_instance(doc, graph, "i")
        assert ViolationCode.QualifiedCardinality in codes(out)

    def test_to_class_checks_datatype_tag(self, album):
        graph = InstanceGraph({
            "pic1": InstanceDef("pic1", "Vacation", assertions=(
                ("PictureDate", Literal("not-a-date")),  # parses as string, not dateTime
            )),
        })
        out = validate_instance(album, graph, "pic1")
        assert ViolationCode.RangeViolation in codes(out)

    def test_has_class_requires_a_qualifying_value(self):
        doc = make_doc(
            classes=[ClassDef("C", sub_class_of=frozenset({"_:r1"})), ClassDef("T")],
            properties=[PropertyDef("link", PropertyKind.OBJECT)],
            restrictions=[Restriction("_:r1", on_property="link", has_class="T")],
        )
        graph = InstanceGraph({"i": InstanceDef("i", "C")})
        out = validate_instance(doc, graph, "i")
        assert ViolationCode.CardinalityUnmet in codes(out)

    def test_subclass_values_satisfy_to_class(self, album):
        # a Birthday_Party value where Pictures is required is fine (descendant)
        doc = make_doc(
            classes=[
                ClassDef("Root", sub_class_of=frozenset({"_:r1"})),
                ClassDef("Sub", sub_class_of=frozenset({"Root"})),
            ],
            properties=[PropertyDef("link", PropertyKind.OBJECT)],
            restrictions=[Restriction("_:r1", on_property="link", to_class="Root")],
        )
        graph = InstanceGraph({
            "child": InstanceDef("child", "Sub"),
            "i": InstanceDef("i", "Root", assertions=(("link", Ref("child")),)),
        })
        assert validate_instance(doc, graph, "i") == []
