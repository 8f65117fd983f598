"""DAML+OIL parsing and serialization."""

from __future__ import annotations

import random

import pytest

from imagespace import damlio
from imagespace.errors import DanglingReference, InconsistentDoc, MalformedXml, UnknownConstruct
from imagespace.model import ClassDef, OntologyDoc, docs_equal

from randgen import random_doc

MINIMAL = b"""<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:daml="http://www.daml.org/2001/03/daml+oil#">
  <daml:Class rdf:ID="Pictures"/>
</rdf:RDF>
"""


class TestParse:
    def test_minimal_single_class(self):
        report = damlio.parse_ontology(MINIMAL, strict=True)
        assert set(report.doc.classes) == {"Pictures"}
        assert report.warnings == []

    def test_fixture_contents(self, album):
        assert len(album.classes) == 5
        assert len(album.properties) == 9
        date_restrictions = [
            r for r in album.restrictions.values()
            if r.on_property == "PictureDate" and r.to_class == "dateTime" and r.exact_c == 1
        ]
        assert len(date_restrictions) >= 1

    def test_unknown_tag_strict_names_the_tag(self):
        data = MINIMAL.replace(
            b'<daml:Class rdf:ID="Pictures"/>',
            b'<daml:Class rdf:ID="Pictures"/><daml:FancyNewThing rdf:ID="x"/>',
        )
        with pytest.raises(UnknownConstruct, match="FancyNewThing"):
            damlio.parse_ontology(data, strict=True)

    def test_unknown_tag_lenient_warns(self):
        data = MINIMAL.replace(
            b'<daml:Class rdf:ID="Pictures"/>',
            b'<daml:Class rdf:ID="Pictures"/><daml:FancyNewThing rdf:ID="x"/>',
        )
        report = damlio.parse_ontology(data, strict=False)
        assert len(report.warnings) == 1
        assert "FancyNewThing" in report.warnings[0][0]
        assert set(report.doc.classes) == {"Pictures"}

    def test_malformed_xml(self):
        with pytest.raises(MalformedXml):
            damlio.parse_ontology(b"<rdf:RDF", strict=False)
        with pytest.raises(MalformedXml):
            damlio.parse_ontology(b"<html></html>", strict=False)

    def test_dangling_reference_is_an_error_in_both_modes(self):
        data = MINIMAL.replace(
            b'<daml:Class rdf:ID="Pictures"/>',
            b'<daml:Class rdf:ID="Pictures"><rdfs:subClassOf rdf:resource="#Ghost"/></daml:Class>',
        )
        for strict in (False, True):
            with pytest.raises(DanglingReference):
                damlio.parse_ontology(data, strict=strict)

    def test_prefix_text_is_irrelevant(self):
        rebound = MINIMAL.replace(b"daml:", b"dd:").replace(b"xmlns:dd", b"xmlns:dd")
        rebound = rebound.replace(b'xmlns:daml="http', b'xmlns:dd="http')
        report = damlio.parse_ontology(rebound, strict=True)
        assert set(report.doc.classes) == {"Pictures"}

    def test_identical_bytes_identical_doc(self, fixture_bytes):
        a = damlio.parse_ontology(fixture_bytes, strict=True).doc
        b = damlio.parse_ontology(fixture_bytes, strict=True).doc
        assert a == b  # exact equality, including generated _:rN numbering

    def test_generated_restriction_ids_unique(self, album):
        ids = list(album.restrictions)
        assert len(ids) == len(set(ids))
        assert all(rid.startswith("_:r") for rid in ids)

    def test_characteristic_elements_merge(self):
        data = MINIMAL.replace(
            b'<daml:Class rdf:ID="Pictures"/>',
            b'<daml:Class rdf:ID="Pictures"/>'
            b'<daml:ObjectProperty rdf:ID="linksTo"/>'
            b'<daml:TransitiveProperty rdf:about="#linksTo"/>',
        )
        doc = damlio.parse_ontology(data, strict=True).doc
        assert doc.properties["linksTo"].characteristics == {"transitive"}


class TestSerialize:
    def test_single_class_document(self):
        doc = OntologyDoc(ontology_id="t", classes={"Only": ClassDef("Only")})
        xml = damlio.serialize_ontology(doc).decode()
        assert xml.count("<daml:Class") == 1
        assert 'rdf:ID="Only"' in xml

    def test_fixture_roundtrip(self, album, fixture_bytes):
        reparsed = damlio.parse_ontology(damlio.serialize_ontology(album), strict=True).doc
        assert docs_equal(album, reparsed)

    def test_restriction_nested_in_subclassof(self, album):
        xml = damlio.serialize_ontology(album).decode()
        chunk = xml.split('rdf:ID="Pictures"')[1].split("</daml:Class>")[0]
        assert "<rdfs:subClassOf>" in chunk
        assert "<daml:Restriction>" in chunk

    def test_inconsistent_doc_refused(self, album):
        broken = OntologyDoc(
            ontology_id="t",
            classes={"A": ClassDef("A", sub_class_of=frozenset({"Missing"}))},
        )
        with pytest.raises(InconsistentDoc):
            damlio.serialize_ontology(broken)

    def test_serialization_is_deterministic(self, album):
        assert damlio.serialize_ontology(album) == damlio.serialize_ontology(album)


class TestRoundTripFixpoint:
    def test_random_docs_fixpoint(self):
        rng = random.Random(20240)
        for _ in range(40):
            doc = random_doc(rng)
            once = damlio.parse_ontology(damlio.serialize_ontology(doc), strict=True).doc
            assert docs_equal(doc, once)
            twice = damlio.parse_ontology(damlio.serialize_ontology(once), strict=True).doc
            assert once == twice  # canonical form is an exact fixpoint
