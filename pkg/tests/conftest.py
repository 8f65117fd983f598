from __future__ import annotations

import json
import sqlite3
from pathlib import Path

import pytest

from imagespace import damlio, store, wire

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_bytes() -> bytes:
    return (FIXTURES / "family_album.daml").read_bytes()


@pytest.fixture(scope="session")
def album(fixture_bytes):
    """The parsed FamilyAlbum document (strict parse, no warnings expected)."""
    report = damlio.parse_ontology(fixture_bytes, strict=True)
    assert report.warnings == []
    return report.doc


@pytest.fixture(scope="session")
def annotation_graph():
    data = json.loads((FIXTURES / "family_album_annotations.json").read_text())
    return wire.annotation_graph_from_json(data)


@pytest.fixture()
def conn():
    connection = sqlite3.connect(":memory:")
    store.init_schema(connection)
    yield connection
    connection.close()


@pytest.fixture()
def album_db(conn, album):
    """In-memory database with the fixture ontology saved."""
    store.save_ontology(conn, album)
    return conn


@pytest.fixture()
def annotated_db(album_db, annotation_graph):
    """Fixture ontology plus the Kathleen/Kevin annotation."""
    store.save_instances(album_db, "fa", annotation_graph)
    return album_db


def q8_text() -> str:
    return (FIXTURES / "q8.dl").read_text()


def q8_literal_text() -> str:
    return (FIXTURES / "q8_literal.dl").read_text()
