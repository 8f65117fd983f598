"""Relational persistence of ontologies and annotations.

The fixed base schema lives in schema.sql next to this module. Assertions go
into one two-column table per property, created on first use; the
PropertyTable catalog maps property identifiers to those physical names.
The default engine is an embedded SQLite database file.
"""

from __future__ import annotations

import hashlib
import re
import sqlite3
from dataclasses import dataclass, field
from importlib import resources

from .consistency import check_ontology, validate_instance
from .errors import (
    AlreadyInitialized, ConnectionFailure, ConstraintViolation,
    InconsistentDoc, UnknownOntology, ValidationFailed,
)
from .model import (
    ClassDef, InstanceDef, InstanceGraph, Literal, OntologyDoc, PropertyDef,
    PropertyKind, Qualifier, Ref, Restriction, Value,
    DATATYPES, TRANSITIVE, UNIQUE, literal_parses,
)

BASE_TABLES = (
    "Ontology", "Import", "Class", "SubClassOf", "DisjointWith",
    "DisjointUnionOf", "UnionOf", "SameClassAs", "IntersectionOf",
    "ComplementOf", "OneOf", "Property", "SubPropertyOf", "PropertyDomain",
    "PropertyRange", "SamePropertyAs", "InverseOf", "Restriction", "HasClass",
    "HasValue", "HasClassQ", "Instance", "DifferentIndividualFrom",
    "SameIndividualAs",
)
CATALOG_TABLE = "PropertyTable"

_RESERVED = {name.lower() for name in BASE_TABLES} | {CATALOG_TABLE.lower()}
_NAME_CHARS = re.compile(r"[^A-Za-z0-9_]")

RESTRICTION_CLASS_TYPE = "restriction"
NAMED_CLASS_TYPE = "daml:Class"

_KIND_TYPE = {
    PropertyKind.OBJECT: "daml:ObjectProperty",
    PropertyKind.DATATYPE: "daml:DatatypeProperty",
}
_CHARACTERISTIC_TYPE = {
    TRANSITIVE: "daml:TransitiveProperty",
    UNIQUE: "daml:UniqueProperty",
}
_TYPE_CHARACTERISTIC = {v: k for k, v in _CHARACTERISTIC_TYPE.items()}

_CLASS_RELATION_TABLES = (
    ("SubClassOf", "sub_class_of", "parentClassID"),
    ("DisjointWith", "disjoint_with", "otherClassID"),
    ("DisjointUnionOf", "disjoint_union_of", "otherClassID"),
    ("UnionOf", "union_of", "otherClassID"),
    ("SameClassAs", "same_class_as", "otherClassID"),
    ("IntersectionOf", "intersection_of", "otherClassID"),
    ("ComplementOf", "complement_of", "otherClassID"),
)


def open_connection(path: str) -> sqlite3.Connection:
    try:
        conn = sqlite3.connect(path)
        conn.execute("SELECT 1")
        return conn
    except sqlite3.Error as exc:
        raise ConnectionFailure(f"cannot open database at {path}: {exc}") from exc


def _table_names(conn: sqlite3.Connection) -> set[str]:
    rows = conn.execute("SELECT name FROM sqlite_master WHERE type = 'table'").fetchall()
    return {r[0] for r in rows}


def schema_initialized(conn: sqlite3.Connection) -> bool:
    return set(BASE_TABLES) <= _table_names(conn)


def init_schema(conn: sqlite3.Connection, force: bool = False) -> None:
    """Create the base tables plus the PropertyTable catalog."""
    existing = _table_names(conn)
    if existing & (set(BASE_TABLES) | {CATALOG_TABLE}):
        if not force:
            raise AlreadyInitialized("schema already initialized (use force to recreate)")
        with conn:
            if CATALOG_TABLE in existing:
                split = [r[0] for r in conn.execute(f"SELECT tableName FROM {CATALOG_TABLE}").fetchall()]
                for table in split:
                    conn.execute(f'DROP TABLE IF EXISTS "{table}"')
            for table in (*BASE_TABLES, CATALOG_TABLE):
                conn.execute(f'DROP TABLE IF EXISTS "{table}"')
    ddl = resources.files(__package__).joinpath("schema.sql").read_text()
    with conn:
        conn.executescript(ddl)


# ---------------------------------------------------------------------------
# property table catalog
# ---------------------------------------------------------------------------

@dataclass
class Catalog:
    by_property: dict[str, str] = field(default_factory=dict)
    by_table: dict[str, str] = field(default_factory=dict)


def load_catalog(conn: sqlite3.Connection) -> Catalog:
    catalog = Catalog()
    for pid, table in conn.execute(f"SELECT propertyID, tableName FROM {CATALOG_TABLE}"):
        catalog.by_property[pid] = table
        catalog.by_table[table] = pid
    return catalog


def _hash8(property_id: str) -> str:
    return hashlib.sha256(property_id.encode("utf-8")).hexdigest()[:8]


def property_table_name(catalog: Catalog, property_id: str) -> str:
    """Deterministic physical name for a property's split table; registers it.

    The local name is sanitized to [A-Za-z0-9_], prefixed with "p_" when it
    collides with a base table or starts with a digit, and suffixed with an
    8-hex-digit hash of the full identifier on catalog collisions.
    """
    existing = catalog.by_property.get(property_id)
    if existing is not None:
        return existing
    from .model import local_name

    base = _NAME_CHARS.sub("", local_name(property_id))
    if not base:
        base = "p_" + _hash8(property_id)
    elif base[0].isdigit() or base.lower() in _RESERVED:
        base = "p_" + base
    name = base
    digest = hashlib.sha256(property_id.encode("utf-8")).hexdigest()
    width = 8
    while name in catalog.by_table:
        name = f"{base}_{digest[:width]}"
        width += 4
    catalog.by_property[property_id] = name
    catalog.by_table[name] = property_id
    return name


def _ensure_property_table(conn: sqlite3.Connection, catalog: Catalog, property_id: str) -> str:
    known = property_id in catalog.by_property
    table = property_table_name(catalog, property_id)
    if not known:
        conn.execute(
            f"INSERT INTO {CATALOG_TABLE} (propertyID, tableName) VALUES (?, ?)",
            (property_id, table),
        )
        conn.execute(f'CREATE TABLE IF NOT EXISTS "{table}" (subject TEXT NOT NULL, value TEXT NOT NULL)')
    return table


# ---------------------------------------------------------------------------
# saving
# ---------------------------------------------------------------------------

def save_ontology(conn: sqlite3.Connection, doc: OntologyDoc) -> str:
    """Write the whole document transactionally; returns the ontology id."""
    violations = check_ontology(doc)
    if violations:
        raise InconsistentDoc(violations)
    try:
        with conn:
            _save_ontology_rows(conn, doc)
    except sqlite3.IntegrityError as exc:
        raise ConstraintViolation(str(exc)) from exc
    return doc.ontology_id


def _save_ontology_rows(conn: sqlite3.Connection, doc: OntologyDoc) -> None:
    catalog = load_catalog(conn)
    conn.execute(
        "INSERT INTO Ontology (OntologyID, versionInfo, comment) VALUES (?, ?, ?)",
        (doc.ontology_id, doc.version_info, doc.comment),
    )
    conn.executemany(
        "INSERT INTO Import (OntologyID, importedOntologyID) VALUES (?, ?)",
        [(doc.ontology_id, imported) for imported in sorted(doc.imports)],
    )
    _save_classes(conn, doc)
    _save_properties(conn, doc)
    _save_restrictions(conn, doc)
    _save_instance_rows(conn, catalog, doc.instances)


def _save_classes(conn: sqlite3.Connection, doc: OntologyDoc) -> None:
    rows = [
        (cid, doc.ontology_id, NAMED_CLASS_TYPE, c.label, c.comment)
        for cid, c in sorted(doc.classes.items())
    ]
    rows += [
        (rid, doc.ontology_id, RESTRICTION_CLASS_TYPE, "", "")
        for rid in sorted(doc.restrictions)
    ]
    conn.executemany(
        "INSERT INTO Class (classID, ontologyID, type, label, comment) VALUES (?, ?, ?, ?, ?)",
        rows,
    )
    for table, attr, _col in _CLASS_RELATION_TABLES:
        pairs = [
            (cid, target)
            for cid, c in sorted(doc.classes.items())
            for target in sorted(getattr(c, attr))
        ]
        conn.executemany(f"INSERT INTO {table} VALUES (?, ?)", pairs)
    one_of = [
        (cid, member)
        for cid, c in sorted(doc.classes.items())
        for member in c.one_of
    ]
    conn.executemany("INSERT INTO OneOf (classID, instanceID) VALUES (?, ?)", one_of)


def _save_properties(conn: sqlite3.Connection, doc: OntologyDoc) -> None:
    rows = []
    for pid, p in sorted(doc.properties.items()):
        parts = [_KIND_TYPE[p.kind]]
        parts += sorted(_CHARACTERISTIC_TYPE[c] for c in p.characteristics)
        rows.append((pid, doc.ontology_id, ";".join(parts), p.comment))
    conn.executemany(
        "INSERT INTO Property (propertyID, ontologyID, type, comment) VALUES (?, ?, ?, ?)",
        rows,
    )
    for table, attr in (
        ("SubPropertyOf", "sub_property_of"),
        ("PropertyDomain", "domain"),
        ("PropertyRange", "range"),
        ("SamePropertyAs", "same_property_as"),
        ("InverseOf", "inverse_of"),
    ):
        pairs = [
            (pid, target)
            for pid, p in sorted(doc.properties.items())
            for target in sorted(getattr(p, attr))
        ]
        conn.executemany(f"INSERT INTO {table} VALUES (?, ?)", pairs)


def _save_restrictions(conn: sqlite3.Connection, doc: OntologyDoc) -> None:
    for rid, r in sorted(doc.restrictions.items()):
        conn.execute(
            "INSERT INTO Restriction (restrictionID, onProp, toClass, minC, maxC, C) "
            "VALUES (?, ?, ?, ?, ?, ?)",
            (rid, r.on_property, r.to_class, r.min_c, r.max_c, r.exact_c),
        )
        if r.has_class is not None:
            conn.execute("INSERT INTO HasClass VALUES (?, ?)", (rid, r.has_class))
        if r.has_value is not None:
            conn.execute("INSERT INTO HasValue VALUES (?, ?)", (rid, r.has_value.as_text()))
        if r.qualifier is not None:
            q = r.qualifier
            conn.execute(
                "INSERT INTO HasClassQ (restrictionID, classID, minC, maxC, C) VALUES (?, ?, ?, ?, ?)",
                (rid, q.has_class_q, q.min_cq, q.max_cq, q.exact_cq),
            )


def _save_instance_rows(
    conn: sqlite3.Connection, catalog: Catalog, instances: dict[str, InstanceDef]
) -> None:
    conn.executemany(
        "INSERT INTO Instance (instanceID, classID) VALUES (?, ?)",
        [(iid, inst.class_id) for iid, inst in sorted(instances.items())],
    )
    for iid, inst in sorted(instances.items()):
        for pid, value in inst.assertions:
            table = _ensure_property_table(conn, catalog, pid)
            conn.execute(f'INSERT INTO "{table}" (subject, value) VALUES (?, ?)', (iid, value.as_text()))
        conn.executemany(
            "INSERT INTO DifferentIndividualFrom VALUES (?, ?)",
            [(iid, other) for other in sorted(inst.different_from)],
        )
        conn.executemany(
            "INSERT INTO SameIndividualAs VALUES (?, ?)",
            [(iid, other) for other in sorted(inst.same_as)],
        )


def save_instances(conn: sqlite3.Connection, ontology_id: str, graph: InstanceGraph) -> None:
    """Validate every instance against the ontology, then write all or nothing."""
    doc = load_ontology(conn, ontology_id)
    merged = InstanceGraph({**load_instances(conn, ontology_id).instances, **graph.instances})
    violations = []
    for iid in sorted(graph.instances):
        violations += validate_instance(doc, merged, iid)
    if violations:
        raise ValidationFailed(violations)
    catalog = load_catalog(conn)
    try:
        with conn:
            _save_instance_rows(conn, catalog, graph.instances)
    except sqlite3.IntegrityError as exc:
        raise ConstraintViolation(str(exc)) from exc


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def list_ontologies(conn: sqlite3.Connection) -> list[tuple[str, str, str]]:
    rows = conn.execute(
        "SELECT OntologyID, versionInfo, comment FROM Ontology ORDER BY OntologyID"
    ).fetchall()
    return [(r[0], r[1] or "", r[2] or "") for r in rows]


def _in_clause(ids) -> tuple[str, list[str]]:
    ids = sorted(ids)
    return ",".join("?" * len(ids)), ids


def load_ontology(conn: sqlite3.Connection, ontology_id: str) -> OntologyDoc:
    row = conn.execute(
        "SELECT versionInfo, comment FROM Ontology WHERE OntologyID = ?", (ontology_id,)
    ).fetchone()
    if row is None:
        raise UnknownOntology(ontology_id)
    imports = frozenset(
        r[0] for r in conn.execute(
            "SELECT importedOntologyID FROM Import WHERE OntologyID = ?", (ontology_id,)
        )
    )

    named: dict[str, dict] = {}
    restriction_ids = []
    for cid, ctype, label, comment in conn.execute(
        "SELECT classID, type, label, comment FROM Class WHERE ontologyID = ?", (ontology_id,)
    ):
        if ctype == RESTRICTION_CLASS_TYPE:
            restriction_ids.append(cid)
        else:
            named[cid] = {"label": label or "", "comment": comment or ""}

    relations: dict[str, dict[str, set[str]]] = {attr: {} for _, attr, _ in _CLASS_RELATION_TABLES}
    if named:
        marks, ids = _in_clause(named)
        for table, attr, col in _CLASS_RELATION_TABLES:
            for cid, target in conn.execute(
                f"SELECT classID, {col} FROM {table} WHERE classID IN ({marks})", ids
            ):
                relations[attr].setdefault(cid, set()).add(target)
        one_of: dict[str, list[str]] = {}
        for cid, member in conn.execute(
            f"SELECT classID, instanceID FROM OneOf WHERE classID IN ({marks}) ORDER BY rowid", ids
        ):
            one_of.setdefault(cid, []).append(member)
    else:
        one_of = {}

    classes = {
        cid: ClassDef(
            class_id=cid,
            label=info["label"],
            comment=info["comment"],
            sub_class_of=frozenset(relations["sub_class_of"].get(cid, ())),
            disjoint_with=frozenset(relations["disjoint_with"].get(cid, ())),
            same_class_as=frozenset(relations["same_class_as"].get(cid, ())),
            complement_of=frozenset(relations["complement_of"].get(cid, ())),
            union_of=frozenset(relations["union_of"].get(cid, ())),
            intersection_of=frozenset(relations["intersection_of"].get(cid, ())),
            disjoint_union_of=frozenset(relations["disjoint_union_of"].get(cid, ())),
            one_of=tuple(one_of.get(cid, ())),
        )
        for cid, info in named.items()
    }

    properties = _load_properties(conn, ontology_id)
    restrictions = _load_restrictions(conn, restriction_ids, properties)
    instances = _load_instance_defs(conn, set(classes), properties)

    return OntologyDoc(
        ontology_id=ontology_id,
        version_info=row[0] or "",
        comment=row[1] or "",
        imports=imports,
        classes=classes,
        properties=properties,
        restrictions=restrictions,
        instances=instances,
    )


def _load_properties(conn: sqlite3.Connection, ontology_id: str) -> dict[str, PropertyDef]:
    raw = {}
    for pid, ptype, comment in conn.execute(
        "SELECT propertyID, type, comment FROM Property WHERE ontologyID = ?", (ontology_id,)
    ):
        parts = (ptype or _KIND_TYPE[PropertyKind.OBJECT]).split(";")
        kind = (
            PropertyKind.DATATYPE
            if _KIND_TYPE[PropertyKind.DATATYPE] in parts
            else PropertyKind.OBJECT
        )
        characteristics = frozenset(
            _TYPE_CHARACTERISTIC[p] for p in parts if p in _TYPE_CHARACTERISTIC
        )
        raw[pid] = {"kind": kind, "comment": comment or "", "characteristics": characteristics}
    if not raw:
        return {}
    marks, ids = _in_clause(raw)
    sets: dict[str, dict[str, set[str]]] = {
        "domain": {}, "range": {}, "sub_property_of": {},
        "same_property_as": {}, "inverse_of": {},
    }
    for table, attr, col in (
        ("SubPropertyOf", "sub_property_of", "parentPropertyID"),
        ("PropertyDomain", "domain", "classID"),
        ("PropertyRange", "range", "classID"),
        ("SamePropertyAs", "same_property_as", "otherPropertyID"),
        ("InverseOf", "inverse_of", "otherPropertyID"),
    ):
        for pid, target in conn.execute(
            f"SELECT propertyID, {col} FROM {table} WHERE propertyID IN ({marks})", ids
        ):
            sets[attr].setdefault(pid, set()).add(target)
    return {
        pid: PropertyDef(
            property_id=pid,
            kind=info["kind"],
            comment=info["comment"],
            characteristics=info["characteristics"],
            domain=frozenset(sets["domain"].get(pid, ())),
            range=frozenset(sets["range"].get(pid, ())),
            sub_property_of=frozenset(sets["sub_property_of"].get(pid, ())),
            same_property_as=frozenset(sets["same_property_as"].get(pid, ())),
            inverse_of=frozenset(sets["inverse_of"].get(pid, ())),
        )
        for pid, info in raw.items()
    }


def _value_from_text(properties: dict[str, PropertyDef], property_id: str, text: str) -> Value:
    """Recover a stored value: references for object properties, typed literals otherwise."""
    prop = properties.get(property_id)
    if prop is not None and prop.kind is PropertyKind.OBJECT:
        return Ref(text)
    if prop is not None:
        ranged = sorted(prop.range & DATATYPES)
        if len(ranged) == 1 and literal_parses(text, ranged[0]):
            return Literal(text, ranged[0])
    return Literal(text, "string")


def _load_restrictions(
    conn: sqlite3.Connection, restriction_ids: list[str], properties: dict[str, PropertyDef]
) -> dict[str, Restriction]:
    if not restriction_ids:
        return {}
    marks, ids = _in_clause(restriction_ids)
    has_class = dict(conn.execute(
        f"SELECT restrictionID, classID FROM HasClass WHERE restrictionID IN ({marks})", ids
    ))
    has_value = dict(conn.execute(
        f"SELECT restrictionID, value FROM HasValue WHERE restrictionID IN ({marks})", ids
    ))
    qualifiers = {
        rid: Qualifier(has_class_q=cq, min_cq=mn, max_cq=mx, exact_cq=ex)
        for rid, cq, mn, mx, ex in conn.execute(
            f"SELECT restrictionID, classID, minC, maxC, C FROM HasClassQ "
            f"WHERE restrictionID IN ({marks})", ids
        )
    }
    out = {}
    for rid, on_prop, to_class, min_c, max_c, exact_c in conn.execute(
        f"SELECT restrictionID, onProp, toClass, minC, maxC, C FROM Restriction "
        f"WHERE restrictionID IN ({marks})", ids
    ):
        value = None
        if rid in has_value:
            value = _value_from_text(properties, on_prop, has_value[rid])
        out[rid] = Restriction(
            restriction_id=rid,
            on_property=on_prop,
            to_class=to_class,
            has_class=has_class.get(rid),
            has_value=value,
            min_c=min_c,
            max_c=max_c,
            exact_c=exact_c,
            qualifier=qualifiers.get(rid),
        )
    return out


def _load_instance_defs(
    conn: sqlite3.Connection, class_ids: set[str], properties: dict[str, PropertyDef]
) -> dict[str, InstanceDef]:
    if not class_ids:
        return {}
    marks, ids = _in_clause(class_ids)
    base = dict(conn.execute(
        f"SELECT instanceID, classID FROM Instance WHERE classID IN ({marks})", ids
    ))
    if not base:
        return {}
    catalog = load_catalog(conn)
    assertions: dict[str, list[tuple[str, Value]]] = {iid: [] for iid in base}
    existing_tables = _table_names(conn)
    for pid in sorted(properties):
        table = catalog.by_property.get(pid)
        if table is None or table not in existing_tables:
            continue
        for subject, text in conn.execute(f'SELECT subject, value FROM "{table}" ORDER BY rowid'):
            if subject in assertions:
                assertions[subject].append((pid, _value_from_text(properties, pid, text)))
    imarks, iids = _in_clause(base)
    different: dict[str, set[str]] = {}
    same: dict[str, set[str]] = {}
    for iid, other in conn.execute(
        f"SELECT instanceID, otherInstanceID FROM DifferentIndividualFrom "
        f"WHERE instanceID IN ({imarks})", iids
    ):
        different.setdefault(iid, set()).add(other)
    for iid, other in conn.execute(
        f"SELECT instanceID, otherInstanceID FROM SameIndividualAs WHERE instanceID IN ({imarks})",
        iids,
    ):
        same.setdefault(iid, set()).add(other)
    return {
        iid: InstanceDef(
            instance_id=iid,
            class_id=cid,
            assertions=tuple(assertions[iid]),
            different_from=frozenset(different.get(iid, ())),
            same_as=frozenset(same.get(iid, ())),
        )
        for iid, cid in base.items()
    }


def load_instances(conn: sqlite3.Connection, ontology_id: str) -> InstanceGraph:
    """All stored individuals whose class belongs to the ontology."""
    if conn.execute(
        "SELECT 1 FROM Ontology WHERE OntologyID = ?", (ontology_id,)
    ).fetchone() is None:
        raise UnknownOntology(ontology_id)
    named = {
        r[0] for r in conn.execute(
            "SELECT classID FROM Class WHERE ontologyID = ? AND type != ?",
            (ontology_id, RESTRICTION_CLASS_TYPE),
        )
    }
    properties = _load_properties(conn, ontology_id)
    return InstanceGraph(_load_instance_defs(conn, named, properties))


def _delete_ontology_rows(conn: sqlite3.Connection, ontology_id: str) -> None:
    named = [
        r[0] for r in conn.execute(
            "SELECT classID FROM Class WHERE ontologyID = ?", (ontology_id,)
        )
    ]
    properties = [
        r[0] for r in conn.execute(
            "SELECT propertyID FROM Property WHERE ontologyID = ?", (ontology_id,)
        )
    ]
    catalog = load_catalog(conn)
    if named:
        marks, ids = _in_clause(named)
        instances = [
            r[0] for r in conn.execute(
                f"SELECT instanceID FROM Instance WHERE classID IN ({marks})", ids
            )
        ]
        for table, _attr, _col in _CLASS_RELATION_TABLES:
            conn.execute(f"DELETE FROM {table} WHERE classID IN ({marks})", ids)
        conn.execute(f"DELETE FROM OneOf WHERE classID IN ({marks})", ids)
        conn.execute(f"DELETE FROM Instance WHERE classID IN ({marks})", ids)
        if instances:
            imarks, iids = _in_clause(instances)
            conn.execute(f"DELETE FROM DifferentIndividualFrom WHERE instanceID IN ({imarks})", iids)
            conn.execute(f"DELETE FROM SameIndividualAs WHERE instanceID IN ({imarks})", iids)
    restriction_ids = [
        r[0] for r in conn.execute(
            "SELECT classID FROM Class WHERE ontologyID = ? AND type = ?",
            (ontology_id, RESTRICTION_CLASS_TYPE),
        )
    ]
    if restriction_ids:
        marks, ids = _in_clause(restriction_ids)
        for table in ("Restriction", "HasClass", "HasValue", "HasClassQ"):
            conn.execute(f"DELETE FROM {table} WHERE restrictionID IN ({marks})", ids)
    if properties:
        marks, ids = _in_clause(properties)
        for table in (
            "SubPropertyOf", "PropertyDomain", "PropertyRange",
            "SamePropertyAs", "InverseOf",
        ):
            conn.execute(f"DELETE FROM {table} WHERE propertyID IN ({marks})", ids)
        for pid in properties:
            table = catalog.by_property.get(pid)
            if table is not None:
                conn.execute(f'DROP TABLE IF EXISTS "{table}"')
                conn.execute(f"DELETE FROM {CATALOG_TABLE} WHERE propertyID = ?", (pid,))
    conn.execute("DELETE FROM Class WHERE ontologyID = ?", (ontology_id,))
    conn.execute("DELETE FROM Property WHERE ontologyID = ?", (ontology_id,))
    conn.execute("DELETE FROM Import WHERE OntologyID = ?", (ontology_id,))
    conn.execute("DELETE FROM Ontology WHERE OntologyID = ?", (ontology_id,))


def delete_ontology(conn: sqlite3.Connection, ontology_id: str) -> None:
    """Remove every row belonging to the ontology, including its split tables."""
    with conn:
        _delete_ontology_rows(conn, ontology_id)


def replace_ontology(conn: sqlite3.Connection, doc: OntologyDoc) -> None:
    """Atomically persist an edited document (loaded documents carry their instances)."""
    violations = check_ontology(doc)
    if violations:
        raise InconsistentDoc(violations)
    try:
        with conn:
            _delete_ontology_rows(conn, doc.ontology_id)
            _save_ontology_rows(conn, doc)
    except sqlite3.IntegrityError as exc:
        raise ConstraintViolation(str(exc)) from exc


def named_subclass_edges(conn: sqlite3.Connection) -> dict[str, set[str]]:
    """child -> named parents over every stored ontology (restriction anchors excluded)."""
    named = {
        r[0] for r in conn.execute(
            "SELECT classID FROM Class WHERE type != ?", (RESTRICTION_CLASS_TYPE,)
        )
    }
    edges: dict[str, set[str]] = {c: set() for c in named}
    for child, parent in conn.execute("SELECT classID, parentClassID FROM SubClassOf"):
        if child in named and parent in named:
            edges[child].add(parent)
    return edges


def stored_subclass_closure(conn: sqlite3.Connection, class_id: str) -> set[str]:
    """The class and all transitive subclasses, from the stored SubClassOf rows."""
    edges = named_subclass_edges(conn)
    reverse: dict[str, set[str]] = {}
    for child, parents in edges.items():
        for parent in parents:
            reverse.setdefault(parent, set()).add(child)
    out = {class_id}
    frontier = [class_id]
    while frontier:
        current = frontier.pop()
        for child in reverse.get(current, ()):
            if child not in out:
                out.add(child)
                frontier.append(child)
    return out
