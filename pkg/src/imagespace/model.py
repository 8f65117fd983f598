"""Typed ontology model and the pure derivations over it.

The document object is an immutable snapshot: every collection field is a
frozenset or tuple, and edits (see `consistency`) produce new documents.
Derivations (ancestry, effective restrictions, annotation form specs) are
pure functions of a document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime
from decimal import Decimal, InvalidOperation
from enum import Enum

from .errors import RestrictionOnUnknownProperty, UnknownClass

# Built-in datatype names usable wherever a class identifier is expected.
DATATYPES = frozenset({"string", "dateTime", "integer", "decimal", "boolean", "anyURI"})

# Reserved prefix for generated anonymous restriction identifiers.
ANON_RESTRICTION_PREFIX = "_:r"

TRANSITIVE = "transitive"
UNIQUE = "unique"

_ANON_NUM = re.compile(r"_:r(\d+)\Z")


def is_iri(identifier: str) -> bool:
    return "://" in identifier or identifier.startswith("urn:")


def local_name(identifier: str) -> str:
    """Fragment (after '#') or last path segment of an IRI; local names unchanged."""
    if "#" in identifier:
        return identifier.rsplit("#", 1)[1]
    if is_iri(identifier):
        return identifier.rstrip("/").rsplit("/", 1)[-1]
    return identifier


def _check_id(identifier: str) -> str:
    if not isinstance(identifier, str) or not identifier or identifier != identifier.strip():
        raise ValueError(f"invalid identifier: {identifier!r}")
    return identifier


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ref:
    """A reference to an individual by identifier."""

    target: str

    def __post_init__(self):
        _check_id(self.target)

    def as_text(self) -> str:
        return self.target


@dataclass(frozen=True)
class Literal:
    """A typed literal value; the lexical form must parse for its datatype."""

    lexical: str
    datatype: str = "string"

    def __post_init__(self):
        if self.datatype not in DATATYPES:
            raise ValueError(f"unsupported datatype: {self.datatype!r}")
        if not literal_parses(self.lexical, self.datatype):
            raise ValueError(f"lexical form {self.lexical!r} is not a valid {self.datatype}")

    def as_text(self) -> str:
        return self.lexical


Value = Ref | Literal

_INTEGER = re.compile(r"[+-]?\d+\Z")
_BOOLEAN = frozenset({"true", "false", "0", "1"})


def literal_parses(lexical: str, datatype: str) -> bool:
    """Whether the lexical form is acceptable for the datatype (ISO-8601 for dateTime)."""
    if datatype in ("string", "anyURI"):
        return True
    if datatype == "integer":
        return bool(_INTEGER.match(lexical))
    if datatype == "decimal":
        try:
            Decimal(lexical)
            return True
        except InvalidOperation:
            return False
    if datatype == "boolean":
        return lexical in _BOOLEAN
    if datatype == "dateTime":
        try:
            datetime.fromisoformat(lexical.replace("Z", "+00:00"))
            return True
        except ValueError:
            return False
    return False


# ---------------------------------------------------------------------------
# definitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassDef:
    class_id: str
    label: str = ""
    comment: str = ""
    sub_class_of: frozenset[str] = frozenset()
    disjoint_with: frozenset[str] = frozenset()
    same_class_as: frozenset[str] = frozenset()
    complement_of: frozenset[str] = frozenset()
    union_of: frozenset[str] = frozenset()
    intersection_of: frozenset[str] = frozenset()
    disjoint_union_of: frozenset[str] = frozenset()
    one_of: tuple[str, ...] = ()

    def __post_init__(self):
        _check_id(self.class_id)

    def relation_targets(self) -> dict[str, frozenset[str]]:
        """Class-to-class relation sets keyed by relation kind name."""
        return {
            "subClassOf": self.sub_class_of,
            "disjointWith": self.disjoint_with,
            "sameClassAs": self.same_class_as,
            "complementOf": self.complement_of,
            "unionOf": self.union_of,
            "intersectionOf": self.intersection_of,
            "disjointUnionOf": self.disjoint_union_of,
        }


class PropertyKind(str, Enum):
    OBJECT = "object"
    DATATYPE = "datatype"


@dataclass(frozen=True)
class PropertyDef:
    property_id: str
    kind: PropertyKind
    comment: str = ""
    domain: frozenset[str] = frozenset()
    range: frozenset[str] = frozenset()
    sub_property_of: frozenset[str] = frozenset()
    same_property_as: frozenset[str] = frozenset()
    inverse_of: frozenset[str] = frozenset()
    characteristics: frozenset[str] = frozenset()

    def __post_init__(self):
        _check_id(self.property_id)
        extra = self.characteristics - {TRANSITIVE, UNIQUE}
        if extra:
            raise ValueError(f"unsupported property characteristics: {sorted(extra)}")

    @property
    def is_unique(self) -> bool:
        return UNIQUE in self.characteristics


@dataclass(frozen=True)
class Qualifier:
    """Qualified cardinality bounds restricted to values of one class."""

    has_class_q: str
    min_cq: int | None = None
    max_cq: int | None = None
    exact_cq: int | None = None

    def __post_init__(self):
        _check_id(self.has_class_q)
        for bound in (self.min_cq, self.max_cq, self.exact_cq):
            if bound is not None and bound < 0:
                raise ValueError("negative cardinality bound")


@dataclass(frozen=True)
class Restriction:
    """Anonymous-class constraint on a single property.

    Inconsistent combinations (min above max, exact alongside min/max,
    toClass next to hasClass) are representable; `consistency.check_ontology`
    reports them. At least one constraint field must be present.
    """

    restriction_id: str
    on_property: str
    to_class: str | None = None
    has_class: str | None = None
    has_value: Value | None = None
    min_c: int | None = None
    max_c: int | None = None
    exact_c: int | None = None
    qualifier: Qualifier | None = None

    def __post_init__(self):
        _check_id(self.restriction_id)
        _check_id(self.on_property)
        for bound in (self.min_c, self.max_c, self.exact_c):
            if bound is not None and bound < 0:
                raise ValueError("negative cardinality bound")
        if not self.constrains():
            raise ValueError(f"restriction {self.restriction_id} has no constraint fields")

    def constrains(self) -> bool:
        return any(
            x is not None
            for x in (
                self.to_class, self.has_class, self.has_value,
                self.min_c, self.max_c, self.exact_c, self.qualifier,
            )
        )


@dataclass(frozen=True)
class InstanceDef:
    """An individual with its asserted property values.

    Assertions are kept grouped by property (stable sort on the property
    identifier, preserving per-property order) so that documents round-trip
    through XML and the relational store unchanged.
    """

    instance_id: str
    class_id: str
    assertions: tuple[tuple[str, Value], ...] = ()
    different_from: frozenset[str] = frozenset()
    same_as: frozenset[str] = frozenset()

    def __post_init__(self):
        _check_id(self.instance_id)
        _check_id(self.class_id)
        canonical = tuple(sorted(self.assertions, key=lambda a: a[0]))
        object.__setattr__(self, "assertions", canonical)

    def values_of(self, property_id: str) -> list[Value]:
        return [v for p, v in self.assertions if p == property_id]


@dataclass(frozen=True)
class OntologyDoc:
    ontology_id: str
    version_info: str = ""
    comment: str = ""
    imports: frozenset[str] = frozenset()
    classes: dict[str, ClassDef] = field(default_factory=dict)
    properties: dict[str, PropertyDef] = field(default_factory=dict)
    restrictions: dict[str, Restriction] = field(default_factory=dict)
    instances: dict[str, InstanceDef] = field(default_factory=dict)

    def __post_init__(self):
        _check_id(self.ontology_id)
        clash = set(self.restrictions) & set(self.classes)
        if clash:
            raise ValueError(f"restriction identifiers collide with classes: {sorted(clash)}")

    def resolves(self, identifier: str) -> bool:
        return (
            identifier in self.classes
            or identifier in self.properties
            or identifier in self.restrictions
            or identifier in self.instances
            or identifier in DATATYPES
        )


@dataclass(frozen=True)
class InstanceGraph:
    """Annotation data: individuals keyed by identifier (image ids are their URIs)."""

    instances: dict[str, InstanceDef] = field(default_factory=dict)

    def with_instance(self, inst: InstanceDef) -> InstanceGraph:
        merged = dict(self.instances)
        merged[inst.instance_id] = inst
        return InstanceGraph(merged)


# ---------------------------------------------------------------------------
# ancestry
# ---------------------------------------------------------------------------

def ancestors(doc: OntologyDoc, class_id: str) -> list[str]:
    """All named classes reachable via subClassOf, nearest first.

    Ordered by longest-path distance then identifier, which is a valid
    topological order for acyclic hierarchies; cycles (only possible in
    inconsistent documents) are cut rather than looped over. The class
    itself is excluded.
    """
    if class_id not in doc.classes:
        raise UnknownClass(class_id)
    depth = ancestor_depths(doc, class_id)
    return sorted(depth, key=lambda c: (depth[c], c))


def ancestor_depths(doc: OntologyDoc, class_id: str) -> dict[str, int]:
    """Longest-path distance to each named ancestor (cycle-safe)."""
    depth: dict[str, int] = {}
    stack: set[str] = {class_id}

    def walk(cid: str, d: int):
        for parent in doc.classes[cid].sub_class_of:
            if parent not in doc.classes or parent in stack:
                continue
            if depth.get(parent, 0) < d:
                depth[parent] = d
                stack.add(parent)
                walk(parent, d + 1)
                stack.discard(parent)

    walk(class_id, 1)
    return depth


def descendants(doc: OntologyDoc, class_id: str) -> set[str]:
    """Named classes that have `class_id` among their ancestors."""
    if class_id not in doc.classes:
        raise UnknownClass(class_id)
    out = set()
    for cid in doc.classes:
        if cid != class_id and class_id in ancestor_depths(doc, cid):
            out.add(cid)
    return out


def subclass_closure(doc: OntologyDoc, class_id: str) -> set[str]:
    """The class plus all its descendants (instanceOf expansion set)."""
    return {class_id} | descendants(doc, class_id) if class_id in doc.classes else {class_id}


# ---------------------------------------------------------------------------
# effective restrictions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EffectiveRestriction:
    restriction: Restriction
    declared_on: str
    inherited: bool


def _rid_key(rid: str):
    m = _ANON_NUM.match(rid)
    return (0, int(m.group(1)), "") if m else (1, 0, rid)


def declared_restrictions(doc: OntologyDoc, class_id: str) -> list[Restriction]:
    """Restrictions anchored on the class through subClassOf, in stable order."""
    cls = doc.classes[class_id]
    rids = [t for t in cls.sub_class_of if t in doc.restrictions]
    return [doc.restrictions[r] for r in sorted(rids, key=_rid_key)]


def effective_restrictions(doc: OntologyDoc, class_id: str) -> list[EffectiveRestriction]:
    """Own restrictions plus inherited ones, with per-property override.

    A restriction declared on the class itself drops every inherited
    restriction on the same property; inherited restrictions from multiple
    ancestors otherwise accumulate (conjunction). Order: own declarations
    first, then ancestors nearest first.
    """
    if class_id not in doc.classes:
        raise UnknownClass(class_id)
    own = declared_restrictions(doc, class_id)
    overridden = {r.on_property for r in own}
    out = [EffectiveRestriction(r, class_id, False) for r in own]
    for ancestor in ancestors(doc, class_id):
        for r in declared_restrictions(doc, ancestor):
            if r.on_property not in overridden:
                out.append(EffectiveRestriction(r, ancestor, True))
    return out


# ---------------------------------------------------------------------------
# annotation form specification
# ---------------------------------------------------------------------------

WIDGET_SCALAR = "scalar"
WIDGET_REFERENCE_LIST = "reference-list"
WIDGET_NESTED_CREATE = "nested-create"


@dataclass(frozen=True)
class FormField:
    property_id: str
    kind: PropertyKind
    range_hint: str
    min_c: int | None
    max_c: int | None
    exact_c: int | None
    inherited: bool
    widget: str


@dataclass(frozen=True)
class FormSpec:
    class_id: str
    fields: tuple[FormField, ...]


def class_requires_values(doc: OntologyDoc, class_id: str) -> bool:
    """Whether any effective restriction forces at least one value."""
    for eff in effective_restrictions(doc, class_id):
        r = eff.restriction
        if (r.min_c or 0) >= 1 or (r.exact_c or 0) >= 1:
            return True
        if r.has_value is not None or r.has_class is not None:
            return True
        q = r.qualifier
        if q is not None and ((q.min_cq or 0) >= 1 or (q.exact_cq or 0) >= 1):
            return True
    return False


def annotation_form_spec(doc: OntologyDoc, class_id: str) -> FormSpec:
    """One form field per property applicable to the class.

    A property is applicable when its domain names the class or one of its
    ancestors, or when an effective restriction mentions it. Cardinality
    bounds come from the effective restrictions (the unique characteristic
    adds an upper bound of 1).
    """
    if class_id not in doc.classes:
        raise UnknownClass(class_id)
    lineage = {class_id, *ancestors(doc, class_id)}
    eff = effective_restrictions(doc, class_id)

    by_property: dict[str, list[EffectiveRestriction]] = {}
    ordered: list[str] = []
    for e in eff:
        p = e.restriction.on_property
        if p not in by_property:
            by_property[p] = []
            ordered.append(p)
        by_property[p].append(e)

    for p in ordered:
        if p not in doc.properties:
            raise RestrictionOnUnknownProperty(p)
    for pid, pd in sorted(doc.properties.items()):
        if pid not in by_property and pd.domain & lineage:
            ordered.append(pid)

    fields = []
    for pid in ordered:
        pd = doc.properties[pid]
        fields.append(_form_field(doc, pd, by_property.get(pid, [])))
    return FormSpec(class_id, tuple(fields))


def _form_field(doc: OntologyDoc, pd: PropertyDef, effs: list[EffectiveRestriction]) -> FormField:
    mins = [e.restriction.min_c for e in effs if e.restriction.min_c is not None]
    maxs = [e.restriction.max_c for e in effs if e.restriction.max_c is not None]
    exacts = [e.restriction.exact_c for e in effs if e.restriction.exact_c is not None]
    min_c = max(mins) if mins else None
    max_c = min(maxs) if maxs else None
    exact_c = exacts[0] if exacts else None
    if pd.is_unique:
        max_c = 1 if max_c is None else min(max_c, 1)

    hint = ""
    for e in effs:
        r = e.restriction
        hint = r.to_class or r.has_class or (r.qualifier.has_class_q if r.qualifier else "")
        if hint:
            break
    if not hint:
        hint = "|".join(sorted(pd.range))

    if pd.kind is PropertyKind.DATATYPE:
        widget = WIDGET_SCALAR
    else:
        targets = [t for t in [hint, *sorted(pd.range)] if t in doc.classes]
        if any(class_requires_values(doc, t) for t in targets):
            widget = WIDGET_NESTED_CREATE
        else:
            widget = WIDGET_REFERENCE_LIST

    inherited = bool(effs) and effs[0].inherited
    return FormField(pd.property_id, pd.kind, hint, min_c, max_c, exact_c, inherited, widget)


# ---------------------------------------------------------------------------
# structural equality
# ---------------------------------------------------------------------------

def _restriction_content_key(r: Restriction):
    q = r.qualifier
    return (
        r.on_property,
        r.to_class or "", r.has_class or "",
        r.has_value.as_text() if r.has_value is not None else "",
        -1 if r.min_c is None else r.min_c,
        -1 if r.max_c is None else r.max_c,
        -1 if r.exact_c is None else r.exact_c,
        "" if q is None else q.has_class_q,
        -1 if q is None or q.min_cq is None else q.min_cq,
        -1 if q is None or q.max_cq is None else q.max_cq,
        -1 if q is None or q.exact_cq is None else q.exact_cq,
    )


def _is_anon(rid: str) -> bool:
    return rid.startswith(ANON_RESTRICTION_PREFIX)


def canonical_doc(doc: OntologyDoc) -> OntologyDoc:
    """Rename anonymous restriction ids into a content-derived canonical order.

    Traversal: classes sorted by id, relation kinds in a fixed order,
    restriction targets sorted by content; unanchored restrictions last.
    """
    order: list[str] = []
    seen: set[str] = set()
    for cid in sorted(doc.classes):
        rels = doc.classes[cid].relation_targets()
        for kind in sorted(rels):
            anon = [t for t in rels[kind] if t in doc.restrictions and _is_anon(t)]
            anon.sort(key=lambda t: _restriction_content_key(doc.restrictions[t]))
            for t in anon:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
    leftovers = [r for r in doc.restrictions if _is_anon(r) and r not in seen]
    leftovers.sort(key=lambda t: _restriction_content_key(doc.restrictions[t]))
    order.extend(leftovers)

    rename = {old: f"{ANON_RESTRICTION_PREFIX}{i + 1}" for i, old in enumerate(order)}
    if not rename:
        return doc

    def sub(ids: frozenset[str]) -> frozenset[str]:
        return frozenset(rename.get(i, i) for i in ids)

    classes = {
        cid: replace(
            c,
            sub_class_of=sub(c.sub_class_of),
            disjoint_with=sub(c.disjoint_with),
            same_class_as=sub(c.same_class_as),
            complement_of=sub(c.complement_of),
            union_of=sub(c.union_of),
            intersection_of=sub(c.intersection_of),
            disjoint_union_of=sub(c.disjoint_union_of),
        )
        for cid, c in doc.classes.items()
    }
    restrictions = {
        rename.get(rid, rid): replace(r, restriction_id=rename.get(rid, rid))
        for rid, r in doc.restrictions.items()
    }
    return replace(doc, classes=classes, restrictions=restrictions)


def docs_equal(a: OntologyDoc, b: OntologyDoc) -> bool:
    """Structural equality: set-valued fields unordered, anonymous ids renamed away."""
    return canonical_doc(a) == canonical_doc(b)
