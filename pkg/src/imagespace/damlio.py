"""Parse and serialize the supported DAML+OIL XML subset.

Namespaces are matched by IRI, never by prefix text. Anonymous restrictions
receive fresh "_:rN" identifiers in document order, so identical bytes always
parse to the identical document.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from xml.sax.saxutils import escape, quoteattr

from . import model
from .errors import DanglingReference, InconsistentDoc, MalformedXml, UnknownConstruct
from .model import (
    ClassDef, InstanceDef, Literal, OntologyDoc, PropertyDef, PropertyKind,
    Qualifier, Ref, Restriction, Value,
)

DAML_NS = "http://www.daml.org/2001/03/daml+oil#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_RDF_ID = f"{{{RDF_NS}}}ID"
_RDF_ABOUT = f"{{{RDF_NS}}}about"
_RDF_RESOURCE = f"{{{RDF_NS}}}resource"
_RDF_DATATYPE = f"{{{RDF_NS}}}datatype"
_RDF_PARSETYPE = f"{{{RDF_NS}}}parseType"


def _daml(tag: str) -> str:
    return f"{{{DAML_NS}}}{tag}"


def _rdfs(tag: str) -> str:
    return f"{{{RDFS_NS}}}{tag}"


_CLASS_RELATIONS = {
    _rdfs("subClassOf"): "subClassOf",
    _daml("sameClassAs"): "sameClassAs",
    _daml("disjointWith"): "disjointWith",
    _daml("disjointUnionOf"): "disjointUnionOf",
    _daml("unionOf"): "unionOf",
    _daml("intersectionOf"): "intersectionOf",
    _daml("complementOf"): "complementOf",
}

_RELATION_FIELDS = {
    "subClassOf": "sub_class_of",
    "sameClassAs": "same_class_as",
    "disjointWith": "disjoint_with",
    "disjointUnionOf": "disjoint_union_of",
    "unionOf": "union_of",
    "intersectionOf": "intersection_of",
    "complementOf": "complement_of",
}

_PROPERTY_TAGS = {
    _daml("ObjectProperty"): (PropertyKind.OBJECT, None),
    _daml("DatatypeProperty"): (PropertyKind.DATATYPE, None),
    _daml("TransitiveProperty"): (PropertyKind.OBJECT, model.TRANSITIVE),
    _daml("UniqueProperty"): (None, model.UNIQUE),
}

_CARD_TAGS = {
    _daml("minCardinality"): "min_c",
    _daml("maxCardinality"): "max_c",
    _daml("cardinality"): "exact_c",
}
_CARD_Q_TAGS = {
    _daml("minCardinalityQ"): "min_cq",
    _daml("maxCardinalityQ"): "max_cq",
    _daml("cardinalityQ"): "exact_cq",
}


@dataclass
class ParseReport:
    doc: OntologyDoc
    warnings: list[tuple[str, str]] = field(default_factory=list)


def _qname(tag: str) -> str:
    """Human-readable prefixed name for diagnostics."""
    for uri, prefix in ((DAML_NS, "daml"), (RDFS_NS, "rdfs"), (RDF_NS, "rdf")):
        if tag.startswith(f"{{{uri}}}"):
            return f"{prefix}:{tag.split('}', 1)[1]}"
    return tag.replace("{", "").replace("}", "#") if tag.startswith("{") else tag


def _tag_identifier(tag: str) -> str:
    """Identifier for a typed element: bare local name, or namespace+local for IRIs."""
    if tag.startswith("{"):
        uri, local = tag[1:].split("}", 1)
        return uri + local
    return tag


def _resolve_ref(value: str) -> str:
    if value.startswith("#"):
        return value[1:]
    if value.startswith(XSD_NS):
        name = value[len(XSD_NS):]
        if name in model.DATATYPES:
            return name
    return value


class _PendingLiteral:
    """Literal whose datatype is fixed once all property ranges are known."""

    __slots__ = ("lexical", "explicit")

    def __init__(self, lexical: str, explicit: str | None):
        self.lexical = lexical
        self.explicit = explicit


class _Parser:
    def __init__(self, strict: bool):
        self.strict = strict
        self.warnings: list[tuple[str, str]] = []
        self.anon_counter = 0
        self.ontology_id = ""
        self.version_info = ""
        self.comment = ""
        self.imports: set[str] = set()
        self.classes: dict[str, ClassDef] = {}
        self.properties: dict[str, PropertyDef] = {}
        self.explicit_kind: set[str] = set()
        # restriction fields keyed by id; built after property ranges are known
        self.raw_restrictions: dict[str, dict] = {}
        self.instances: dict[str, InstanceDef] = {}
        # (instance_id, property_id, value-or-pending) in document order
        self.assertions: list[tuple[str, str, Value | _PendingLiteral]] = []
        self.references: list[tuple[str, str]] = []  # (location, identifier)

    # -- diagnostics --------------------------------------------------------

    def skip(self, location: str, message: str):
        if self.strict:
            raise UnknownConstruct(f"{location}: {message}")
        self.warnings.append((location, message))

    def reference(self, location: str, identifier: str):
        self.references.append((location, identifier))

    def fresh_anon(self) -> str:
        self.anon_counter += 1
        return f"{model.ANON_RESTRICTION_PREFIX}{self.anon_counter}"

    # -- top level ----------------------------------------------------------

    def parse(self, data: bytes | str) -> ParseReport:
        try:
            root = ET.fromstring(data)
        except ET.ParseError as exc:
            raise MalformedXml(str(exc)) from exc
        if root.tag != f"{{{RDF_NS}}}RDF":
            raise MalformedXml(f"expected rdf:RDF document root, got {_qname(root.tag)}")
        for el in root:
            self.top_level(el)
        return ParseReport(self.finish(), self.warnings)

    def top_level(self, el: ET.Element):
        tag = el.tag
        if tag == _daml("Ontology"):
            self.parse_ontology_header(el)
        elif tag == _daml("Class"):
            self.parse_class(el)
        elif tag == _daml("Restriction"):
            rid = self.element_id(el) or self.fresh_anon()
            self.parse_restriction(el, rid)
        elif tag in _PROPERTY_TAGS:
            self.parse_property(el)
        elif tag.startswith((f"{{{DAML_NS}}}", f"{{{RDFS_NS}}}", f"{{{RDF_NS}}}")):
            self.skip(_qname(tag), "unsupported construct")
        else:
            self.parse_instance(el)

    def element_id(self, el: ET.Element) -> str:
        ident = el.get(_RDF_ID)
        if ident:
            return ident
        return _resolve_ref(el.get(_RDF_ABOUT, ""))

    def parse_ontology_header(self, el: ET.Element):
        ident = self.element_id(el)
        if ident:
            self.ontology_id = ident
        for child in el:
            if child.tag == _daml("versionInfo"):
                self.version_info = (child.text or "").strip()
            elif child.tag == _rdfs("comment"):
                self.comment = (child.text or "").strip()
            elif child.tag == _rdfs("label"):
                pass
            elif child.tag == _daml("imports"):
                target = _resolve_ref(child.get(_RDF_RESOURCE, ""))
                if target:
                    self.imports.add(target)
            else:
                self.skip(f"daml:Ontology > {_qname(child.tag)}", "unsupported construct")

    # -- classes ------------------------------------------------------------

    def parse_class(self, el: ET.Element):
        cid = self.element_id(el)
        if not cid:
            self.skip("daml:Class", "class without rdf:ID or rdf:about")
            return
        loc = f"daml:Class[{cid}]"
        label = comment = ""
        relations: dict[str, set[str]] = {k: set() for k in _RELATION_FIELDS}
        one_of: list[str] = []
        for child in el:
            tag = child.tag
            if tag == _rdfs("label"):
                label = (child.text or "").strip()
            elif tag == _rdfs("comment"):
                comment = (child.text or "").strip()
            elif tag in _CLASS_RELATIONS:
                kind = _CLASS_RELATIONS[tag]
                for target in self.parse_relation_targets(child, f"{loc} > {_qname(tag)}"):
                    relations[kind].add(target)
            elif tag == _daml("oneOf"):
                for item in child:
                    ref = self.element_id(item) or _resolve_ref(item.get(_RDF_RESOURCE, ""))
                    if ref:
                        self.reference(f"{loc} > daml:oneOf", ref)
                        one_of.append(ref)
                    else:
                        self.skip(f"{loc} > daml:oneOf", "item without reference")
            else:
                self.skip(f"{loc} > {_qname(tag)}", "unsupported construct")

        existing = self.classes.get(cid)
        merged = ClassDef(
            class_id=cid,
            label=label or (existing.label if existing else ""),
            comment=comment or (existing.comment if existing else ""),
            sub_class_of=frozenset(relations["subClassOf"]) | (existing.sub_class_of if existing else frozenset()),
            disjoint_with=frozenset(relations["disjointWith"]) | (existing.disjoint_with if existing else frozenset()),
            same_class_as=frozenset(relations["sameClassAs"]) | (existing.same_class_as if existing else frozenset()),
            complement_of=frozenset(relations["complementOf"]) | (existing.complement_of if existing else frozenset()),
            union_of=frozenset(relations["unionOf"]) | (existing.union_of if existing else frozenset()),
            intersection_of=frozenset(relations["intersectionOf"]) | (existing.intersection_of if existing else frozenset()),
            disjoint_union_of=frozenset(relations["disjointUnionOf"]) | (existing.disjoint_union_of if existing else frozenset()),
            one_of=(existing.one_of if existing else ()) + tuple(one_of),
        )
        self.classes[cid] = merged

    def parse_relation_targets(self, el: ET.Element, loc: str) -> list[str]:
        """Targets of a class relation: a resource ref, nested restrictions, or a collection."""
        targets = []
        resource = el.get(_RDF_RESOURCE)
        if resource:
            ref = _resolve_ref(resource)
            self.reference(loc, ref)
            targets.append(ref)
        for item in el:
            if item.tag == _daml("Restriction"):
                rid = self.element_id(item) or self.fresh_anon()
                if self.parse_restriction(item, rid):
                    targets.append(rid)
            elif item.get(_RDF_ABOUT) or item.get(_RDF_RESOURCE):
                ref = self.element_id(item) or _resolve_ref(item.get(_RDF_RESOURCE, ""))
                self.reference(loc, ref)
                targets.append(ref)
            else:
                self.skip(f"{loc} > {_qname(item.tag)}", "unsupported construct")
        return targets

    # -- restrictions -------------------------------------------------------

    def parse_restriction(self, el: ET.Element, rid: str) -> bool:
        loc = f"daml:Restriction[{rid}]"
        fields: dict = {}
        qfields: dict = {}
        has_class_q = None
        for child in el:
            tag = child.tag
            if tag == _daml("onProperty"):
                ref = _resolve_ref(child.get(_RDF_RESOURCE, ""))
                self.reference(loc, ref)
                fields["on_property"] = ref
            elif tag in (_daml("toClass"), _daml("hasClass")):
                ref = _resolve_ref(child.get(_RDF_RESOURCE, ""))
                if not ref:
                    self.skip(loc, f"{_qname(tag)} without rdf:resource")
                    return False
                self.reference(loc, ref)
                fields["to_class" if tag == _daml("toClass") else "has_class"] = ref
            elif tag == _daml("hasValue"):
                resource = child.get(_RDF_RESOURCE)
                if resource:
                    ref = _resolve_ref(resource)
                    self.reference(loc, ref)
                    fields["has_value"] = Ref(ref)
                else:
                    explicit = child.get(_RDF_DATATYPE)
                    fields["has_value"] = _PendingLiteral(
                        (child.text or "").strip(),
                        _resolve_ref(explicit) if explicit else None,
                    )
            elif tag in _CARD_TAGS or tag in _CARD_Q_TAGS:
                text = (child.text or "").strip()
                if not text.isdigit():
                    self.skip(loc, f"{_qname(tag)} is not a non-negative integer: {text!r}")
                    return False
                (fields if tag in _CARD_TAGS else qfields)[
                    _CARD_TAGS.get(tag) or _CARD_Q_TAGS[tag]
                ] = int(text)
            elif tag == _daml("hasClassQ"):
                has_class_q = _resolve_ref(child.get(_RDF_RESOURCE, ""))
                self.reference(loc, has_class_q)
            else:
                self.skip(f"{loc} > {_qname(tag)}", "unsupported construct")
        if not fields.get("on_property"):
            self.skip(loc, "restriction without daml:onProperty")
            return False
        if qfields and not has_class_q:
            self.skip(loc, "qualified cardinality without daml:hasClassQ")
            return False
        if has_class_q:
            fields["qualifier"] = Qualifier(has_class_q, **qfields)
        if all(fields.get(k) is None for k in (
            "to_class", "has_class", "has_value", "min_c", "max_c", "exact_c", "qualifier",
        )):
            self.skip(loc, "restriction without any constraint")
            return False
        self.raw_restrictions[rid] = fields
        return True

    # -- properties ---------------------------------------------------------

    def parse_property(self, el: ET.Element):
        kind, characteristic = _PROPERTY_TAGS[el.tag]
        pid = self.element_id(el)
        if not pid:
            self.skip(_qname(el.tag), "property without rdf:ID or rdf:about")
            return
        loc = f"{_qname(el.tag)}[{pid}]"
        comment = ""
        sets: dict[str, set[str]] = {
            "domain": set(), "range": set(), "sub_property_of": set(),
            "same_property_as": set(), "inverse_of": set(),
        }
        tagmap = {
            _rdfs("domain"): "domain",
            _rdfs("range"): "range",
            _rdfs("subPropertyOf"): "sub_property_of",
            _daml("samePropertyAs"): "same_property_as",
            _daml("inverseOf"): "inverse_of",
        }
        for child in el:
            if child.tag == _rdfs("comment"):
                comment = (child.text or "").strip()
            elif child.tag == _rdfs("label"):
                pass
            elif child.tag in tagmap:
                ref = _resolve_ref(child.get(_RDF_RESOURCE, ""))
                if ref:
                    self.reference(f"{loc} > {_qname(child.tag)}", ref)
                    sets[tagmap[child.tag]].add(ref)
            else:
                self.skip(f"{loc} > {_qname(child.tag)}", "unsupported construct")

        existing = self.properties.get(pid)
        if existing is None:
            merged_kind = kind or PropertyKind.OBJECT
        elif kind is not None and el.tag in (_daml("ObjectProperty"), _daml("DatatypeProperty")):
            merged_kind = kind
        else:
            merged_kind = existing.kind
        if el.tag in (_daml("ObjectProperty"), _daml("DatatypeProperty")):
            self.explicit_kind.add(pid)
        elif existing is not None and pid in self.explicit_kind:
            merged_kind = existing.kind
        characteristics = (existing.characteristics if existing else frozenset())
        if characteristic:
            characteristics = characteristics | {characteristic}
        self.properties[pid] = PropertyDef(
            property_id=pid,
            kind=merged_kind,
            comment=comment or (existing.comment if existing else ""),
            domain=frozenset(sets["domain"]) | (existing.domain if existing else frozenset()),
            range=frozenset(sets["range"]) | (existing.range if existing else frozenset()),
            sub_property_of=frozenset(sets["sub_property_of"]) | (existing.sub_property_of if existing else frozenset()),
            same_property_as=frozenset(sets["same_property_as"]) | (existing.same_property_as if existing else frozenset()),
            inverse_of=frozenset(sets["inverse_of"]) | (existing.inverse_of if existing else frozenset()),
            characteristics=characteristics,
        )

    # -- instances ----------------------------------------------------------

    def parse_instance(self, el: ET.Element):
        class_id = _tag_identifier(el.tag)
        iid = self.element_id(el)
        if not iid:
            self.skip(f"instance of {class_id}", "instance without rdf:ID or rdf:about")
            return
        loc = f"{class_id}[{iid}]"
        self.reference(loc, class_id)
        different: set[str] = set()
        same: set[str] = set()
        for child in el:
            tag = child.tag
            if tag == _daml("differentIndividualFrom") or tag == _daml("sameIndividualAs"):
                ref = _resolve_ref(child.get(_RDF_RESOURCE, ""))
                if ref:
                    self.reference(loc, ref)
                    (different if tag == _daml("differentIndividualFrom") else same).add(ref)
            elif tag in (_rdfs("label"), _rdfs("comment")):
                pass
            elif tag.startswith((f"{{{DAML_NS}}}", f"{{{RDFS_NS}}}", f"{{{RDF_NS}}}")):
                self.skip(f"{loc} > {_qname(tag)}", "unsupported construct")
            else:
                pid = _tag_identifier(tag)
                self.reference(loc, pid)
                resource = child.get(_RDF_RESOURCE)
                if resource is not None:
                    ref = _resolve_ref(resource)
                    self.reference(loc, ref)
                    self.assertions.append((iid, pid, Ref(ref)))
                else:
                    explicit = child.get(_RDF_DATATYPE)
                    self.assertions.append((iid, pid, _PendingLiteral(
                        (child.text or "").strip(),
                        _resolve_ref(explicit) if explicit else None,
                    )))

        existing = self.instances.get(iid)
        self.instances[iid] = InstanceDef(
            instance_id=iid,
            class_id=class_id,
            assertions=existing.assertions if existing else (),
            different_from=frozenset(different) | (existing.different_from if existing else frozenset()),
            same_as=frozenset(same) | (existing.same_as if existing else frozenset()),
        )

    # -- finalization -------------------------------------------------------

    def finish(self) -> OntologyDoc:
        restrictions: dict[str, Restriction] = {}
        for rid, fields in self.raw_restrictions.items():
            has_value = fields.get("has_value")
            if isinstance(has_value, _PendingLiteral):
                fields["has_value"] = self.typed_literal(has_value, fields["on_property"])
            restrictions[rid] = Restriction(restriction_id=rid, **fields)

        by_instance: dict[str, list[tuple[str, Value]]] = {}
        for iid, pid, value in self.assertions:
            if isinstance(value, _PendingLiteral):
                value = self.typed_literal(value, pid)
            by_instance.setdefault(iid, []).append((pid, value))
        for iid, asserted in by_instance.items():
            self.instances[iid] = replace(self.instances[iid], assertions=tuple(asserted))

        doc = OntologyDoc(
            ontology_id=self.ontology_id or "unnamed",
            version_info=self.version_info,
            comment=self.comment,
            imports=frozenset(self.imports),
            classes=self.classes,
            properties=self.properties,
            restrictions=restrictions,
            instances=self.instances,
        )
        for loc, ident in self.references:
            if ident and not doc.resolves(ident):
                raise DanglingReference(f"{loc}: {ident!r} is never declared")
        return doc

    def typed_literal(self, pending: _PendingLiteral, property_id: str) -> Literal:
        """Best-effort datatype: explicit rdf:datatype, then the property's range, else string."""
        candidates = []
        if pending.explicit:
            candidates.append(pending.explicit)
        prop = self.properties.get(property_id)
        if prop is not None:
            ranged = sorted(prop.range & model.DATATYPES)
            if len(ranged) == 1:
                candidates.append(ranged[0])
        for datatype in candidates:
            if datatype in model.DATATYPES and model.literal_parses(pending.lexical, datatype):
                return Literal(pending.lexical, datatype)
        return Literal(pending.lexical, "string")


def parse_ontology(data: bytes | str, strict: bool = False) -> ParseReport:
    """Parse a DAML+OIL document; unknown constructs warn (lenient) or raise (strict)."""
    return _Parser(strict).parse(data)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _ref_attr(identifier: str) -> str:
    if identifier in model.DATATYPES:
        return XSD_NS + identifier
    if model.is_iri(identifier):
        return identifier
    return "#" + identifier


class _Writer:
    def __init__(self):
        self.lines: list[str] = []
        self.extra_ns: dict[str, str] = {}  # namespace iri -> prefix

    def prefix_for(self, iri: str) -> str:
        if iri not in self.extra_ns:
            self.extra_ns[iri] = f"ns{len(self.extra_ns) + 1}"
        return self.extra_ns[iri]

    def element_name(self, identifier: str) -> str:
        """Tag for a typed element; IRIs are split into namespace + local part."""
        if not model.is_iri(identifier):
            return identifier
        local = model.local_name(identifier)
        ns = identifier[: len(identifier) - len(local)]
        return f"{self.prefix_for(ns)}:{local}"

    def line(self, depth: int, text: str):
        self.lines.append("  " * depth + text)

    def id_attr(self, identifier: str) -> str:
        if model.is_iri(identifier):
            return f"rdf:about={quoteattr(identifier)}"
        return f"rdf:ID={quoteattr(identifier)}"

    def simple(self, depth: int, tag: str, text: str):
        self.line(depth, f"<{tag}>{escape(text)}</{tag}>")

    def resource(self, depth: int, tag: str, identifier: str):
        self.line(depth, f"<{tag} rdf:resource={quoteattr(_ref_attr(identifier))}/>")


def serialize_ontology(doc: OntologyDoc) -> bytes:
    """Emit deterministic XML (classes, properties, instances, each sorted by id)."""
    from .consistency import check_ontology

    violations = check_ontology(doc)
    if violations:
        raise InconsistentDoc(violations)

    w = _Writer()
    depth = 1
    w.line(depth, f"<daml:Ontology {w.id_attr(doc.ontology_id)}>")
    if doc.version_info:
        w.simple(depth + 1, "daml:versionInfo", doc.version_info)
    if doc.comment:
        w.simple(depth + 1, "rdfs:comment", doc.comment)
    for imported in sorted(doc.imports):
        w.resource(depth + 1, "daml:imports", imported)
    w.line(depth, "</daml:Ontology>")

    for cid in sorted(doc.classes):
        _write_class(w, doc, doc.classes[cid], depth)
    for pid in sorted(doc.properties):
        _write_property(w, doc.properties[pid], depth)
    _write_orphan_restrictions(w, doc, depth)
    for iid in sorted(doc.instances):
        _write_instance(w, doc.instances[iid], depth)

    body = "\n".join(w.lines)
    ns_attrs = [
        f'xmlns:rdf="{RDF_NS}"',
        f'xmlns:rdfs="{RDFS_NS}"',
        f'xmlns:daml="{DAML_NS}"',
    ]
    for iri in sorted(w.extra_ns):
        ns_attrs.append(f'xmlns:{w.extra_ns[iri]}="{iri}"')
    text = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        + "<rdf:RDF\n    " + "\n    ".join(ns_attrs) + ">\n"
        + body + "\n</rdf:RDF>\n"
    )
    return text.encode("utf-8")


_RELATION_TAGS = [
    ("subClassOf", "rdfs:subClassOf"),
    ("sameClassAs", "daml:sameClassAs"),
    ("disjointWith", "daml:disjointWith"),
    ("disjointUnionOf", "daml:disjointUnionOf"),
    ("unionOf", "daml:unionOf"),
    ("intersectionOf", "daml:intersectionOf"),
    ("complementOf", "daml:complementOf"),
]


def _write_class(w: _Writer, doc: OntologyDoc, cls: ClassDef, depth: int):
    w.line(depth, f"<daml:Class {w.id_attr(cls.class_id)}>")
    if cls.label:
        w.simple(depth + 1, "rdfs:label", cls.label)
    if cls.comment:
        w.simple(depth + 1, "rdfs:comment", cls.comment)
    targets = cls.relation_targets()
    for kind, tag in _RELATION_TAGS:
        named = sorted(t for t in targets[kind] if t not in doc.restrictions)
        anon = sorted(
            (t for t in targets[kind] if t in doc.restrictions),
            key=lambda t: model._restriction_content_key(doc.restrictions[t]),
        )
        for target in named:
            w.resource(depth + 1, tag, target)
        for rid in anon:
            w.line(depth + 1, f"<{tag}>")
            _write_restriction(w, doc.restrictions[rid], depth + 2)
            w.line(depth + 1, f"</{tag}>")
    if cls.one_of:
        w.line(depth + 1, '<daml:oneOf rdf:parseType="daml:collection">')
        for member in cls.one_of:
            w.line(depth + 2, f"<daml:Thing rdf:about={quoteattr(_ref_attr(member))}/>")
        w.line(depth + 1, "</daml:oneOf>")
    w.line(depth, "</daml:Class>")


def _write_restriction(w: _Writer, r: Restriction, depth: int):
    w.line(depth, "<daml:Restriction>")
    w.resource(depth + 1, "daml:onProperty", r.on_property)
    if r.to_class is not None:
        w.resource(depth + 1, "daml:toClass", r.to_class)
    if r.has_class is not None:
        w.resource(depth + 1, "daml:hasClass", r.has_class)
    if r.has_value is not None:
        if isinstance(r.has_value, Ref):
            w.resource(depth + 1, "daml:hasValue", r.has_value.target)
        else:
            w.line(depth + 1, (
                f"<daml:hasValue rdf:datatype={quoteattr(XSD_NS + r.has_value.datatype)}>"
                f"{escape(r.has_value.lexical)}</daml:hasValue>"
            ))
    for value, tag in (
        (r.min_c, "daml:minCardinality"),
        (r.max_c, "daml:maxCardinality"),
        (r.exact_c, "daml:cardinality"),
    ):
        if value is not None:
            w.simple(depth + 1, tag, str(value))
    q = r.qualifier
    if q is not None:
        w.resource(depth + 1, "daml:hasClassQ", q.has_class_q)
        for value, tag in (
            (q.min_cq, "daml:minCardinalityQ"),
            (q.max_cq, "daml:maxCardinalityQ"),
            (q.exact_cq, "daml:cardinalityQ"),
        ):
            if value is not None:
                w.simple(depth + 1, tag, str(value))
    w.line(depth, "</daml:Restriction>")


def _write_orphan_restrictions(w: _Writer, doc: OntologyDoc, depth: int):
    anchored: set[str] = set()
    for cls in doc.classes.values():
        for targets in cls.relation_targets().values():
            anchored |= targets & set(doc.restrictions)
    orphans = sorted(
        set(doc.restrictions) - anchored,
        key=lambda t: model._restriction_content_key(doc.restrictions[t]),
    )
    for rid in orphans:
        _write_restriction(w, doc.restrictions[rid], depth)


def _write_property(w: _Writer, prop: PropertyDef, depth: int):
    tag = "daml:ObjectProperty" if prop.kind is PropertyKind.OBJECT else "daml:DatatypeProperty"
    w.line(depth, f"<{tag} {w.id_attr(prop.property_id)}>")
    if prop.comment:
        w.simple(depth + 1, "rdfs:comment", prop.comment)
    for child_tag, targets in (
        ("rdfs:subPropertyOf", prop.sub_property_of),
        ("rdfs:domain", prop.domain),
        ("rdfs:range", prop.range),
        ("daml:samePropertyAs", prop.same_property_as),
        ("daml:inverseOf", prop.inverse_of),
    ):
        for target in sorted(targets):
            w.resource(depth + 1, child_tag, target)
    w.line(depth, f"</{tag}>")
    if model.TRANSITIVE in prop.characteristics:
        w.line(depth, f"<daml:TransitiveProperty rdf:about={quoteattr(_ref_attr(prop.property_id))}/>")
    if model.UNIQUE in prop.characteristics:
        w.line(depth, f"<daml:UniqueProperty rdf:about={quoteattr(_ref_attr(prop.property_id))}/>")


def _write_instance(w: _Writer, inst: InstanceDef, depth: int):
    tag = w.element_name(inst.class_id)
    w.line(depth, f"<{tag} {w.id_attr(inst.instance_id)}>")
    for pid, value in inst.assertions:
        ptag = w.element_name(pid)
        if isinstance(value, Ref):
            w.line(depth + 1, f"<{ptag} rdf:resource={quoteattr(_ref_attr(value.target))}/>")
        else:
            w.line(depth + 1, (
                f"<{ptag} rdf:datatype={quoteattr(XSD_NS + value.datatype)}>"
                f"{escape(value.lexical)}</{ptag}>"
            ))
    for target in sorted(inst.different_from):
        w.resource(depth + 1, "daml:differentIndividualFrom", target)
    for target in sorted(inst.same_as):
        w.resource(depth + 1, "daml:sameIndividualAs", target)
    w.line(depth, f"</{tag}>")
