"""Consistency assurance: document checks, guarded edits, filters, instance validation.

Only consistent documents can be produced through `apply_edit`: an edit either
applies cleanly, cascades reference removals after a deletion, or is rejected
with the violations that would result.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import InconsistentInputDoc, UnknownClass, UnknownInstance
from .model import (
    DATATYPES, ClassDef, InstanceDef, InstanceGraph, Literal, OntologyDoc,
    PropertyDef, PropertyKind, Ref, Restriction, Value,
    ancestor_depths, ancestors, effective_restrictions,
)


class ViolationCode(Enum):
    CardinalityBounds = "CardinalityBounds"
    ToClassExclusion = "ToClassExclusion"
    AncestorInDisjointWith = "AncestorInDisjointWith"
    AncestorInComplementOf = "AncestorInComplementOf"
    SubClassCycle = "SubClassCycle"
    SubPropertyCycle = "SubPropertyCycle"
    DanglingReference = "DanglingReference"
    CardinalityUnmet = "CardinalityUnmet"
    CardinalityExceeded = "CardinalityExceeded"
    RangeViolation = "RangeViolation"
    DomainViolation = "DomainViolation"
    HasValueMissing = "HasValueMissing"
    QualifiedCardinality = "QualifiedCardinality"
    UniquePropertyViolation = "UniquePropertyViolation"


_CODE_ORDER = {code: i for i, code in enumerate(ViolationCode)}


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    subjects: tuple[str, ...]
    message: str

    def render(self) -> str:
        return f"{self.code.value} {' '.join(self.subjects)}: {self.message}"


def _sort(violations: list[Violation]) -> list[Violation]:
    return sorted(violations, key=lambda v: (_CODE_ORDER[v.code], v.subjects))


# ---------------------------------------------------------------------------
# document checks
# ---------------------------------------------------------------------------

def check_ontology(doc: OntologyDoc) -> list[Violation]:
    """All violations of the document-level rules; empty list means consistent."""
    out: list[Violation] = []
    out += _check_restriction_bounds(doc)
    out += _check_cycles(doc)
    out += _check_hierarchy_conflicts(doc)
    out += _check_references(doc)
    return _sort(out)


def _check_restriction_bounds(doc: OntologyDoc) -> list[Violation]:
    out = []
    for rid in sorted(doc.restrictions):
        r = doc.restrictions[rid]
        if r.min_c is not None and r.max_c is not None and r.min_c > r.max_c:
            out.append(Violation(
                ViolationCode.CardinalityBounds, (rid,),
                f"minCardinality {r.min_c} exceeds maxCardinality {r.max_c}",
            ))
        if r.exact_c is not None and (r.min_c is not None or r.max_c is not None):
            out.append(Violation(
                ViolationCode.CardinalityBounds, (rid,),
                "cardinality combined with minCardinality/maxCardinality",
            ))
        q = r.qualifier
        if q is not None:
            if q.min_cq is not None and q.max_cq is not None and q.min_cq > q.max_cq:
                out.append(Violation(
                    ViolationCode.CardinalityBounds, (rid,),
                    f"minCardinalityQ {q.min_cq} exceeds maxCardinalityQ {q.max_cq}",
                ))
            if q.exact_cq is not None and (q.min_cq is not None or q.max_cq is not None):
                out.append(Violation(
                    ViolationCode.CardinalityBounds, (rid,),
                    "cardinalityQ combined with minCardinalityQ/maxCardinalityQ",
                ))
        if r.to_class is not None and (r.has_class is not None or r.qualifier is not None):
            out.append(Violation(
                ViolationCode.ToClassExclusion, (rid,),
                "toClass excludes hasClass and qualification",
            ))
    return out


def _cycle_violations(edges: dict[str, set[str]], code: ViolationCode, what: str) -> list[Violation]:
    # Tarjan SCC; any component of size > 1, or a self-loop, is a cycle.
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    cycles: list[tuple[str, ...]] = []

    def strongconnect(v: str):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in edges.get(v, ()):
            if w not in edges:
                continue
            if w not in index:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            component = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                component.append(w)
                if w == v:
                    break
            if len(component) > 1 or v in edges.get(v, ()):
                cycles.append(tuple(sorted(component)))

    for v in sorted(edges):
        if v not in index:
            strongconnect(v)
    return [
        Violation(code, members, f"{what} cycle through {', '.join(members)}")
        for members in sorted(cycles)
    ]


def _check_cycles(doc: OntologyDoc) -> list[Violation]:
    class_edges = {
        cid: {p for p in c.sub_class_of if p in doc.classes}
        for cid, c in doc.classes.items()
    }
    prop_edges = {
        pid: {p for p in prop.sub_property_of if p in doc.properties}
        for pid, prop in doc.properties.items()
    }
    return (
        _cycle_violations(class_edges, ViolationCode.SubClassCycle, "subClassOf")
        + _cycle_violations(prop_edges, ViolationCode.SubPropertyCycle, "subPropertyOf")
    )


def _check_hierarchy_conflicts(doc: OntologyDoc) -> list[Violation]:
    out = []
    lineage = {cid: set(ancestor_depths(doc, cid)) for cid in doc.classes}
    for cid in sorted(doc.classes):
        cls = doc.classes[cid]
        for members, code, rel in (
            (cls.disjoint_with, ViolationCode.AncestorInDisjointWith, "disjointWith"),
            (cls.complement_of, ViolationCode.AncestorInComplementOf, "complementOf"),
        ):
            for other in sorted(members):
                if other not in doc.classes:
                    continue
                if other == cid or other in lineage[cid] or cid in lineage[other]:
                    out.append(Violation(
                        code, (cid, other),
                        f"{other} is in the {rel} list of {cid} but related by subClassOf",
                    ))
    return out


def _reference_positions(doc: OntologyDoc):
    """Yield (referrer, referenced id, allowed kinds) for every stored reference."""
    for cid in sorted(doc.classes):
        cls = doc.classes[cid]
        for kind, targets in sorted(cls.relation_targets().items()):
            for t in sorted(targets):
                yield cid, t, ("class", "restriction"), kind
        for member in cls.one_of:
            yield cid, member, ("instance",), "oneOf"
    for pid in sorted(doc.properties):
        prop = doc.properties[pid]
        for t in sorted(prop.domain):
            yield pid, t, ("class",), "domain"
        for t in sorted(prop.range):
            yield pid, t, ("class", "datatype"), "range"
        for t in sorted(prop.sub_property_of):
            yield pid, t, ("property",), "subPropertyOf"
        for t in sorted(prop.same_property_as):
            yield pid, t, ("property",), "samePropertyAs"
        for t in sorted(prop.inverse_of):
            yield pid, t, ("property",), "inverseOf"
    for rid in sorted(doc.restrictions):
        r = doc.restrictions[rid]
        yield rid, r.on_property, ("property",), "onProperty"
        if r.to_class is not None:
            yield rid, r.to_class, ("class", "datatype"), "toClass"
        if r.has_class is not None:
            yield rid, r.has_class, ("class", "datatype"), "hasClass"
        if isinstance(r.has_value, Ref):
            yield rid, r.has_value.target, ("instance",), "hasValue"
        if r.qualifier is not None:
            yield rid, r.qualifier.has_class_q, ("class", "datatype"), "hasClassQ"
    for iid in sorted(doc.instances):
        inst = doc.instances[iid]
        yield iid, inst.class_id, ("class",), "instanceOf"
        for pid, value in inst.assertions:
            yield iid, pid, ("property",), "assertion"
            if isinstance(value, Ref):
                yield iid, value.target, ("instance",), "assertion"
        for t in sorted(inst.different_from):
            yield iid, t, ("instance",), "differentIndividualFrom"
        for t in sorted(inst.same_as):
            yield iid, t, ("instance",), "sameIndividualAs"


def _kind_of(doc: OntologyDoc, identifier: str) -> str | None:
    if identifier in doc.classes:
        return "class"
    if identifier in doc.restrictions:
        return "restriction"
    if identifier in doc.properties:
        return "property"
    if identifier in doc.instances:
        return "instance"
    if identifier in DATATYPES:
        return "datatype"
    return None


def _check_references(doc: OntologyDoc) -> list[Violation]:
    out = []
    seen = set()
    for referrer, target, allowed, role in _reference_positions(doc):
        kind = _kind_of(doc, target)
        if kind in allowed:
            continue
        key = (referrer, target, role)
        if key in seen:
            continue
        seen.add(key)
        detail = "is never declared" if kind is None else f"is a {kind}, not {' or '.join(allowed)}"
        out.append(Violation(
            ViolationCode.DanglingReference, (referrer, target),
            f"{role} reference {target} {detail}",
        ))
    return out


# ---------------------------------------------------------------------------
# edits
# ---------------------------------------------------------------------------

RELATION_KINDS = (
    "subClassOf", "disjointWith", "sameClassAs", "complementOf",
    "unionOf", "intersectionOf", "disjointUnionOf", "oneOf",
    "subPropertyOf", "samePropertyAs", "inverseOf", "domain", "range", "import",
)

_CLASS_RELATION_FIELDS = {
    "subClassOf": "sub_class_of",
    "disjointWith": "disjoint_with",
    "sameClassAs": "same_class_as",
    "complementOf": "complement_of",
    "unionOf": "union_of",
    "intersectionOf": "intersection_of",
    "disjointUnionOf": "disjoint_union_of",
}

_PROPERTY_RELATION_FIELDS = {
    "subPropertyOf": "sub_property_of",
    "samePropertyAs": "same_property_as",
    "inverseOf": "inverse_of",
    "domain": "domain",
    "range": "range",
}


@dataclass(frozen=True)
class InsertClass:
    cls: ClassDef


@dataclass(frozen=True)
class UpdateClass:
    cls: ClassDef


@dataclass(frozen=True)
class DeleteClass:
    class_id: str


@dataclass(frozen=True)
class InsertProperty:
    prop: PropertyDef


@dataclass(frozen=True)
class UpdateProperty:
    prop: PropertyDef


@dataclass(frozen=True)
class DeleteProperty:
    property_id: str


@dataclass(frozen=True)
class InsertInstance:
    inst: InstanceDef


@dataclass(frozen=True)
class UpdateInstance:
    inst: InstanceDef


@dataclass(frozen=True)
class DeleteInstance:
    instance_id: str


@dataclass(frozen=True)
class InsertRestriction:
    restriction: Restriction


@dataclass(frozen=True)
class UpdateRestriction:
    restriction: Restriction


@dataclass(frozen=True)
class DeleteRestriction:
    restriction_id: str


@dataclass(frozen=True)
class InsertRelation:
    kind: str
    subject: str
    object: str


@dataclass(frozen=True)
class DeleteRelation:
    kind: str
    subject: str
    object: str


Edit = (
    InsertClass | UpdateClass | DeleteClass
    | InsertProperty | UpdateProperty | DeleteProperty
    | InsertInstance | UpdateInstance | DeleteInstance
    | InsertRestriction | UpdateRestriction | DeleteRestriction
    | InsertRelation | DeleteRelation
)


@dataclass(frozen=True)
class RemovedTuple:
    kind: str
    subject: str
    object: str


@dataclass(frozen=True)
class Applied:
    doc: OntologyDoc


@dataclass(frozen=True)
class Rejected:
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class Cascaded:
    doc: OntologyDoc
    removed: tuple[RemovedTuple, ...]


EditOutcome = Applied | Rejected | Cascaded

_MAX_CASCADE_ROUNDS = 100


def apply_edit(doc: OntologyDoc, edit: Edit) -> EditOutcome:
    """Apply one edit under the no-action / cascaded-action mechanisms."""
    if check_ontology(doc):
        raise InconsistentInputDoc(message="input document is already inconsistent")
    try:
        candidate = _apply_structural(doc, edit)
    except KeyError as exc:
        return Rejected((Violation(
            ViolationCode.DanglingReference, (str(exc.args[0]),),
            "edit target does not exist",
        ),))
    violations = check_ontology(candidate)
    if not violations:
        return Applied(candidate)
    is_deletion = isinstance(edit, (DeleteClass, DeleteProperty, DeleteInstance, DeleteRestriction))
    if is_deletion and all(v.code is ViolationCode.DanglingReference for v in violations):
        removed: list[RemovedTuple] = []
        current = candidate
        for _ in range(_MAX_CASCADE_ROUNDS):
            current, newly = _strip_dangling(current)
            removed.extend(newly)
            remaining = check_ontology(current)
            if not remaining:
                return Cascaded(current, tuple(removed))
            if not newly or any(v.code is not ViolationCode.DanglingReference for v in remaining):
                break
        return Rejected(tuple(violations))
    return Rejected(tuple(violations))


def _apply_structural(doc: OntologyDoc, edit: Edit) -> OntologyDoc:
    classes = dict(doc.classes)
    properties = dict(doc.properties)
    restrictions = dict(doc.restrictions)
    instances = dict(doc.instances)
    imports = set(doc.imports)

    if isinstance(edit, (InsertClass, UpdateClass)):
        if isinstance(edit, UpdateClass) and edit.cls.class_id not in classes:
            raise KeyError(edit.cls.class_id)
        classes[edit.cls.class_id] = edit.cls
    elif isinstance(edit, DeleteClass):
        del classes[edit.class_id]
    elif isinstance(edit, (InsertProperty, UpdateProperty)):
        if isinstance(edit, UpdateProperty) and edit.prop.property_id not in properties:
            raise KeyError(edit.prop.property_id)
        properties[edit.prop.property_id] = edit.prop
    elif isinstance(edit, DeleteProperty):
        del properties[edit.property_id]
    elif isinstance(edit, (InsertInstance, UpdateInstance)):
        if isinstance(edit, UpdateInstance) and edit.inst.instance_id not in instances:
            raise KeyError(edit.inst.instance_id)
        instances[edit.inst.instance_id] = edit.inst
    elif isinstance(edit, DeleteInstance):
        del instances[edit.instance_id]
    elif isinstance(edit, (InsertRestriction, UpdateRestriction)):
        if isinstance(edit, UpdateRestriction) and edit.restriction.restriction_id not in restrictions:
            raise KeyError(edit.restriction.restriction_id)
        restrictions[edit.restriction.restriction_id] = edit.restriction
    elif isinstance(edit, DeleteRestriction):
        del restrictions[edit.restriction_id]
    elif isinstance(edit, (InsertRelation, DeleteRelation)):
        return _apply_relation(doc, edit)
    else:
        raise TypeError(f"unsupported edit: {edit!r}")

    return replace(
        doc, classes=classes, properties=properties,
        restrictions=restrictions, instances=instances, imports=frozenset(imports),
    )


def _toggle(targets: frozenset[str], member: str, add: bool) -> frozenset[str]:
    return targets | {member} if add else targets - {member}


def _apply_relation(doc: OntologyDoc, edit: InsertRelation | DeleteRelation) -> OntologyDoc:
    add = isinstance(edit, InsertRelation)
    kind, subject, obj = edit.kind, edit.subject, edit.object
    if kind not in RELATION_KINDS:
        raise ValueError(f"unknown relation kind: {kind}")

    if kind == "import":
        imports = doc.imports | {obj} if add else doc.imports - {obj}
        return replace(doc, imports=imports)
    if kind == "oneOf":
        cls = doc.classes[subject]
        one_of = cls.one_of + (obj,) if add else tuple(m for m in cls.one_of if m != obj)
        classes = dict(doc.classes)
        classes[subject] = replace(cls, one_of=one_of)
        return replace(doc, classes=classes)
    if kind in _CLASS_RELATION_FIELDS:
        field_name = _CLASS_RELATION_FIELDS[kind]
        cls = doc.classes[subject]
        classes = dict(doc.classes)
        classes[subject] = replace(cls, **{field_name: _toggle(getattr(cls, field_name), obj, add)})
        return replace(doc, classes=classes)
    field_name = _PROPERTY_RELATION_FIELDS[kind]
    prop = doc.properties[subject]
    properties = dict(doc.properties)
    properties[subject] = replace(prop, **{field_name: _toggle(getattr(prop, field_name), obj, add)})
    return replace(doc, properties=properties)


def _strip_dangling(doc: OntologyDoc) -> tuple[OntologyDoc, list[RemovedTuple]]:
    """Remove every tuple or component whose reference no longer resolves to the right kind."""
    removed: list[RemovedTuple] = []

    def keep(targets: frozenset[str], owner: str, kinds, role: str) -> frozenset[str]:
        kept = set()
        for t in sorted(targets):
            if _kind_of(doc, t) in kinds:
                kept.add(t)
            else:
                removed.append(RemovedTuple(role, owner, t))
        return frozenset(kept)

    classes = {}
    for cid in sorted(doc.classes):
        cls = doc.classes[cid]
        one_of = []
        for member in cls.one_of:
            if _kind_of(doc, member) == "instance":
                one_of.append(member)
            else:
                removed.append(RemovedTuple("oneOf", cid, member))
        classes[cid] = replace(
            cls,
            sub_class_of=keep(cls.sub_class_of, cid, ("class", "restriction"), "subClassOf"),
            disjoint_with=keep(cls.disjoint_with, cid, ("class", "restriction"), "disjointWith"),
            same_class_as=keep(cls.same_class_as, cid, ("class", "restriction"), "sameClassAs"),
            complement_of=keep(cls.complement_of, cid, ("class", "restriction"), "complementOf"),
            union_of=keep(cls.union_of, cid, ("class", "restriction"), "unionOf"),
            intersection_of=keep(cls.intersection_of, cid, ("class", "restriction"), "intersectionOf"),
            disjoint_union_of=keep(cls.disjoint_union_of, cid, ("class", "restriction"), "disjointUnionOf"),
            one_of=tuple(one_of),
        )

    properties = {}
    for pid in sorted(doc.properties):
        prop = doc.properties[pid]
        properties[pid] = replace(
            prop,
            domain=keep(prop.domain, pid, ("class",), "domain"),
            range=keep(prop.range, pid, ("class", "datatype"), "range"),
            sub_property_of=keep(prop.sub_property_of, pid, ("property",), "subPropertyOf"),
            same_property_as=keep(prop.same_property_as, pid, ("property",), "samePropertyAs"),
            inverse_of=keep(prop.inverse_of, pid, ("property",), "inverseOf"),
        )

    restrictions = {}
    for rid in sorted(doc.restrictions):
        r = doc.restrictions[rid]
        ok = (
            _kind_of(doc, r.on_property) == "property"
            and (r.to_class is None or _kind_of(doc, r.to_class) in ("class", "datatype"))
            and (r.has_class is None or _kind_of(doc, r.has_class) in ("class", "datatype"))
            and (not isinstance(r.has_value, Ref) or _kind_of(doc, r.has_value.target) == "instance")
            and (r.qualifier is None or _kind_of(doc, r.qualifier.has_class_q) in ("class", "datatype"))
        )
        if ok:
            restrictions[rid] = r
        else:
            removed.append(RemovedTuple("restriction", rid, r.on_property))

    instances = {}
    for iid in sorted(doc.instances):
        inst = doc.instances[iid]
        if _kind_of(doc, inst.class_id) != "class":
            removed.append(RemovedTuple("instance", iid, inst.class_id))
            continue
        assertions = []
        for pid, value in inst.assertions:
            target_ok = not isinstance(value, Ref) or _kind_of(doc, value.target) == "instance"
            if _kind_of(doc, pid) == "property" and target_ok:
                assertions.append((pid, value))
            else:
                removed.append(RemovedTuple("assertion", iid, f"{pid}={value.as_text()}"))
        instances[iid] = replace(
            inst,
            assertions=tuple(assertions),
            different_from=keep(inst.different_from, iid, ("instance",), "differentIndividualFrom"),
            same_as=keep(inst.same_as, iid, ("instance",), "sameIndividualAs"),
        )

    return replace(
        doc, classes=classes, properties=properties,
        restrictions=restrictions, instances=instances,
    ), removed


# ---------------------------------------------------------------------------
# candidate filter
# ---------------------------------------------------------------------------

FILTERABLE_RELATIONS = (
    "disjointWith", "complementOf", "subClassOf", "sameClassAs",
    "unionOf", "intersectionOf", "disjointUnionOf",
)


def candidate_classes(doc: OntologyDoc, class_id: str, relation_kind: str) -> set[str]:
    """Named classes whose insertion into the relation would be Applied.

    Implemented as a direct filter (no edit simulation): for disjointWith and
    complementOf no ancestor, descendant, or the class itself qualifies; for
    subClassOf the edge must not close a cycle nor put any disjoint or
    complement pair into an ancestry relation.
    """
    if class_id not in doc.classes:
        raise UnknownClass(class_id)
    if relation_kind not in FILTERABLE_RELATIONS:
        raise ValueError(f"unsupported relation kind: {relation_kind}")
    named = set(doc.classes)
    if relation_kind in ("disjointWith", "complementOf"):
        lineage = set(ancestors(doc, class_id))
        below = {c for c in named if class_id in ancestor_depths(doc, c)}
        return named - lineage - below - {class_id}
    if relation_kind == "subClassOf":
        return {c for c in named if _subclass_edge_ok(doc, class_id, c)}
    return named


def _subclass_edge_ok(doc: OntologyDoc, child: str, parent: str) -> bool:
    if parent == child:
        return False
    parent_lineage = {parent} | set(ancestor_depths(doc, parent))
    if child in parent_lineage:
        return False  # would close a cycle

    def lineage_after(cid: str) -> set[str]:
        anc = set(ancestor_depths(doc, cid))
        if cid == child or child in anc:
            anc |= parent_lineage
        return anc

    for cid, cls in doc.classes.items():
        for other in cls.disjoint_with | cls.complement_of:
            if other not in doc.classes:
                continue
            if other == cid or other in lineage_after(cid) or cid in lineage_after(other):
                return False
    return True


# ---------------------------------------------------------------------------
# instance validation
# ---------------------------------------------------------------------------

def validate_instance(doc: OntologyDoc, graph: InstanceGraph, instance_id: str) -> list[Violation]:
    """Check one instance's assertions against its class's effective restrictions."""
    inst = graph.instances.get(instance_id)
    if inst is None:
        raise UnknownInstance(instance_id)
    lookup = {**doc.instances, **graph.instances}
    out: list[Violation] = []

    if inst.class_id not in doc.classes:
        out.append(Violation(
            ViolationCode.DanglingReference, (instance_id, inst.class_id),
            f"instance class {inst.class_id} is not a named class",
        ))
        return _sort(out)

    values: dict[str, list[Value]] = {}
    for pid, value in inst.assertions:
        values.setdefault(pid, []).append(value)

    for eff in effective_restrictions(doc, inst.class_id):
        out += _check_restriction_on_instance(doc, lookup, inst, eff.restriction, values)

    lineage = {inst.class_id, *ancestors(doc, inst.class_id)}
    for pid in sorted(values):
        prop = doc.properties.get(pid)
        if prop is None:
            out.append(Violation(
                ViolationCode.DanglingReference, (instance_id, pid),
                f"assertion uses undeclared property {pid}",
            ))
            continue
        if prop.domain and not (prop.domain & lineage):
            out.append(Violation(
                ViolationCode.DomainViolation, (instance_id, pid),
                f"{inst.class_id} is outside the domain of {pid}",
            ))
        for value in values[pid]:
            for target in sorted(prop.range):
                ok, dangling = _conforms(doc, lookup, value, target)
                if dangling is not None:
                    out.append(dangling_value(instance_id, pid, dangling))
                elif not ok:
                    out.append(Violation(
                        ViolationCode.RangeViolation, (instance_id, pid, value.as_text()),
                        f"value is not a {target}",
                    ))
        if prop.is_unique and len(values[pid]) > 1:
            out.append(Violation(
                ViolationCode.UniquePropertyViolation, (instance_id, pid),
                f"unique property {pid} has {len(values[pid])} values",
            ))
    return _sort(_dedupe(out))


def dangling_value(instance_id: str, pid: str, target: str) -> Violation:
    return Violation(
        ViolationCode.DanglingReference, (instance_id, pid, target),
        f"referenced individual {target} does not exist",
    )


def _dedupe(violations: list[Violation]) -> list[Violation]:
    seen = set()
    out = []
    for v in violations:
        key = (v.code, v.subjects, v.message)
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def _check_restriction_on_instance(
    doc: OntologyDoc,
    lookup: dict[str, InstanceDef],
    inst: InstanceDef,
    r: Restriction,
    values: dict[str, list[Value]],
) -> list[Violation]:
    out = []
    vals = values.get(r.on_property, [])
    n = len(vals)
    iid = inst.instance_id

    if r.exact_c is not None and n != r.exact_c:
        code = ViolationCode.CardinalityUnmet if n < r.exact_c else ViolationCode.CardinalityExceeded
        out.append(Violation(
            code, (iid, r.on_property),
            f"expected exactly {r.exact_c} value(s) for {r.on_property}, found {n}",
        ))
    if r.min_c is not None and n < r.min_c:
        out.append(Violation(
            ViolationCode.CardinalityUnmet, (iid, r.on_property),
            f"expected at least {r.min_c} value(s) for {r.on_property}, found {n}",
        ))
    if r.max_c is not None and n > r.max_c:
        out.append(Violation(
            ViolationCode.CardinalityExceeded, (iid, r.on_property),
            f"expected at most {r.max_c} value(s) for {r.on_property}, found {n}",
        ))

    if r.to_class is not None:
        for value in vals:
            ok, dangling = _conforms(doc, lookup, value, r.to_class)
            if dangling is not None:
                out.append(dangling_value(iid, r.on_property, dangling))
            elif not ok:
                out.append(Violation(
                    ViolationCode.RangeViolation, (iid, r.on_property, value.as_text()),
                    f"value is not a {r.to_class}",
                ))
    if r.has_class is not None:
        if not any(_conforms(doc, lookup, v, r.has_class)[0] for v in vals):
            out.append(Violation(
                ViolationCode.CardinalityUnmet, (iid, r.on_property),
                f"no value of {r.has_class} for {r.on_property}",
            ))
    if r.has_value is not None and r.has_value not in vals:
        out.append(Violation(
            ViolationCode.HasValueMissing, (iid, r.on_property),
            f"required value {r.has_value.as_text()} for {r.on_property} is missing",
        ))
    q = r.qualifier
    if q is not None:
        m = sum(1 for v in vals if _conforms(doc, lookup, v, q.has_class_q)[0])
        expected = None
        if q.exact_cq is not None and m != q.exact_cq:
            expected = f"exactly {q.exact_cq}"
        elif q.min_cq is not None and m < q.min_cq:
            expected = f"at least {q.min_cq}"
        elif q.max_cq is not None and m > q.max_cq:
            expected = f"at most {q.max_cq}"
        if expected is not None:
            out.append(Violation(
                ViolationCode.QualifiedCardinality, (iid, r.on_property),
                f"expected {expected} value(s) of {q.has_class_q} for {r.on_property}, found {m}",
            ))
    return out


def _conforms(
    doc: OntologyDoc,
    lookup: dict[str, InstanceDef],
    value: Value,
    target: str,
) -> tuple[bool, str | None]:
    """Whether the value belongs to the target class or datatype.

    Returns (ok, dangling-id); a dangling reference is reported separately
    rather than as a range mismatch.
    """
    if target in DATATYPES:
        return isinstance(value, Literal) and value.datatype == target, None
    if isinstance(value, Literal):
        return False, None
    referenced = lookup.get(value.target)
    if referenced is None:
        return False, value.target
    if referenced.class_id == target:
        return True, None
    if referenced.class_id in doc.classes and target in ancestor_depths(doc, referenced.class_id):
        return True, None
    return False, None
