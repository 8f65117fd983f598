"""JSON wire formats for annotations, edits, violations, and form specs.

Wire keys follow the storage naming (classID, minC, ...) while the in-memory
model uses snake_case.
"""

from __future__ import annotations

from typing import Any

from . import consistency
from .consistency import Edit, RemovedTuple, Violation
from .errors import ImagespaceError
from .model import (
    ClassDef, FormSpec, InstanceDef, InstanceGraph, Literal, PropertyDef,
    PropertyKind, Qualifier, Ref, Restriction, Value,
)


class WireFormatError(ImagespaceError):
    """Malformed request payload."""


def _require(data: dict, key: str) -> Any:
    if key not in data:
        raise WireFormatError(f"missing required field: {key}")
    return data[key]


def _string(data: dict, key: str) -> str:
    value = _require(data, key)
    if not isinstance(value, str) or not value:
        raise WireFormatError(f"field {key} must be a non-empty string")
    return value


def _id_set(data: dict, key: str) -> frozenset[str]:
    values = data.get(key, [])
    if not isinstance(values, list):
        raise WireFormatError(f"field {key} must be a list")
    return frozenset(str(v) for v in values)


# ---------------------------------------------------------------------------
# values and annotations
# ---------------------------------------------------------------------------

def value_from_json(data: dict) -> Value:
    if "ref" in data:
        return Ref(str(data["ref"]))
    if "literal" in data:
        try:
            return Literal(str(data["literal"]), str(data.get("datatype", "string")))
        except ValueError as exc:
            raise WireFormatError(str(exc)) from exc
    raise WireFormatError("value needs either 'ref' or 'literal'")


def value_to_json(value: Value) -> dict:
    if isinstance(value, Ref):
        return {"ref": value.target}
    return {"literal": value.lexical, "datatype": value.datatype}


def instance_from_json(data: dict) -> InstanceDef:
    assertions = []
    raw = data.get("assertions", [])
    if not isinstance(raw, list):
        raise WireFormatError("assertions must be a list")
    for entry in raw:
        if not isinstance(entry, dict):
            raise WireFormatError("each assertion must be an object")
        assertions.append((_string(entry, "property"), value_from_json(entry)))
    try:
        return InstanceDef(
            instance_id=_string(data, "instanceID"),
            class_id=_string(data, "classID"),
            assertions=tuple(assertions),
            different_from=_id_set(data, "differentFrom"),
            same_as=_id_set(data, "sameAs"),
        )
    except ValueError as exc:
        raise WireFormatError(str(exc)) from exc


def instance_to_json(inst: InstanceDef) -> dict:
    out = {
        "instanceID": inst.instance_id,
        "classID": inst.class_id,
        "assertions": [
            {"property": pid, **value_to_json(value)} for pid, value in inst.assertions
        ],
    }
    if inst.different_from:
        out["differentFrom"] = sorted(inst.different_from)
    if inst.same_as:
        out["sameAs"] = sorted(inst.same_as)
    return out


def annotation_graph_from_json(data: Any) -> InstanceGraph:
    """Accepts one instance object, a list of them, or {"instances": [...]}."""
    if isinstance(data, dict) and "instances" in data:
        data = data["instances"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise WireFormatError("annotation document must contain at least one instance")
    instances = {}
    for entry in data:
        if not isinstance(entry, dict):
            raise WireFormatError("each instance must be an object")
        inst = instance_from_json(entry)
        instances[inst.instance_id] = inst
    return InstanceGraph(instances)


# ---------------------------------------------------------------------------
# violations
# ---------------------------------------------------------------------------

def violation_to_json(v: Violation) -> dict:
    return {"code": v.code.value, "subjects": list(v.subjects), "message": v.message}


def violations_to_json(violations) -> list[dict]:
    return [violation_to_json(v) for v in violations]


# ---------------------------------------------------------------------------
# definitions (edit payloads)
# ---------------------------------------------------------------------------

def class_from_json(data: dict) -> ClassDef:
    try:
        return ClassDef(
            class_id=_string(data, "classID"),
            label=str(data.get("label", "")),
            comment=str(data.get("comment", "")),
            sub_class_of=_id_set(data, "subClassOf"),
            disjoint_with=_id_set(data, "disjointWith"),
            same_class_as=_id_set(data, "sameClassAs"),
            complement_of=_id_set(data, "complementOf"),
            union_of=_id_set(data, "unionOf"),
            intersection_of=_id_set(data, "intersectionOf"),
            disjoint_union_of=_id_set(data, "disjointUnionOf"),
            one_of=tuple(str(v) for v in data.get("oneOf", [])),
        )
    except ValueError as exc:
        raise WireFormatError(str(exc)) from exc


def property_from_json(data: dict) -> PropertyDef:
    kind = _string(data, "kind")
    try:
        return PropertyDef(
            property_id=_string(data, "propertyID"),
            kind=PropertyKind(kind),
            comment=str(data.get("comment", "")),
            domain=_id_set(data, "domain"),
            range=_id_set(data, "range"),
            sub_property_of=_id_set(data, "subPropertyOf"),
            same_property_as=_id_set(data, "samePropertyAs"),
            inverse_of=_id_set(data, "inverseOf"),
            characteristics=_id_set(data, "characteristics"),
        )
    except ValueError as exc:
        raise WireFormatError(str(exc)) from exc


def restriction_from_json(data: dict) -> Restriction:
    qualifier = None
    if "qualifier" in data and data["qualifier"] is not None:
        q = data["qualifier"]
        if not isinstance(q, dict):
            raise WireFormatError("qualifier must be an object")
        try:
            qualifier = Qualifier(
                has_class_q=_string(q, "hasClassQ"),
                min_cq=q.get("minCQ"),
                max_cq=q.get("maxCQ"),
                exact_cq=q.get("CQ"),
            )
        except ValueError as exc:
            raise WireFormatError(str(exc)) from exc
    has_value = None
    if "hasValue" in data and data["hasValue"] is not None:
        has_value = value_from_json(data["hasValue"])
    try:
        return Restriction(
            restriction_id=_string(data, "restrictionID"),
            on_property=_string(data, "onProperty"),
            to_class=data.get("toClass"),
            has_class=data.get("hasClass"),
            has_value=has_value,
            min_c=data.get("minC"),
            max_c=data.get("maxC"),
            exact_c=data.get("C"),
            qualifier=qualifier,
        )
    except (ValueError, TypeError) as exc:
        raise WireFormatError(str(exc)) from exc


# ---------------------------------------------------------------------------
# edits
# ---------------------------------------------------------------------------

_EDITS = {
    ("insert", "class"): lambda d: consistency.InsertClass(class_from_json(_require(d, "class"))),
    ("update", "class"): lambda d: consistency.UpdateClass(class_from_json(_require(d, "class"))),
    ("delete", "class"): lambda d: consistency.DeleteClass(_string(d, "id")),
    ("insert", "property"): lambda d: consistency.InsertProperty(property_from_json(_require(d, "property"))),
    ("update", "property"): lambda d: consistency.UpdateProperty(property_from_json(_require(d, "property"))),
    ("delete", "property"): lambda d: consistency.DeleteProperty(_string(d, "id")),
    ("insert", "instance"): lambda d: consistency.InsertInstance(instance_from_json(_require(d, "instance"))),
    ("update", "instance"): lambda d: consistency.UpdateInstance(instance_from_json(_require(d, "instance"))),
    ("delete", "instance"): lambda d: consistency.DeleteInstance(_string(d, "id")),
    ("insert", "restriction"): lambda d: consistency.InsertRestriction(restriction_from_json(_require(d, "restriction"))),
    ("update", "restriction"): lambda d: consistency.UpdateRestriction(restriction_from_json(_require(d, "restriction"))),
    ("delete", "restriction"): lambda d: consistency.DeleteRestriction(_string(d, "id")),
    ("insert", "relation"): lambda d: consistency.InsertRelation(
        _string(d, "kind"), _string(d, "subject"), _string(d, "object")
    ),
    ("delete", "relation"): lambda d: consistency.DeleteRelation(
        _string(d, "kind"), _string(d, "subject"), _string(d, "object")
    ),
}


def edit_from_json(data: Any) -> Edit:
    if not isinstance(data, dict):
        raise WireFormatError("edit must be an object")
    action = _string(data, "action")
    target = _string(data, "target")
    builder = _EDITS.get((action, target))
    if builder is None:
        raise WireFormatError(f"unsupported edit: action={action} target={target}")
    edit = builder(data)
    if isinstance(edit, (consistency.InsertRelation, consistency.DeleteRelation)):
        if edit.kind not in consistency.RELATION_KINDS:
            raise WireFormatError(f"unknown relation kind: {edit.kind}")
    return edit


def removed_to_json(removed: tuple[RemovedTuple, ...]) -> list[dict]:
    return [{"kind": r.kind, "subject": r.subject, "object": r.object} for r in removed]


def outcome_to_json(outcome) -> dict:
    if isinstance(outcome, consistency.Applied):
        return {"outcome": "applied"}
    if isinstance(outcome, consistency.Cascaded):
        return {"outcome": "cascaded", "removed": removed_to_json(outcome.removed)}
    return {"outcome": "rejected", "violations": violations_to_json(outcome.violations)}


# ---------------------------------------------------------------------------
# form specs
# ---------------------------------------------------------------------------

def form_spec_to_json(spec: FormSpec) -> dict:
    return {
        "classID": spec.class_id,
        "fields": [
            {
                "property": f.property_id,
                "kind": f.kind.value,
                "rangeHint": f.range_hint,
                "minC": f.min_c,
                "maxC": f.max_c,
                "C": f.exact_c,
                "inherited": f.inherited,
                "widget": f.widget,
            }
            for f in spec.fields
        ],
    }
