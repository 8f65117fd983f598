"""Typed graph views of an ontology with deterministic layouts and exports.

Edge direction convention: child -> parent for subClassOf and subPropertyOf,
instance -> class for instanceOf. The JSON export schema is
{nodes: [{id, kind, label, color, x, y}], edges: [{from, to, kind}]}.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .errors import CyclicHierarchy, MissingPosition
from .model import OntologyDoc, local_name

VIEW_KINDS = ("class", "classWithRestrictions", "property", "individual")

# One color per node kind (the different coloring scheme per concept).
NODE_COLORS = {
    "class": "#4e79a7",
    "restriction": "#f28e2b",
    "property": "#59a14f",
    "individual": "#b07aa1",
}

HIERARCHY_EDGE_KINDS = ("subClassOf", "subPropertyOf", "instanceOf")

LAYER_SPACING = 100.0
SLOT_SPACING = 100.0

ORGANIC_ITERATIONS = 300
ORGANIC_EDGE_LENGTH = 50.0
MIN_SEPARATION = 1.0


@dataclass(frozen=True)
class ViewNode:
    id: str
    kind: str
    label: str

    @property
    def color(self) -> str:
        return NODE_COLORS[self.kind]


@dataclass(frozen=True)
class ViewEdge:
    src: str
    dst: str
    kind: str


@dataclass(frozen=True)
class ViewGraph:
    view_kind: str
    nodes: tuple[ViewNode, ...]
    edges: tuple[ViewEdge, ...]


@dataclass(frozen=True)
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    bounds: tuple[float, float, float, float]


def _bounds(positions: dict[str, tuple[float, float]]) -> tuple[float, float, float, float]:
    if not positions:
        return (0.0, 0.0, 0.0, 0.0)
    xs = [p[0] for p in positions.values()]
    ys = [p[1] for p in positions.values()]
    return (min(xs), min(ys), max(xs), max(ys))


# ---------------------------------------------------------------------------
# views
# ---------------------------------------------------------------------------

def build_view(doc: OntologyDoc, view_kind: str) -> ViewGraph:
    """Construct the typed node/edge set for one view of the ontology."""
    if view_kind not in VIEW_KINDS:
        raise ValueError(f"unknown view kind: {view_kind}")
    nodes: dict[str, ViewNode] = {}
    edges: set[ViewEdge] = set()

    def class_label(cid: str) -> str:
        cls = doc.classes[cid]
        return cls.label or local_name(cid)

    if view_kind in ("class", "classWithRestrictions"):
        for cid in doc.classes:
            nodes[cid] = ViewNode(cid, "class", class_label(cid))
        for cid, cls in doc.classes.items():
            for parent in cls.sub_class_of:
                if parent in doc.classes:
                    edges.add(ViewEdge(cid, parent, "subClassOf"))
    if view_kind == "classWithRestrictions":
        for rid, r in doc.restrictions.items():
            nodes[rid] = ViewNode(rid, "restriction", local_name(r.on_property))
            if r.on_property in doc.properties:
                nodes.setdefault(
                    r.on_property,
                    ViewNode(r.on_property, "property", local_name(r.on_property)),
                )
                edges.add(ViewEdge(rid, r.on_property, "onProperty"))
        for cid, cls in doc.classes.items():
            for targets in cls.relation_targets().values():
                for target in targets:
                    if target in doc.restrictions:
                        edges.add(ViewEdge(cid, target, "restrictionAnchor"))
    if view_kind == "property":
        for pid in doc.properties:
            nodes[pid] = ViewNode(pid, "property", local_name(pid))
        for pid, prop in doc.properties.items():
            for parent in prop.sub_property_of:
                if parent in doc.properties:
                    edges.add(ViewEdge(pid, parent, "subPropertyOf"))
    if view_kind == "individual":
        for iid, inst in doc.instances.items():
            nodes[iid] = ViewNode(iid, "individual", local_name(iid))
            if inst.class_id in doc.classes:
                nodes.setdefault(
                    inst.class_id, ViewNode(inst.class_id, "class", class_label(inst.class_id))
                )
                edges.add(ViewEdge(iid, inst.class_id, "instanceOf"))

    ordered_nodes = tuple(nodes[k] for k in sorted(nodes))
    ordered_edges = tuple(sorted(edges, key=lambda e: (e.src, e.dst, e.kind)))
    return ViewGraph(view_kind, ordered_nodes, ordered_edges)


# ---------------------------------------------------------------------------
# hierarchical layout
# ---------------------------------------------------------------------------

def layout_hierarchical(
    graph: ViewGraph,
    spacing: float = LAYER_SPACING,
) -> LayoutResult:
    """Longest-path layering with barycenter ordering; children strictly below parents."""
    node_ids = [n.id for n in graph.nodes]
    hierarchy = [e for e in graph.edges if e.kind in HIERARCHY_EDGE_KINDS]
    parents: dict[str, set[str]] = {n: set() for n in node_ids}
    for e in hierarchy:
        parents[e.src].add(e.dst)

    layer: dict[str, int] = {}
    visiting: set[str] = set()

    def assign(node: str) -> int:
        if node in layer:
            return layer[node]
        if node in visiting:
            raise CyclicHierarchy(f"hierarchy cycle through {node}")
        visiting.add(node)
        value = 0
        for parent in parents[node]:
            value = max(value, assign(parent) + 1)
        visiting.discard(node)
        layer[node] = value
        return value

    hierarchy_nodes = {e.src for e in hierarchy} | {e.dst for e in hierarchy}
    for node in sorted(hierarchy_nodes):
        assign(node)

    # Nodes outside the hierarchy hang one layer below their placed neighbors.
    neighbors: dict[str, set[str]] = {n: set() for n in node_ids}
    for e in graph.edges:
        neighbors[e.src].add(e.dst)
        neighbors[e.dst].add(e.src)
    pending = [n for n in sorted(node_ids) if n not in layer]
    while pending:
        progressed = False
        remaining = []
        for node in pending:
            placed = [layer[m] for m in neighbors[node] if m in layer]
            if placed:
                layer[node] = max(placed) + 1
                progressed = True
            else:
                remaining.append(node)
        if not progressed:
            for node in remaining:
                layer[node] = 0
            break
        pending = remaining

    by_layer: dict[int, list[str]] = {}
    for node in sorted(node_ids):
        by_layer.setdefault(layer[node], []).append(node)
    levels = sorted(by_layer)

    slots: dict[str, int] = {}
    for level in levels:
        for i, node in enumerate(by_layer[level]):
            slots[node] = i

    def sweep(downward: bool):
        ordered_levels = levels if downward else list(reversed(levels))
        for level in ordered_levels:
            keys = {}
            for node in by_layer[level]:
                adjacent = [
                    slots[m] for m in neighbors[node]
                    if m in layer and (layer[m] < level if downward else layer[m] > level)
                ]
                keys[node] = sum(adjacent) / len(adjacent) if adjacent else float(slots[node])
            by_layer[level].sort(key=lambda n: (keys[n], n))
            for i, node in enumerate(by_layer[level]):
                slots[node] = i

    for i in range(4):
        sweep(downward=(i % 2 == 0))

    positions = {
        node: (slots[node] * SLOT_SPACING, layer[node] * spacing) for node in node_ids
    }
    return LayoutResult(positions, _bounds(positions))


# ---------------------------------------------------------------------------
# organic layout
# ---------------------------------------------------------------------------

def layout_organic(graph: ViewGraph, seed: int = 0) -> LayoutResult:
    """Seeded force-directed placement; identical (graph, seed) gives identical output."""
    node_ids = [n.id for n in graph.nodes]
    n = len(node_ids)
    if n == 0:
        return LayoutResult({}, (0.0, 0.0, 0.0, 0.0))
    rng = random.Random(seed)
    k = ORGANIC_EDGE_LENGTH
    side = k * math.sqrt(n) + k
    pos = {node: [rng.uniform(0.0, side), rng.uniform(0.0, side)] for node in node_ids}
    index = {node: i for i, node in enumerate(node_ids)}
    edges = [(e.src, e.dst) for e in graph.edges if e.src != e.dst]

    t0 = side / 10.0
    for step in range(ORGANIC_ITERATIONS):
        temperature = t0 * (1.0 - step / ORGANIC_ITERATIONS) + 0.01
        disp = {node: [0.0, 0.0] for node in node_ids}
        for i, a in enumerate(node_ids):
            for b in node_ids[i + 1:]:
                dx = pos[a][0] - pos[b][0]
                dy = pos[a][1] - pos[b][1]
                dist = math.hypot(dx, dy)
                if dist < 1e-9:
                    # deterministic nudge for coincident nodes
                    angle = (index[a] * 7 + index[b] * 13) % 360
                    dx, dy = math.cos(angle), math.sin(angle)
                    dist = 1.0
                force = k * k / dist
                disp[a][0] += dx / dist * force
                disp[a][1] += dy / dist * force
                disp[b][0] -= dx / dist * force
                disp[b][1] -= dy / dist * force
        for a, b in edges:
            dx = pos[a][0] - pos[b][0]
            dy = pos[a][1] - pos[b][1]
            dist = math.hypot(dx, dy)
            if dist < 1e-9:
                continue
            force = dist * dist / k
            disp[a][0] -= dx / dist * force
            disp[a][1] -= dy / dist * force
            disp[b][0] += dx / dist * force
            disp[b][1] += dy / dist * force
        for node in node_ids:
            dx, dy = disp[node]
            length = math.hypot(dx, dy)
            if length < 1e-12:
                continue
            step_len = min(length, temperature)
            pos[node][0] += dx / length * step_len
            pos[node][1] += dy / length * step_len

    positions = {node: (pos[node][0], pos[node][1]) for node in node_ids}
    return LayoutResult(positions, _bounds(positions))


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def graph_payload(graph: ViewGraph, layout: LayoutResult) -> dict:
    """The JSON-shaped dict consumed by the web UI and the JSON export."""
    for node in graph.nodes:
        if node.id not in layout.positions:
            raise MissingPosition(node.id)
    return {
        "nodes": [
            {
                "id": node.id,
                "kind": node.kind,
                "label": node.label,
                "color": node.color,
                "x": layout.positions[node.id][0],
                "y": layout.positions[node.id][1],
            }
            for node in sorted(graph.nodes, key=lambda n: n.id)
        ],
        "edges": [
            {"from": e.src, "to": e.dst, "kind": e.kind}
            for e in sorted(graph.edges, key=lambda e: (e.src, e.dst, e.kind))
        ],
    }


_DOT_KEYWORDS = {"node", "edge", "graph", "digraph", "subgraph", "strict"}


def _dot_id(identifier: str) -> str:
    if (
        identifier
        and not identifier[0].isdigit()
        and identifier.lower() not in _DOT_KEYWORDS
        and all(c.isalnum() or c == "_" for c in identifier)
    ):
        return identifier
    return '"' + identifier.replace('"', '\\"') + '"'


def export_graph(graph: ViewGraph, layout: LayoutResult, format: str = "json") -> bytes:
    """Serialize the positioned graph as JSON or DOT, deterministically ordered."""
    payload = graph_payload(graph, layout)
    if format == "json":
        return (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    if format == "dot":
        lines = ["digraph ontology {"]
        for node in payload["nodes"]:
            attrs = (
                f'label={json.dumps(node["label"])}, kind="{node["kind"]}", '
                f'color="{node["color"]}", pos="{node["x"]},{node["y"]}!"'
            )
            lines.append(f"  {_dot_id(node['id'])} [{attrs}];")
        for edge in payload["edges"]:
            lines.append(
                f"  {_dot_id(edge['from'])} -> {_dot_id(edge['to'])} [kind=\"{edge['kind']}\"];"
            )
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown export format: {format}")
