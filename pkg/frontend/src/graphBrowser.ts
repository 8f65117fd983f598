/** Three-frame graph browser: overview minimap, main view, entity list.
 *
 * Node positions come verbatim from the service; zooming only changes the
 * SVG viewBox, never the coordinates.
 */

import { clear, el, svgEl } from "./dom.js";
import type { GraphPayload } from "./types.js";

export interface ViewBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface GraphBrowser {
  element: HTMLElement;
  viewBox(): ViewBox;
  fit(): void;
  zoomIn(): void;
  zoomOut(): void;
  select(id: string | null): void;
  selected(): string | null;
  focusSelection(): void;
}

const MARGIN = 40;
const NODE_RADIUS = 14;
const FOCUS_SPAN = 320;

function bounds(payload: GraphPayload): ViewBox {
  if (payload.nodes.length === 0) {
    return { x: -100, y: -100, w: 200, h: 200 };
  }
  const xs = payload.nodes.map((n) => n.x);
  const ys = payload.nodes.map((n) => n.y);
  const minX = Math.min(...xs) - MARGIN;
  const minY = Math.min(...ys) - MARGIN;
  const maxX = Math.max(...xs) + MARGIN;
  const maxY = Math.max(...ys) + MARGIN;
  return { x: minX, y: minY, w: maxX - minX, h: maxY - minY };
}

export function createGraphBrowser(
  payload: GraphPayload,
  onSelect?: (id: string | null) => void,
): GraphBrowser {
  const full = bounds(payload);
  let view: ViewBox = { ...full };
  let selectedId: string | null = null;

  const mainSvg = svgEl("svg", { class: "main-view", role: "img" });
  const edgeLayer = svgEl("g", { class: "edges" });
  const nodeLayer = svgEl("g", { class: "nodes" });
  mainSvg.append(edgeLayer, nodeLayer);

  const overviewSvg = svgEl("svg", {
    class: "overview-view",
    viewBox: `${full.x} ${full.y} ${full.w} ${full.h}`,
  });
  const overviewDots = svgEl("g", { class: "overview-nodes" });
  const viewportRect = svgEl("rect", { class: "viewport-indicator", fill: "none" });
  overviewSvg.append(overviewDots, viewportRect);

  const listItems = new Map<string, HTMLLIElement>();
  const mainNodes = new Map<string, SVGGElement>();
  const overviewNodes = new Map<string, SVGCircleElement>();

  const positions = new Map(payload.nodes.map((n) => [n.id, n]));
  for (const edge of payload.edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) continue;
    edgeLayer.append(svgEl("line", {
      class: `edge edge-${edge.kind}`,
      x1: String(from.x), y1: String(from.y),
      x2: String(to.x), y2: String(to.y),
    }));
  }

  const list = el("ul", { class: "entity-items" });
  for (const node of payload.nodes) {
    const group = svgEl("g", { class: `node node-${node.kind}`, "data-node-id": node.id });
    group.append(
      svgEl("circle", {
        cx: String(node.x), cy: String(node.y),
        r: String(NODE_RADIUS), fill: node.color,
      }),
      svgEl("text", {
        x: String(node.x), y: String(node.y + NODE_RADIUS + 12),
        "text-anchor": "middle", class: "node-label",
      }, [node.label]),
    );
    group.addEventListener("click", () => select(node.id));
    nodeLayer.append(group);
    mainNodes.set(node.id, group);

    const dot = svgEl("circle", {
      class: "overview-dot", cx: String(node.x), cy: String(node.y),
      r: String(NODE_RADIUS), fill: node.color, "data-node-id": node.id,
    });
    overviewDots.append(dot);
    overviewNodes.set(node.id, dot);

    const item = el("li", {
      class: "entity-item",
      "data-node-id": node.id,
      onclick: () => select(node.id),
    }, [node.label]);
    list.append(item);
    listItems.set(node.id, item);
  }

  function applyView(): void {
    mainSvg.setAttribute("viewBox", `${view.x} ${view.y} ${view.w} ${view.h}`);
    viewportRect.setAttribute("x", String(view.x));
    viewportRect.setAttribute("y", String(view.y));
    viewportRect.setAttribute("width", String(view.w));
    viewportRect.setAttribute("height", String(view.h));
  }

  function zoomBy(factor: number): void {
    const cx = view.x + view.w / 2;
    const cy = view.y + view.h / 2;
    const w = view.w * factor;
    const h = view.h * factor;
    view = { x: cx - w / 2, y: cy - h / 2, w, h };
    applyView();
  }

  function select(id: string | null): void {
    if (selectedId !== null) {
      mainNodes.get(selectedId)?.classList.remove("selected");
      overviewNodes.get(selectedId)?.classList.remove("selected");
      listItems.get(selectedId)?.classList.remove("selected");
    }
    selectedId = id;
    if (id !== null) {
      mainNodes.get(id)?.classList.add("selected");
      overviewNodes.get(id)?.classList.add("selected");
      listItems.get(id)?.classList.add("selected");
    }
    onSelect?.(id);
  }

  function focusSelection(): void {
    if (selectedId === null) return;
    const node = positions.get(selectedId);
    if (!node) return;
    const span = Math.min(FOCUS_SPAN, Math.max(view.w, view.h));
    view = { x: node.x - span / 2, y: node.y - span / 2, w: span, h: span };
    applyView();
  }

  const toolbar = el("div", { class: "toolbar" }, [
    el("button", { class: "zoom-in", type: "button", onclick: () => zoomBy(1 / 1.4) }, ["+"]),
    el("button", { class: "zoom-out", type: "button", onclick: () => zoomBy(1.4) }, ["−"]),
    el("button", {
      class: "zoom-fit", type: "button",
      onclick: () => { view = { ...full }; applyView(); },
    }, ["fit"]),
    el("button", { class: "zoom-selection", type: "button", onclick: focusSelection },
       ["focus"]),
  ]);

  const element = el("div", { class: "graph-browser" }, [
    el("div", { class: "side-column" }, [
      el("div", { class: "overview" }, [overviewSvg]),
      el("div", { class: "entity-list" }, [
        el("h3", {}, ["Entities"]),
        list,
      ]),
    ]),
    el("div", { class: "main-frame" }, [toolbar, mainSvg]),
  ]);

  applyView();
  return {
    element,
    viewBox: () => ({ ...view }),
    fit: () => { view = { ...full }; applyView(); },
    zoomIn: () => zoomBy(1 / 1.4),
    zoomOut: () => zoomBy(1.4),
    select,
    selected: () => selectedId,
    focusSelection,
  };
}

/** Whether every node of the payload lies inside the view box. */
export function allNodesVisible(payload: GraphPayload, view: ViewBox): boolean {
  return payload.nodes.every(
    (n) => n.x >= view.x && n.x <= view.x + view.w && n.y >= view.y && n.y <= view.y + view.h,
  );
}

export function clearBrowser(container: Element): void {
  clear(container);
}
