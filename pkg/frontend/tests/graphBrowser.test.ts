import { describe, expect, it } from "vitest";

import { allNodesVisible, createGraphBrowser } from "../src/graphBrowser.js";
import { CLASS_VIEW } from "./fixtures.js";

describe("graph browser", () => {
  it("renders three frames: overview, main view, entity list", () => {
    const browser = createGraphBrowser(CLASS_VIEW);
    expect(browser.element.querySelector(".overview svg")).not.toBeNull();
    expect(browser.element.querySelector("svg.main-view")).not.toBeNull();
    expect(browser.element.querySelectorAll(".entity-list .entity-item")).toHaveLength(5);
  });

  it("places nodes at the service positions verbatim", () => {
    const browser = createGraphBrowser(CLASS_VIEW);
    const circle = browser.element
      .querySelector('.main-view .node[data-node-id="Birthday_Party"] circle')!;
    expect(circle.getAttribute("cx")).toBe("0");
    expect(circle.getAttribute("cy")).toBe("100");
    expect(circle.getAttribute("fill")).toBe("#4e79a7");
  });

  it("draws the subClassOf edge below its parent", () => {
    const browser = createGraphBrowser(CLASS_VIEW);
    const edges = browser.element.querySelectorAll(".main-view .edge-subClassOf");
    expect(edges).toHaveLength(2);
    const byId = new Map(CLASS_VIEW.nodes.map((n) => [n.id, n]));
    expect(byId.get("Birthday_Party")!.y).toBeGreaterThan(byId.get("Pictures")!.y);
  });

  it("fit-to-frame keeps every node inside the viewport", () => {
    const browser = createGraphBrowser(CLASS_VIEW);
    browser.zoomIn();
    browser.zoomIn();
    browser.zoomIn();
    expect(allNodesVisible(CLASS_VIEW, browser.viewBox())).toBe(false);
    browser.fit();
    expect(allNodesVisible(CLASS_VIEW, browser.viewBox())).toBe(true);
  });

  it("zoom changes scale without touching coordinates", () => {
    const browser = createGraphBrowser(CLASS_VIEW);
    const before = browser.viewBox();
    browser.zoomIn();
    const after = browser.viewBox();
    expect(after.w).toBeLessThan(before.w);
    const circle = browser.element
      .querySelector('.main-view .node[data-node-id="Pictures"] circle')!;
    expect(circle.getAttribute("cx")).toBe("100");
  });

  it("clicking a node focuses it in all three frames", () => {
    let selected: string | null = null;
    const browser = createGraphBrowser(CLASS_VIEW, (id) => { selected = id; });
    const node = browser.element
      .querySelector('.main-view .node[data-node-id="Vacation"]') as SVGGElement;
    node.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(selected).toBe("Vacation");
    expect(node.classList.contains("selected")).toBe(true);
    expect(browser.element
      .querySelector('.overview-dot[data-node-id="Vacation"]')!.classList.contains("selected"))
      .toBe(true);
    expect(browser.element
      .querySelector('.entity-item[data-node-id="Vacation"]')!.classList.contains("selected"))
      .toBe(true);
  });

  it("zoom-to-selection centers the viewport on the node", () => {
    const browser = createGraphBrowser(CLASS_VIEW);
    browser.select("Person");
    browser.focusSelection();
    const view = browser.viewBox();
    expect(view.x + view.w / 2).toBeCloseTo(200);
    expect(view.y + view.h / 2).toBeCloseTo(0);
  });
});
