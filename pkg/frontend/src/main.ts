/** Application shell: ontology picker, browse / annotate / search tabs. */

import { ApiClient } from "./api.js";
import { createAnnotationForm, type KnownInstances } from "./annotationForm.js";
import { clear, el } from "./dom.js";
import { createGraphBrowser } from "./graphBrowser.js";
import { createSearchPanel } from "./searchPanel.js";
import { initialState, type UiState } from "./state.js";
import type { GraphPayload, LayoutKind, ViewKind } from "./types.js";

const VIEW_KINDS: ViewKind[] = ["class", "classWithRestrictions", "property", "individual"];
const LAYOUTS: LayoutKind[] = ["hierarchical", "organic"];

export function startApp(root: HTMLElement, client: ApiClient = new ApiClient()): void {
  const state: UiState = initialState();

  const ontologySelect = el("select", { class: "ontology-select" });
  const viewSelect = el("select", { class: "view-select" },
    VIEW_KINDS.map((v) => el("option", { value: v }, [v])));
  const layoutSelect = el("select", { class: "layout-select" },
    LAYOUTS.map((l) => el("option", { value: l }, [l])));
  const seedInput = el("input", { class: "seed-input", type: "number", value: "0" });
  const status = el("div", { class: "status", role: "status" });

  const browsePane = el("div", { class: "pane browse-pane" });
  const annotatePane = el("div", { class: "pane annotate-pane hidden" });
  const searchPane = el("div", { class: "pane search-pane hidden" });

  const tabs = el("nav", { class: "tabs" }, [
    el("button", { class: "tab tab-browse active", onclick: () => showPane("browse") }, ["Browse"]),
    el("button", { class: "tab tab-annotate", onclick: () => showPane("annotate") }, ["Annotate"]),
    el("button", { class: "tab tab-search", onclick: () => showPane("search") }, ["Search"]),
  ]);

  function showPane(name: "browse" | "annotate" | "search"): void {
    browsePane.classList.toggle("hidden", name !== "browse");
    annotatePane.classList.toggle("hidden", name !== "annotate");
    searchPane.classList.toggle("hidden", name !== "search");
    for (const button of tabs.querySelectorAll(".tab")) {
      button.classList.toggle("active", button.classList.contains(`tab-${name}`));
    }
  }

  async function knownInstances(ontology: string): Promise<KnownInstances> {
    const payload = await client.graph(ontology, "individual", "hierarchical", 0);
    const classOf = new Map<string, string>();
    for (const edge of payload.edges) {
      if (edge.kind === "instanceOf") classOf.set(edge.from, edge.to);
    }
    const byId = new Map<string, string>();
    for (const node of payload.nodes) {
      if (node.kind === "individual") byId.set(node.id, classOf.get(node.id) ?? "");
    }
    return { byId, matches: (classId, target) => classId === target };
  }

  async function refreshGraph(): Promise<void> {
    if (!state.ontology) return;
    status.textContent = "loading graph…";
    try {
      const payload: GraphPayload = await client.graph(
        state.ontology, state.viewKind, state.layout, state.seed,
      );
      clear(browsePane);
      const browser = createGraphBrowser(payload, (id) => {
        state.selectedNode = id;
        const node = payload.nodes.find((n) => n.id === id);
        if (node?.kind === "class") void openAnnotationForm(node.id);
      });
      browsePane.append(browser.element);
      status.textContent = "";
    } catch (error) {
      status.textContent = error instanceof Error ? error.message : String(error);
    }
  }

  async function openAnnotationForm(classId: string): Promise<void> {
    if (!state.ontology) return;
    const [spec, instances] = await Promise.all([
      client.formSpec(state.ontology, classId),
      knownInstances(state.ontology),
    ]);
    clear(annotatePane);
    annotatePane.append(createAnnotationForm({
      client,
      ontology: state.ontology,
      spec,
      instances,
      onSaved: (ids) => {
        status.textContent = `saved: ${ids.join(", ")}`;
        void refreshGraph();
      },
    }));
  }

  async function refreshSearch(): Promise<void> {
    if (!state.ontology) return;
    const payload = await client.graph(state.ontology, "class", "hierarchical", 0);
    clear(searchPane);
    searchPane.append(createSearchPanel({
      client,
      ontology: state.ontology,
      classIds: payload.nodes.map((n) => n.id),
      onResults: (bindings) => {
        state.lastBindings = bindings;
      },
    }));
  }

  async function selectOntology(id: string): Promise<void> {
    state.ontology = id;
    await refreshGraph();
    await refreshSearch();
  }

  ontologySelect.addEventListener("change", () => void selectOntology(ontologySelect.value));
  viewSelect.addEventListener("change", () => {
    state.viewKind = viewSelect.value as ViewKind;
    void refreshGraph();
  });
  layoutSelect.addEventListener("change", () => {
    state.layout = layoutSelect.value as LayoutKind;
    void refreshGraph();
  });
  seedInput.addEventListener("change", () => {
    state.seed = Number(seedInput.value) || 0;
    void refreshGraph();
  });

  root.append(
    el("header", { class: "topbar" }, [
      el("h1", {}, ["imagespace"]),
      el("label", {}, ["Ontology: ", ontologySelect]),
      el("label", {}, ["View: ", viewSelect]),
      el("label", {}, ["Layout: ", layoutSelect]),
      el("label", {}, ["Seed: ", seedInput]),
      status,
    ]),
    tabs,
    browsePane,
    annotatePane,
    searchPane,
  );

  void client.listOntologies().then((ontologies) => {
    for (const summary of ontologies) {
      ontologySelect.append(el("option", { value: summary.id }, [summary.id]));
    }
    if (ontologies.length > 0) {
      ontologySelect.value = ontologies[0].id;
      void selectOntology(ontologies[0].id);
    } else {
      status.textContent = "no ontologies stored yet (import one with the CLI)";
    }
  }).catch((error: unknown) => {
    status.textContent = error instanceof Error ? error.message : String(error);
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  // ?api=http://host:port points the UI at a service on another origin
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  startApp(document.getElementById("app") as HTMLElement, new ApiClient(base));
}
