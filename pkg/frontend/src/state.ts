/** Session UI state: which ontology/view is active and what is in flight. */

import type { LayoutKind, QueryResult, ViewKind } from "./types.js";

export interface UiState {
  ontology: string | null;
  viewKind: ViewKind;
  layout: LayoutKind;
  seed: number;
  selectedNode: string | null;
  queryText: string;
  lastBindings: QueryResult;
}

export function initialState(): UiState {
  return {
    ontology: null,
    viewKind: "class",
    layout: "hierarchical",
    seed: 0,
    selectedNode: null,
    queryText: "",
    lastBindings: [],
  };
}
