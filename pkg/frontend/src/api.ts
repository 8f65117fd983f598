/** Typed client for the ontology service; the UI's only write path. */

import type {
  AnnotationDoc, FormSpec, GraphPayload, LayoutKind, OntologySummary,
  QueryResult, ViewKind, Violation,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly violations: Violation[] = [],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raise(response: Response): Promise<never> {
  let message = `${response.status} ${response.statusText}`;
  let violations: Violation[] = [];
  try {
    const body = await response.json();
    if (typeof body?.error === "string") message = body.error;
    if (Array.isArray(body?.violations)) violations = body.violations;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, message, violations);
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) await raise(response);
    return response.json() as Promise<T>;
  }

  listOntologies(): Promise<OntologySummary[]> {
    return this.getJson("/ontologies");
  }

  graph(ontology: string, view: ViewKind, layout: LayoutKind, seed = 0): Promise<GraphPayload> {
    const params = new URLSearchParams({ view, layout, seed: String(seed) });
    return this.getJson(`/ontologies/${encodeURIComponent(ontology)}/graph?${params}`);
  }

  formSpec(ontology: string, classId: string): Promise<FormSpec> {
    return this.getJson(
      `/ontologies/${encodeURIComponent(ontology)}/classes/${encodeURIComponent(classId)}/form`,
    );
  }

  candidates(ontology: string, classId: string, relation: string): Promise<string[]> {
    return this.getJson<{ candidates: string[] }>(
      `/ontologies/${encodeURIComponent(ontology)}/classes/${encodeURIComponent(classId)}`
      + `/candidates?relation=${encodeURIComponent(relation)}`,
    ).then((body) => body.candidates);
  }

  async submitInstances(ontology: string, doc: AnnotationDoc | AnnotationDoc[]): Promise<string[]> {
    const response = await fetch(
      `${this.base}/ontologies/${encodeURIComponent(ontology)}/instances`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(doc),
      },
    );
    if (!response.ok) await raise(response);
    const body = await response.json();
    return body.saved as string[];
  }

  async runQuery(ontology: string, text: string, closure = true): Promise<QueryResult> {
    const response = await fetch(
      `${this.base}/ontologies/${encodeURIComponent(ontology)}/query`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ query: text, closure }),
      },
    );
    if (!response.ok) await raise(response);
    return response.json() as Promise<QueryResult>;
  }

  imageUrl(path: string): string {
    return `${this.base}/images/${encodeURIComponent(path)}`;
  }
}
