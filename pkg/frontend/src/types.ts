/** Wire types mirroring the service's JSON contract. */

export interface OntologySummary {
  id: string;
  versionInfo: string;
  comment: string;
}

export type NodeKind = "class" | "restriction" | "property" | "individual";

export interface GraphNode {
  id: string;
  kind: NodeKind;
  label: string;
  color: string;
  x: number;
  y: number;
}

export interface GraphEdge {
  from: string;
  to: string;
  kind: string;
}

export interface GraphPayload {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export type ViewKind = "class" | "classWithRestrictions" | "property" | "individual";
export type LayoutKind = "hierarchical" | "organic";

export type Widget = "scalar" | "reference-list" | "nested-create";

export interface FormField {
  property: string;
  kind: "object" | "datatype";
  rangeHint: string;
  minC: number | null;
  maxC: number | null;
  C: number | null;
  inherited: boolean;
  widget: Widget;
}

export interface FormSpec {
  classID: string;
  fields: FormField[];
}

export interface Violation {
  code: string;
  subjects: string[];
  message: string;
}

export interface AssertionPayload {
  property: string;
  ref?: string;
  literal?: string;
  datatype?: string;
}

export interface AnnotationDoc {
  instanceID: string;
  classID: string;
  assertions: AssertionPayload[];
}

/** Single-variable queries come back flat; multi-variable as rows. */
export type QueryResult = string[] | string[][];
