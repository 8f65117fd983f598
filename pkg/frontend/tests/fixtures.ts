/** Payloads captured from the running service for the family-album fixture. */

import type { FormSpec, GraphPayload } from "../src/types.js";

export const CLASS_VIEW: GraphPayload = {
  nodes: [
    { id: "Actor", kind: "class", label: "Actor", color: "#4e79a7", x: 0.0, y: 0.0 },
    { id: "Birthday_Party", kind: "class", label: "Birthday Party", color: "#4e79a7", x: 0.0, y: 100.0 },
    { id: "Person", kind: "class", label: "Person", color: "#4e79a7", x: 200.0, y: 0.0 },
    { id: "Pictures", kind: "class", label: "Pictures", color: "#4e79a7", x: 100.0, y: 0.0 },
    { id: "Vacation", kind: "class", label: "Vacation", color: "#4e79a7", x: 100.0, y: 100.0 },
  ],
  edges: [
    { from: "Birthday_Party", to: "Pictures", kind: "subClassOf" },
    { from: "Vacation", to: "Pictures", kind: "subClassOf" },
  ],
};

export const BIRTHDAY_PARTY_FORM: FormSpec = {
  classID: "Birthday_Party",
  fields: [
    { property: "PictureDate", kind: "datatype", rangeHint: "dateTime",
      minC: null, maxC: null, C: 1, inherited: true, widget: "scalar" },
    { property: "PicturePlace", kind: "datatype", rangeHint: "string",
      minC: 1, maxC: null, C: null, inherited: true, widget: "scalar" },
    { property: "PictureDescription", kind: "datatype", rangeHint: "string",
      minC: null, maxC: 1, C: null, inherited: true, widget: "scalar" },
    { property: "PicturePersons", kind: "object", rangeHint: "Actor",
      minC: null, maxC: null, C: null, inherited: false, widget: "reference-list" },
    { property: "hasActor", kind: "object", rangeHint: "Actor",
      minC: null, maxC: null, C: null, inherited: false, widget: "reference-list" },
  ],
};

export const EXAMPLE_IMAGE = "http://www.cs.wayne.edu/example.jpg";

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
