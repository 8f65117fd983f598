/** Ontology-driven annotation form.
 *
 * One input per form-spec field; inherited fields carry a badge; optional
 * fields (no lower cardinality bound) collapse into details sections.
 * Object-valued fields use a reference picker; nested-create fields can open
 * a child form whose instance is submitted before the referencing one.
 * A rejected submission renders its violations inline without clearing
 * anything the user typed.
 */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import type { AnnotationDoc, AssertionPayload, FormField, FormSpec } from "./types.js";

const DATATYPES = new Set(["string", "dateTime", "integer", "decimal", "boolean", "anyURI"]);

export interface KnownInstances {
  /** instance id -> class id, used to fill reference pickers. */
  byId: Map<string, string>;
  /** class id -> ids of classes matching it for picker purposes (closure). */
  matches(classId: string, targetClass: string): boolean;
}

export function instancesFromPairs(pairs: Array<[string, string]>): KnownInstances {
  const byId = new Map(pairs);
  return { byId, matches: (classId, target) => classId === target };
}

export interface AnnotationFormOptions {
  client: ApiClient;
  ontology: string;
  spec: FormSpec;
  instances: KnownInstances;
  onSaved?: (ids: string[]) => void;
  depth?: number;
}

function fieldRequired(field: FormField): boolean {
  return (field.minC ?? 0) >= 1 || (field.C ?? 0) >= 1;
}

function cardinalityNote(field: FormField): string {
  if (field.C !== null) return `exactly ${field.C}`;
  const lo = field.minC ?? 0;
  const hi = field.maxC === null ? "*" : String(field.maxC);
  return `${lo}..${hi}`;
}

export function createAnnotationForm(options: AnnotationFormOptions): HTMLElement {
  const { client, ontology, spec, instances } = options;
  const depth = options.depth ?? 0;
  const refValues = new Map<string, string[]>();

  const root = el("div", { class: "annotation-form", "data-class-id": spec.classID });
  const banner = el("div", { class: "form-banner", role: "alert" });
  const idInput = el("input", {
    class: "instance-id-input",
    placeholder: "instance identifier (image URI)",
  });
  const fieldsBox = el("div", { class: "fields" });
  const formViolations = el("ul", { class: "form-violations" });
  const nestedHost = el("div", { class: "nested-forms" });

  const fieldBoxes = new Map<string, HTMLElement>();
  const inputs = new Map<string, HTMLInputElement>();

  for (const field of spec.fields) {
    const box = el("div", {
      class: `field widget-${field.widget}${field.inherited ? " inherited" : ""}`,
      "data-property": field.property,
    });
    const label = el("label", { class: "field-label" }, [
      field.property,
      el("span", { class: "cardinality" }, [` [${cardinalityNote(field)}]`]),
    ]);
    if (field.inherited) {
      label.append(el("span", { class: "badge inherited-badge", title: "inherited from a parent class" },
                      ["inherited"]));
    }
    box.append(label);

    if (field.kind === "datatype") {
      const input = el("input", {
        class: "field-input",
        "data-property": field.property,
        placeholder: field.rangeHint || "string",
      });
      inputs.set(field.property, input);
      box.append(input);
    } else {
      box.append(buildReferenceEditor(field));
    }
    box.append(el("ul", { class: "field-violations" }));
    fieldBoxes.set(field.property, box);

    if (fieldRequired(field)) {
      fieldsBox.append(box);
    } else {
      // optional fields stay out of the way until expanded
      const details = el("details", { class: "optional-field" }, [
        el("summary", {}, [field.property]),
        box,
      ]);
      fieldsBox.append(details);
    }
  }

  function buildReferenceEditor(field: FormField): HTMLElement {
    refValues.set(field.property, []);
    const listNode = el("ul", { class: "ref-list" });

    const redraw = (): void => {
      clear(listNode);
      for (const [index, ref] of (refValues.get(field.property) ?? []).entries()) {
        listNode.append(el("li", { class: "ref-item" }, [
          ref,
          el("button", {
            class: "ref-remove", type: "button",
            onclick: () => {
              refValues.get(field.property)?.splice(index, 1);
              redraw();
            },
          }, ["−"]),
        ]));
      }
    };

    const picker = el("select", { class: "ref-picker", "data-property": field.property });
    picker.append(el("option", { value: "" }, ["choose…"]));
    for (const [id, classId] of instances.byId) {
      if (!field.rangeHint || instances.matches(classId, field.rangeHint)) {
        picker.append(el("option", { value: id }, [id]));
      }
    }
    const addButton = el("button", {
      class: "ref-add", type: "button",
      onclick: () => {
        const value = picker.value;
        if (value) {
          refValues.get(field.property)?.push(value);
          redraw();
        }
      },
    }, ["+"]);

    const editor = el("div", { class: "ref-editor" }, [listNode, picker, addButton]);
    if (field.widget === "nested-create") {
      editor.append(el("button", {
        class: "ref-create", type: "button",
        onclick: () => openNestedForm(field),
      }, ["new…"]));
    }
    return editor;
  }

  function openNestedForm(field: FormField): void {
    if (!field.rangeHint) return;
    root.classList.add("suspended");
    const placeholder = el("div", { class: "nested-slot" }, ["loading…"]);
    nestedHost.append(placeholder);
    client.formSpec(ontology, field.rangeHint).then((childSpec) => {
      const child = createAnnotationForm({
        client, ontology, spec: childSpec, instances,
        depth: depth + 1,
        onSaved: (ids) => {
          // the referenced instance now exists; link it and resume
          for (const id of ids) {
            refValues.get(field.property)?.push(id);
          }
          placeholder.remove();
          root.classList.remove("suspended");
          redrawReferences(field.property);
        },
      });
      child.append(el("button", {
        class: "nested-cancel", type: "button",
        onclick: () => {
          placeholder.remove();
          root.classList.remove("suspended");
        },
      }, ["cancel"]));
      clear(placeholder);
      placeholder.append(child);
    }).catch((error: unknown) => {
      placeholder.remove();
      root.classList.remove("suspended");
      banner.textContent = error instanceof Error ? error.message : String(error);
    });
  }

  function redrawReferences(property: string): void {
    const box = fieldBoxes.get(property);
    const listNode = box?.querySelector(".ref-list");
    if (!box || !listNode) return;
    clear(listNode);
    for (const ref of refValues.get(property) ?? []) {
      listNode.append(el("li", { class: "ref-item" }, [ref]));
    }
  }

  function collectAssertions(): AssertionPayload[] {
    const assertions: AssertionPayload[] = [];
    for (const field of spec.fields) {
      if (field.kind === "datatype") {
        const value = inputs.get(field.property)?.value.trim() ?? "";
        if (value) {
          const datatype = DATATYPES.has(field.rangeHint) ? field.rangeHint : "string";
          assertions.push({ property: field.property, literal: value, datatype });
        }
      } else {
        for (const ref of refValues.get(field.property) ?? []) {
          assertions.push({ property: field.property, ref });
        }
      }
    }
    return assertions;
  }

  function clearViolations(): void {
    banner.textContent = "";
    clear(formViolations);
    for (const box of fieldBoxes.values()) {
      const list = box.querySelector(".field-violations");
      if (list) clear(list);
      box.classList.remove("invalid");
    }
  }

  function showViolations(violations: Array<{ code: string; subjects: string[]; message: string }>): void {
    for (const violation of violations) {
      const property = violation.subjects.find((s) => fieldBoxes.has(s));
      const line = `${violation.code}: ${violation.message}`;
      if (property) {
        const box = fieldBoxes.get(property)!;
        box.classList.add("invalid");
        box.querySelector(".field-violations")?.append(el("li", { class: "violation" }, [line]));
        const details = box.closest("details");
        if (details) (details as HTMLDetailsElement).open = true;
      } else {
        formViolations.append(el("li", { class: "violation" }, [line]));
      }
    }
  }

  async function submit(): Promise<void> {
    clearViolations();
    const doc: AnnotationDoc = {
      instanceID: idInput.value.trim(),
      classID: spec.classID,
      assertions: collectAssertions(),
    };
    if (!doc.instanceID) {
      banner.textContent = "enter an instance identifier first";
      return;
    }
    try {
      const saved = await client.submitInstances(ontology, doc);
      options.onSaved?.(saved);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        showViolations(error.violations);
      } else {
        // network or server trouble: keep the draft, surface the message
        banner.textContent = error instanceof Error ? error.message : String(error);
      }
    }
  }

  root.append(
    el("h3", { class: "form-title" }, [`Annotate as ${spec.classID}`]),
    banner,
    el("div", { class: "field instance-id" }, [
      el("label", { class: "field-label" }, ["instanceID"]),
      idInput,
    ]),
    fieldsBox,
    formViolations,
    el("button", { class: "submit", type: "button", onclick: () => { void submit(); } },
       ["Submit"]),
    nestedHost,
  );
  return root;
}
