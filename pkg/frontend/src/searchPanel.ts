/** Triple search panel: category plus property/subject/value rows composing to
 * query text; results render as an image gallery. Parse errors from the
 * service highlight the offending triple row.
 */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import { composeQuery, rowAtOffset, type ComposedQuery, type TripleRow } from "./queryText.js";
import { imagePathFor, isImageUri } from "./thumbnails.js";

export interface SearchPanelOptions {
  client: ApiClient;
  ontology: string;
  classIds: string[];
  onResults?: (bindings: string[]) => void;
}

export function createSearchPanel(options: SearchPanelOptions): HTMLElement {
  const { client, ontology } = options;

  const categorySelect = el("select", { class: "category-select" }, [
    el("option", { value: "" }, ["(any category)"]),
    ...options.classIds.map((cid) => el("option", { value: cid }, [cid])),
  ]);
  const tripleHost = el("div", { class: "triples" });
  const preview = el("pre", { class: "query-preview" });
  const errorBox = el("div", { class: "search-error", role: "alert" });
  const gallery = el("div", { class: "gallery" });

  const rows: Array<{ box: HTMLElement; property: HTMLInputElement;
                      subject: HTMLInputElement; value: HTMLInputElement }> = [];

  function addTripleRow(initial?: TripleRow): void {
    const property = el("input", { class: "t-prop", placeholder: "property" });
    const subject = el("input", { class: "t-subj", placeholder: "$subject" });
    const value = el("input", { class: "t-val", placeholder: "value or $var" });
    if (initial) {
      property.value = initial.property;
      subject.value = initial.subject;
      value.value = initial.value;
    }
    const box = el("div", { class: "triple-row" }, [
      property, subject, value,
      el("button", {
        class: "triple-remove", type: "button",
        onclick: () => {
          const index = rows.findIndex((r) => r.box === box);
          if (index >= 0) rows.splice(index, 1);
          box.remove();
          refreshPreview();
        },
      }, ["−"]),
    ]);
    for (const input of [property, subject, value]) {
      input.addEventListener("input", refreshPreview);
    }
    rows.push({ box, property, subject, value });
    tripleHost.append(box);
    refreshPreview();
  }

  function currentTriples(): TripleRow[] {
    return rows
      .filter((r) => r.property.value.trim())
      .map((r) => ({
        property: r.property.value,
        subject: r.subject.value,
        value: r.value.value,
      }));
  }

  function compose(): ComposedQuery {
    return composeQuery(categorySelect.value, currentTriples());
  }

  function refreshPreview(): void {
    preview.textContent = compose().text;
  }

  function renderGallery(bindings: string[]): void {
    clear(gallery);
    if (bindings.length === 0) {
      gallery.append(el("p", { class: "empty" }, ["No matching images."]));
      return;
    }
    for (const binding of bindings) {
      if (isImageUri(binding)) {
        gallery.append(el("figure", { class: "thumb" }, [
          el("img", { src: client.imageUrl(imagePathFor(binding)), alt: binding }),
          el("figcaption", {}, [binding]),
        ]));
      } else {
        gallery.append(el("div", { class: "card" }, [binding]));
      }
    }
  }

  function markErrorRow(composed: ComposedQuery, message: string): void {
    const match = /offset (\d+)/.exec(message);
    if (!match) return;
    const row = rowAtOffset(composed, Number(match[1]));
    if (row !== null && row >= 0 && row < rows.length) {
      rows[row].box.classList.add("error");
    } else if (row === -1) {
      categorySelect.classList.add("error");
    }
  }

  async function run(): Promise<void> {
    errorBox.textContent = "";
    categorySelect.classList.remove("error");
    for (const row of rows) row.box.classList.remove("error");

    const composed = compose();
    if (composed.spans.length === 0) {
      errorBox.textContent = "add a category or at least one triple";
      return;
    }
    try {
      const result = await client.runQuery(ontology, composed.text);
      const bindings = (result as Array<string | string[]>).map((entry) =>
        Array.isArray(entry) ? entry[0] : entry);
      renderGallery(bindings);
      options.onResults?.(bindings);
    } catch (error) {
      if (error instanceof ApiError && error.status === 400) {
        errorBox.textContent = error.message;
        markErrorRow(composed, error.message);
      } else {
        errorBox.textContent = error instanceof Error ? error.message : String(error);
      }
    }
  }

  addTripleRow();
  const element = el("div", { class: "search-panel" }, [
    el("div", { class: "query-builder" }, [
      el("label", {}, ["Category: ", categorySelect]),
      tripleHost,
      el("button", { class: "triple-add", type: "button", onclick: () => addTripleRow() },
         ["+ triple"]),
      el("button", { class: "run", type: "button", onclick: () => { void run(); } },
         ["Search"]),
    ]),
    preview,
    errorBox,
    gallery,
  ]);
  categorySelect.addEventListener("change", refreshPreview);
  refreshPreview();
  return element;
}
