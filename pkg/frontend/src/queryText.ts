/** Compose triple rows and a category into query text, tracking atom spans. */

export interface TripleRow {
  property: string;
  subject: string;
  value: string;
}

export interface AtomSpan {
  start: number;
  end: number;
  /** Index into the triple rows; -1 for the category atom. */
  row: number;
}

export interface ComposedQuery {
  text: string;
  spans: AtomSpan[];
}

export const HEAD_VAR = "$image";

const BARE = /^[A-Za-z_$][A-Za-z0-9_.:/#~%?&+-]*$/;

/** Variables pass through; identifier-shaped text stays bare; anything else is quoted. */
export function formatTerm(raw: string): string {
  const text = raw.trim();
  if (text.startsWith("$")) return text;
  if (BARE.test(text)) return text;
  return `"${text.replace(/"/g, '\\"')}"`;
}

export function composeQuery(category: string, rows: TripleRow[]): ComposedQuery {
  const atoms: Array<{ text: string; row: number }> = [];
  if (category) {
    atoms.push({ text: `instanceOf(${HEAD_VAR}, ${category})`, row: -1 });
  }
  rows.forEach((triple, index) => {
    const property = triple.property.trim();
    const subject = formatTerm(triple.subject);
    const value = formatTerm(triple.value);
    atoms.push({ text: `${property}(${subject}, ${value})`, row: index });
  });
  let text = `Answer(${HEAD_VAR}) :- `;
  const spans: AtomSpan[] = [];
  atoms.forEach((atom, index) => {
    if (index > 0) text += ", ";
    spans.push({ start: text.length, end: text.length + atom.text.length, row: atom.row });
    text += atom.text;
  });
  text += ".";
  return { text, spans };
}

/** Which triple row a parser error offset falls into (-1 for category, null if outside). */
export function rowAtOffset(composed: ComposedQuery, offset: number): number | null {
  for (const span of composed.spans) {
    if (offset >= span.start && offset <= span.end) return span.row;
  }
  return null;
}
