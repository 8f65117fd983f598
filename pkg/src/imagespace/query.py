"""Datalog-style triple queries: parsing, SQL compilation, execution, reference evaluation.

Grammar:

    Answer(V {, V}) :- atom {, atom} .
    atom ::= instanceOf(T, ClassName) | propertyName(T, T)
    T    ::= $name | bare-identifier | "quoted literal"

Queries must be safe: every head variable occurs in at least one atom.
Compilation emits a single SELECT DISTINCT joining one table alias per atom;
constants always travel as bind parameters.
"""

from __future__ import annotations

import sqlite3
from dataclasses import dataclass, field

from .errors import QuerySyntaxError, UnknownClass, UnknownProperty, UnsafeQuery
from .model import InstanceGraph, OntologyDoc, subclass_closure
from .store import Catalog, load_catalog, stored_subclass_closure


# ---------------------------------------------------------------------------
# terms and atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: str


@dataclass(frozen=True)
class Lit:
    value: str


Term = Var | Const | Lit


@dataclass(frozen=True)
class InstanceOfAtom:
    term: Term
    class_name: str


@dataclass(frozen=True)
class PropAtom:
    property_id: str
    subject: Term
    value: Term


Atom = InstanceOfAtom | PropAtom


@dataclass(frozen=True)
class TripleQuery:
    head_vars: tuple[str, ...]
    atoms: tuple[Atom, ...]

    def variables(self) -> list[str]:
        """All variables in first-occurrence order."""
        seen: list[str] = []
        for atom in self.atoms:
            terms = (atom.term,) if isinstance(atom, InstanceOfAtom) else (atom.subject, atom.value)
            for term in terms:
                if isinstance(term, Var) and term.name not in seen:
                    seen.append(term.name)
        return seen


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_PUNCT = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA"}
_IDENT_STOP = set(' \t\r\n(),"')


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append((_PUNCT[ch], ch, i))
            i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise QuerySyntaxError("unterminated string literal", i)
            tokens.append(("STRING", text[i + 1:j], i))
            i = j + 1
            continue
        if text.startswith(":-", i):
            tokens.append(("IMPLIES", ":-", i))
            i += 2
            continue
        if ch == ".":
            # a terminating dot only follows the closing paren of the last atom
            if tokens and tokens[-1][0] == "RPAREN":
                tokens.append(("DOT", ".", i))
                i += 1
                continue
            raise QuerySyntaxError("unexpected '.'", i)
        j = i
        while j < n and text[j] not in _IDENT_STOP:
            if text[j] == "." and j + 1 >= n:
                break
            if text.startswith(":-", j):
                break
            j += 1
        if j == i:
            raise QuerySyntaxError(f"unexpected character {ch!r}", i)
        word = text[i:j]
        if word.startswith("$"):
            if len(word) == 1:
                raise QuerySyntaxError("variable without a name", i)
            tokens.append(("VAR", word[1:], i))
        else:
            tokens.append(("IDENT", word, i))
        i = j
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[tuple[str, str, int]], length: int):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expected: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError(f"expected {expected}, found end of input", self.length)
        if tok[0] != expected:
            raise QuerySyntaxError(f"expected {expected}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok


def parse_query(text: str) -> TripleQuery:
    """Parse the query language; raises QuerySyntaxError or UnsafeQuery."""
    stream = _TokenStream(_tokenize(text), len(text))
    kind, word, pos = stream.next("IDENT")
    if word != "Answer":
        raise QuerySyntaxError(f"queries start with Answer, found {word!r}", pos)
    stream.next("LPAREN")
    head_vars = [stream.next("VAR")[1]]
    while stream.peek() and stream.peek()[0] == "COMMA":
        stream.next("COMMA")
        head_vars.append(stream.next("VAR")[1])
    stream.next("RPAREN")
    stream.next("IMPLIES")

    atoms = [_parse_atom(stream)]
    while stream.peek() and stream.peek()[0] == "COMMA":
        stream.next("COMMA")
        atoms.append(_parse_atom(stream))
    stream.next("DOT")
    trailing = stream.peek()
    if trailing is not None:
        raise QuerySyntaxError(f"unexpected input after '.': {trailing[1]!r}", trailing[2])

    query = TripleQuery(tuple(head_vars), tuple(atoms))
    bound = set(query.variables())
    missing = [v for v in head_vars if v not in bound]
    if missing:
        raise UnsafeQuery(f"head variable(s) not bound by any atom: {', '.join(missing)}")
    return query


def _parse_term(stream: _TokenStream) -> Term:
    tok = stream.peek()
    if tok is None:
        raise QuerySyntaxError("expected a term, found end of input", stream.length)
    kind, word, pos = tok
    stream.pos += 1
    if kind == "VAR":
        return Var(word)
    if kind == "STRING":
        return Lit(word)
    if kind == "IDENT":
        return Const(word)
    raise QuerySyntaxError(f"expected a term, found {word!r}", pos)


def _parse_atom(stream: _TokenStream) -> Atom:
    kind, name, pos = stream.next("IDENT")
    stream.next("LPAREN")
    first = _parse_term(stream)
    stream.next("COMMA")
    second = _parse_term(stream)
    stream.next("RPAREN")
    if name == "instanceOf":
        if isinstance(second, Var):
            raise QuerySyntaxError("instanceOf takes a class name, not a variable", pos)
        return InstanceOfAtom(first, second.value)
    return PropAtom(name, first, second)


# ---------------------------------------------------------------------------
# compilation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqlPlan:
    sql: str
    params: tuple[str, ...]
    projection: dict[str, str] = field(hash=False, default_factory=dict)
    empty: bool = False


def compile_query(
    query: TripleQuery,
    catalog: Catalog,
    closure: bool = False,
    closure_sets: dict[str, set[str]] | None = None,
    strict: bool = False,
) -> SqlPlan:
    """One SELECT DISTINCT with one table alias per atom.

    With closure enabled, instanceOf matches the class or any member of its
    supplied closure set. A property without a catalog entry makes the query
    provably empty (or raises UnknownProperty in strict mode).
    """
    tables: list[str] = []
    predicates: list[str] = []
    params: list[str] = []
    first_occurrence: dict[str, str] = {}
    provably_empty = False

    def bind(term: Term, column: str):
        if isinstance(term, Var):
            if term.name in first_occurrence:
                predicates.append(f"{column} = {first_occurrence[term.name]}")
            else:
                first_occurrence[term.name] = column
        else:
            predicates.append(f"{column} = ?")
            params.append(term.value)

    for i, atom in enumerate(query.atoms):
        alias = f"a{i}"
        if isinstance(atom, InstanceOfAtom):
            tables.append(f"Instance {alias}")
            if strict and closure_sets is not None and atom.class_name not in closure_sets:
                raise UnknownClass(atom.class_name)
            matched = {atom.class_name}
            if closure and closure_sets is not None:
                matched |= closure_sets.get(atom.class_name, set())
            ordered = sorted(matched)
            if len(ordered) == 1:
                predicates.append(f"{alias}.classID = ?")
            else:
                predicates.append(f"{alias}.classID IN ({', '.join('?' * len(ordered))})")
            params.extend(ordered)
            bind(atom.term, f"{alias}.instanceID")
        else:
            table = catalog.by_property.get(atom.property_id)
            if table is None:
                if strict:
                    raise UnknownProperty(atom.property_id)
                provably_empty = True
                table = "Instance"  # placeholder; the plan is replaced below
            tables.append(f'"{table}" {alias}')
            bind(atom.subject, f"{alias}.subject")
            bind(atom.value, f"{alias}.value")

    if provably_empty:
        columns = ", ".join(f"NULL AS v_{v}" for v in query.head_vars)
        return SqlPlan(
            sql=f"SELECT DISTINCT {columns} WHERE 0 = 1",
            params=(),
            projection={v: f"v_{v}" for v in query.head_vars},
            empty=True,
        )

    projection = {v: first_occurrence[v] for v in query.head_vars}
    select = ", ".join(f"{first_occurrence[v]} AS v_{v}" for v in query.head_vars)
    sql = f"SELECT DISTINCT {select} FROM {', '.join(tables)}"
    if predicates:
        sql += " WHERE " + " AND ".join(predicates)
    return SqlPlan(sql=sql, params=tuple(params), projection=projection)


def execute_query(
    conn: sqlite3.Connection, query: TripleQuery, closure: bool = False
) -> set[tuple[str, ...]]:
    """Run the compiled plan; returns the set of head-variable bindings."""
    catalog = load_catalog(conn)
    closure_sets = None
    if closure:
        closure_sets = {
            atom.class_name: stored_subclass_closure(conn, atom.class_name)
            for atom in query.atoms
            if isinstance(atom, InstanceOfAtom)
        }
    plan = compile_query(query, catalog, closure=closure, closure_sets=closure_sets)
    rows = conn.execute(plan.sql, plan.params).fetchall()
    return {tuple(str(v) for v in row) for row in rows}


# ---------------------------------------------------------------------------
# reference evaluation
# ---------------------------------------------------------------------------

def eval_reference(
    graph: InstanceGraph,
    doc: OntologyDoc,
    query: TripleQuery,
    closure: bool = False,
) -> set[tuple[str, ...]]:
    """Naive bottom-up evaluation over the asserted data; the testing oracle.

    Extends partial substitutions atom by atom against the assertion lists,
    which enumerates exactly the substitutions over the active domain that
    satisfy every atom. Desk-scale only.
    """
    facts: dict[str, list[tuple[str, str]]] = {}
    for iid, inst in graph.instances.items():
        for pid, value in inst.assertions:
            facts.setdefault(pid, []).append((iid, value.as_text()))
    class_of = {iid: inst.class_id for iid, inst in graph.instances.items()}

    def class_matches(class_name: str) -> set[str]:
        if closure:
            return subclass_closure(doc, class_name)
        return {class_name}

    bindings: list[dict[str, str]] = [{}]
    for atom in query.atoms:
        if isinstance(atom, InstanceOfAtom):
            matched = class_matches(atom.class_name)
            candidates = [(iid,) for iid, cid in class_of.items() if cid in matched]
            terms = (atom.term,)
        else:
            candidates = [tuple(pair) for pair in facts.get(atom.property_id, ())]
            terms = (atom.subject, atom.value)

        extended: list[dict[str, str]] = []
        seen: set[tuple] = set()
        for binding in bindings:
            for row in candidates:
                new = _match(binding, terms, row)
                if new is not None:
                    key = tuple(sorted(new.items()))
                    if key not in seen:
                        seen.add(key)
                        extended.append(new)
        bindings = extended
        if not bindings:
            break

    return {tuple(b[v] for v in query.head_vars) for b in bindings}


def _match(binding: dict[str, str], terms: tuple[Term, ...], row: tuple[str, ...]):
    new = binding
    for term, value in zip(terms, row):
        if isinstance(term, Var):
            bound = new.get(term.name)
            if bound is None:
                if new is binding:
                    new = dict(binding)
                new[term.name] = value
            elif bound != value:
                return None
        elif term.value != value:
            return None
    return new if new is not binding else dict(binding)
