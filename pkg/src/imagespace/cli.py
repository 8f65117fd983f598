"""Command-line interface for batch workflows and serving.

Violations print one per line as `CODE subject...: message`; any violation or
error exits with status 1.
"""

from __future__ import annotations

import json
import sys

import click

from . import damlio, store, viz
from .consistency import check_ontology
from .errors import ImagespaceError, ValidationFailed
from .query import execute_query, parse_query
from .service import ServiceConfig, create_app
from .wire import WireFormatError, annotation_graph_from_json

DB_OPTION = click.option(
    "--db", envvar="IMAGESPACE_DB", default="imagespace.db", show_default=True,
    help="Path to the SQLite database file.",
)


def _fail(message: str) -> "click.exceptions.Exit":
    click.echo(message, err=True)
    return click.exceptions.Exit(1)


def _print_violations(violations) -> None:
    for v in violations:
        click.echo(v.render())


@click.group()
def main():
    """Ontology management engine for image repositories."""


@main.command("init-db")
@DB_OPTION
@click.option("--force", is_flag=True, help="Drop and recreate an existing schema.")
def init_db(db: str, force: bool):
    """Create the relational schema."""
    conn = store.open_connection(db)
    try:
        store.init_schema(conn, force=force)
    except ImagespaceError as exc:
        raise _fail(str(exc))
    finally:
        conn.close()


@main.command("import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@DB_OPTION
@click.option("--strict", is_flag=True, help="Treat unknown constructs as errors.")
def import_ontology(file: str, db: str, strict: bool):
    """Parse a DAML+OIL file and save it."""
    with open(file, "rb") as fh:
        data = fh.read()
    try:
        report = damlio.parse_ontology(data, strict=strict)
    except ImagespaceError as exc:
        raise _fail(f"parse error: {exc}")
    for location, message in report.warnings:
        click.echo(f"warning: {location}: {message}", err=True)
    violations = check_ontology(report.doc)
    if violations:
        _print_violations(violations)
        raise click.exceptions.Exit(1)
    conn = store.open_connection(db)
    try:
        store.save_ontology(conn, report.doc)
    except ImagespaceError as exc:
        raise _fail(str(exc))
    finally:
        conn.close()
    click.echo(report.doc.ontology_id)


@main.command("export")
@click.argument("ontology_id")
@DB_OPTION
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write to a file instead of stdout.")
def export_ontology(ontology_id: str, db: str, output: str | None):
    """Serialize a stored ontology back to DAML+OIL XML."""
    conn = store.open_connection(db)
    try:
        doc = store.load_ontology(conn, ontology_id)
        data = damlio.serialize_ontology(doc)
    except ImagespaceError as exc:
        raise _fail(str(exc))
    finally:
        conn.close()
    if output:
        with open(output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


@main.command("check")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--strict", is_flag=True, help="Treat unknown constructs as errors.")
def check_file(file: str, strict: bool):
    """Parse a file and report consistency violations."""
    with open(file, "rb") as fh:
        data = fh.read()
    try:
        report = damlio.parse_ontology(data, strict=strict)
    except ImagespaceError as exc:
        raise _fail(f"parse error: {exc}")
    violations = check_ontology(report.doc)
    if violations:
        _print_violations(violations)
        raise click.exceptions.Exit(1)


@main.command("annotate")
@click.argument("ontology_id")
@click.argument("annotations", type=click.Path(exists=True, dir_okay=False))
@DB_OPTION
def annotate(ontology_id: str, annotations: str, db: str):
    """Validate and save an annotation document (JSON)."""
    with open(annotations, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise _fail(f"invalid JSON: {exc}")
    try:
        graph = annotation_graph_from_json(data)
    except WireFormatError as exc:
        raise _fail(str(exc))
    conn = store.open_connection(db)
    try:
        store.save_instances(conn, ontology_id, graph)
    except ValidationFailed as exc:
        _print_violations(exc.violations)
        raise click.exceptions.Exit(1)
    except ImagespaceError as exc:
        raise _fail(str(exc))
    finally:
        conn.close()


@main.command("query")
@click.argument("ontology_id")
@click.option("--query-file", required=True, type=click.Path(exists=True, dir_okay=False))
@DB_OPTION
@click.option("--closure/--no-closure", default=True, show_default=True,
              help="Expand instanceOf over transitive subclasses.")
def run_query(ontology_id: str, query_file: str, db: str, closure: bool):
    """Run a triple query and print one binding per line."""
    with open(query_file, "r", encoding="utf-8") as fh:
        text = fh.read()
    conn = store.open_connection(db)
    try:
        store.load_ontology(conn, ontology_id)  # 404-equivalent guard
        q = parse_query(text)
        bindings = execute_query(conn, q, closure=closure)
    except ImagespaceError as exc:
        raise _fail(str(exc))
    finally:
        conn.close()
    for row in sorted(bindings):
        click.echo("\t".join(row))


@main.command("viz")
@click.argument("ontology_id")
@DB_OPTION
@click.option("--view", "view_kind", type=click.Choice(viz.VIEW_KINDS), default="class",
              show_default=True)
@click.option("--layout", "layout_name", type=click.Choice(["hierarchical", "organic"]),
              default="hierarchical", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the organic layout.")
def viz_command(ontology_id: str, db: str, view_kind: str, layout_name: str, fmt: str, seed: int):
    """Export a positioned graph view of an ontology."""
    conn = store.open_connection(db)
    try:
        doc = store.load_ontology(conn, ontology_id)
    except ImagespaceError as exc:
        raise _fail(str(exc))
    finally:
        conn.close()
    graph = viz.build_view(doc, view_kind)
    try:
        if layout_name == "hierarchical":
            layout = viz.layout_hierarchical(graph)
        else:
            layout = viz.layout_organic(graph, seed=seed)
        data = viz.export_graph(graph, layout, format=fmt)
    except ImagespaceError as exc:
        raise _fail(str(exc))
    sys.stdout.buffer.write(data)


@main.command("serve")
@DB_OPTION
@click.option("--listen", envvar="IMAGESPACE_LISTEN", default="127.0.0.1:8000", show_default=True)
@click.option("--images", envvar="IMAGESPACE_IMAGES", default=None,
              help="Base directory for serving referenced image files.")
@click.option("--strict", is_flag=True, help="Strict parsing for uploaded documents.")
@click.option("--closure/--no-closure", default=True, show_default=True,
              help="Default subclass-closure behavior for queries.")
def serve(db: str, listen: str, images: str | None, strict: bool, closure: bool):
    """Run the HTTP service."""
    import uvicorn

    host, _, port = listen.rpartition(":")
    config = ServiceConfig(
        db_path=db, listen=listen, strict_parse=strict,
        closure_default=closure, image_base=images,
    )
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
