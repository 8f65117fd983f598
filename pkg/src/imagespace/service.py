"""HTTP service exposing ontology, annotation, query, and view endpoints.

Handlers open a fresh database connection per request and hold no document
state between requests; every mutation runs inside a store transaction, so a
4xx response leaves the database untouched.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse

from . import damlio, store, viz
from .consistency import (
    Applied, Cascaded, FILTERABLE_RELATIONS, apply_edit, candidate_classes,
    check_ontology,
)
from .errors import (
    ConstraintViolation, DanglingReference, ImagespaceError, MalformedXml,
    QuerySyntaxError, UnknownClass, UnknownConstruct, UnknownOntology,
    UnsafeQuery, ValidationFailed,
)
from .query import execute_query, parse_query
from .wire import (
    WireFormatError, annotation_graph_from_json, edit_from_json,
    form_spec_to_json, outcome_to_json, violations_to_json,
)
from .model import annotation_form_spec


@dataclass
class ServiceConfig:
    """Environment overrides: IMAGESPACE_DB, IMAGESPACE_LISTEN, IMAGESPACE_IMAGES."""

    db_path: str
    listen: str = "127.0.0.1:8000"
    strict_parse: bool = False
    closure_default: bool = True
    image_base: str | None = None

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        values = {
            "db_path": os.environ.get("IMAGESPACE_DB", "imagespace.db"),
            "listen": os.environ.get("IMAGESPACE_LISTEN", "127.0.0.1:8000"),
            "image_base": os.environ.get("IMAGESPACE_IMAGES"),
        }
        values.update(overrides)
        return cls(**values)


def _error(status: int, message: str, violations=None) -> JSONResponse:
    body = {"error": message}
    if violations is not None:
        body["violations"] = violations_to_json(violations)
    return JSONResponse(body, status_code=status)


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="imagespace", version="0.1.0")
    # the web UI may be served from a different origin than the API
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    def connect():
        return store.open_connection(config.db_path)

    @app.get("/ontologies")
    def list_ontologies():
        conn = connect()
        try:
            rows = store.list_ontologies(conn)
        finally:
            conn.close()
        return [{"id": oid, "versionInfo": version, "comment": comment}
                for oid, version, comment in rows]

    @app.post("/ontologies", status_code=201)
    async def import_ontology(request: Request):
        data = await request.body()
        try:
            report = damlio.parse_ontology(data, strict=config.strict_parse)
        except (MalformedXml, UnknownConstruct, DanglingReference) as exc:
            return _error(400, str(exc))
        violations = check_ontology(report.doc)
        if violations:
            return _error(409, "ontology is inconsistent", violations)
        conn = connect()
        try:
            store.save_ontology(conn, report.doc)
        except ConstraintViolation as exc:
            return _error(409, str(exc))
        finally:
            conn.close()
        return {"id": report.doc.ontology_id,
                "warnings": [{"location": loc, "message": msg} for loc, msg in report.warnings]}

    @app.get("/ontologies/{ontology_id}")
    def export_ontology(ontology_id: str):
        conn = connect()
        try:
            doc = store.load_ontology(conn, ontology_id)
        except UnknownOntology as exc:
            return _error(404, str(exc))
        finally:
            conn.close()
        return Response(damlio.serialize_ontology(doc), media_type="application/xml")

    @app.post("/ontologies/{ontology_id}/edits")
    async def edit_ontology(ontology_id: str, request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError as exc:
            return _error(400, f"invalid JSON: {exc}")
        try:
            edit = edit_from_json(payload)
        except WireFormatError as exc:
            return _error(400, str(exc))
        conn = connect()
        try:
            try:
                doc = store.load_ontology(conn, ontology_id)
            except UnknownOntology as exc:
                return _error(404, str(exc))
            outcome = apply_edit(doc, edit)
            if isinstance(outcome, (Applied, Cascaded)):
                store.replace_ontology(conn, outcome.doc)
                return outcome_to_json(outcome)
            return JSONResponse(outcome_to_json(outcome), status_code=409)
        finally:
            conn.close()

    @app.get("/ontologies/{ontology_id}/classes/{class_id}/form")
    def class_form(ontology_id: str, class_id: str):
        conn = connect()
        try:
            doc = store.load_ontology(conn, ontology_id)
        except UnknownOntology as exc:
            return _error(404, str(exc))
        finally:
            conn.close()
        try:
            spec = annotation_form_spec(doc, class_id)
        except (UnknownClass, ImagespaceError) as exc:
            return _error(404, str(exc))
        return form_spec_to_json(spec)

    @app.get("/ontologies/{ontology_id}/classes/{class_id}/candidates")
    def class_candidates(ontology_id: str, class_id: str, relation: str):
        if relation not in FILTERABLE_RELATIONS:
            return _error(400, f"unsupported relation kind: {relation}")
        conn = connect()
        try:
            doc = store.load_ontology(conn, ontology_id)
        except UnknownOntology as exc:
            return _error(404, str(exc))
        finally:
            conn.close()
        try:
            names = candidate_classes(doc, class_id, relation)
        except UnknownClass as exc:
            return _error(404, str(exc))
        return {"relation": relation, "candidates": sorted(names)}

    @app.post("/ontologies/{ontology_id}/instances", status_code=201)
    async def submit_instances(ontology_id: str, request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError as exc:
            return _error(400, f"invalid JSON: {exc}")
        try:
            graph = annotation_graph_from_json(payload)
        except WireFormatError as exc:
            return _error(400, str(exc))
        conn = connect()
        try:
            try:
                store.save_instances(conn, ontology_id, graph)
            except UnknownOntology as exc:
                return _error(404, str(exc))
            except ValidationFailed as exc:
                return _error(422, "annotation failed validation", exc.violations)
            except ConstraintViolation as exc:
                return _error(409, str(exc))
        finally:
            conn.close()
        return {"saved": sorted(graph.instances)}

    @app.post("/ontologies/{ontology_id}/query")
    async def run_query(ontology_id: str, request: Request):
        closure = config.closure_default
        content_type = request.headers.get("content-type", "")
        body = await request.body()
        if "application/json" in content_type:
            try:
                payload = json.loads(body)
            except json.JSONDecodeError as exc:
                return _error(400, f"invalid JSON: {exc}")
            if not isinstance(payload, dict) or "query" not in payload:
                return _error(400, "JSON body must contain a 'query' field")
            text = str(payload["query"])
            closure = bool(payload.get("closure", closure))
        else:
            text = body.decode("utf-8", errors="replace")
        conn = connect()
        try:
            try:
                store.load_ontology(conn, ontology_id)
            except UnknownOntology as exc:
                return _error(404, str(exc))
            try:
                q = parse_query(text)
            except (QuerySyntaxError, UnsafeQuery) as exc:
                return _error(400, str(exc))
            bindings = execute_query(conn, q, closure=closure)
        finally:
            conn.close()
        rows = sorted(bindings)
        if len(q.head_vars) == 1:
            return [row[0] for row in rows]
        return [list(row) for row in rows]

    @app.get("/ontologies/{ontology_id}/graph")
    def graph_view(
        ontology_id: str,
        view: str = "class",
        layout: str = "hierarchical",
        seed: int = 0,
    ):
        if view not in viz.VIEW_KINDS:
            return _error(400, f"unknown view kind: {view}")
        if layout not in ("hierarchical", "organic"):
            return _error(400, f"unknown layout: {layout}")
        conn = connect()
        try:
            doc = store.load_ontology(conn, ontology_id)
        except UnknownOntology as exc:
            return _error(404, str(exc))
        finally:
            conn.close()
        graph = viz.build_view(doc, view)
        if layout == "hierarchical":
            result = viz.layout_hierarchical(graph)
        else:
            result = viz.layout_organic(graph, seed=seed)
        return viz.graph_payload(graph, result)

    @app.get("/images/{path:path}")
    def serve_image(path: str):
        if config.image_base is None:
            return _error(404, "image serving is not configured")
        base = Path(config.image_base).resolve()
        target = (base / path).resolve()
        if base not in target.parents and target != base:
            return _error(404, "not found")
        if not target.is_file():
            return _error(404, "not found")
        return FileResponse(target)

    return app
