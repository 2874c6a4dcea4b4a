"""HTTP+JSON front of the survey service.

Endpoints:
    POST /sessions                  create a session
    GET  /sessions/{id}/next        next task payload or a done marker
    POST /sessions/{id}/responses   submit a response
    GET  /export?kind=&session=     full response bundle (admin token)

All bodies are schema-versioned. Export requires the static admin token in
the X-Admin-Token header; everything a respondent sees stays blind.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .service import (
    SCHEMA_VERSION,
    DuplicateSubmission,
    InvalidResponse,
    SurveyService,
    UnknownSession,
    UnknownTask,
)
from .store import StoreUnavailable


class SessionRequest(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    respondentLabel: str = ""


class ResponseRequest(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    taskId: str
    kind: str
    payload: dict = Field(default_factory=dict)


def create_app(service: SurveyService, admin_token: str,
               ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="plagbench survey service")

    @app.exception_handler(UnknownSession)
    @app.exception_handler(UnknownTask)
    async def _not_found(request: Request, exc: Exception):
        return _error(404, exc)

    @app.exception_handler(DuplicateSubmission)
    async def _conflict(request: Request, exc: Exception):
        return _error(409, exc)

    @app.exception_handler(InvalidResponse)
    async def _invalid(request: Request, exc: Exception):
        return _error(422, exc)

    @app.exception_handler(StoreUnavailable)
    async def _unavailable(request: Request, exc: Exception):
        return _error(503, exc)

    def _error(status: int, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={
                "schemaVersion": SCHEMA_VERSION,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            },
        )

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionRequest):
        session = service.create_session(body.respondentLabel)
        return {
            "schemaVersion": SCHEMA_VERSION,
            "sessionId": session.session_id,
            "groupIndex": session.group_index,
            "createdAt": session.created_at,
        }

    @app.get("/sessions/{session_id}/next")
    def next_task(session_id: str):
        return service.next_task(session_id)

    @app.post("/sessions/{session_id}/responses", status_code=201)
    def submit_response(session_id: str, body: ResponseRequest):
        return service.submit_response(session_id, body.taskId, body.kind, body.payload)

    @app.get("/export")
    def export(kind: str | None = None, session: str | None = None,
               x_admin_token: str | None = Header(default=None)):
        if not admin_token or x_admin_token != admin_token:
            raise HTTPException(status_code=401, detail="admin token required")
        return service.export_responses(kind, session)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
