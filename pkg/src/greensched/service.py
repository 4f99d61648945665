"""HTTP front door. Thin FastAPI wiring over AppCore; all behavior
lives in core/domain modules so the CLI shares the same code paths."""

from __future__ import annotations

import os

from fastapi import FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import ServiceConfig
from .core import AppCore
from .errors import (AuthenticationError, AuthorizationError, ConfigError,
                     ConflictError, ConsistencyError, DomainError,
                     GreenschedError, IntegrityError, NotFoundError,
                     ParseError, ValidationError)
from .scheduling import DailySchedule

_STATUS_BY_ERROR = (
    (ConsistencyError, 422),
    (NotFoundError, 404),
    (ConflictError, 409),
    (IntegrityError, 409),
    (AuthorizationError, 401),
    (AuthenticationError, 401),
    (ParseError, 400),
    (ValidationError, 400),
    (DomainError, 400),
    (ConfigError, 400),
)


def _status_for(exc: GreenschedError) -> int:
    for cls, status in _STATUS_BY_ERROR:
        if isinstance(exc, cls):
            return status
    return 400


def schedule_doc(schedule: DailySchedule, extras: dict | None = None) -> dict:
    doc = {
        "building_id": schedule.building_id,
        "date": schedule.date.isoformat(),
        "slots": list(schedule.slots),
        "slot_string": schedule.slot_string(),
        "ehp_hours": schedule.ehp_hours,
        "forecast_digest": schedule.forecast_digest,
        "schedule_digest": schedule.digest(),
    }
    if extras:
        doc.update(extras)
    return doc


def block_doc(block) -> dict:
    return {"height": block.height, "prev_hash": block.prev_hash,
            "timestamp": block.timestamp, "block_hash": block.block_hash,
            "txs": [tx.to_doc() for tx in block.txs]}


def create_app(cfg: ServiceConfig, core: AppCore | None = None) -> FastAPI:
    core = core or AppCore(cfg)
    app = FastAPI(title="greensched", version="0.1.0",
                  openapi_url="/api/openapi")
    app.state.core = core

    @app.exception_handler(GreenschedError)
    async def domain_error_handler(request, exc: GreenschedError):
        body = {"error": type(exc).__name__, "detail": str(exc)}
        if getattr(exc, "hour", None) is not None:
            body["hour"] = exc.hour
        if getattr(exc, "line", None) is not None:
            body["line"] = exc.line
        return JSONResponse(status_code=_status_for(exc), content=body)

    @app.exception_handler(RequestValidationError)
    async def request_error_handler(request, exc):
        return JSONResponse(status_code=400,
                            content={"error": "ValidationError",
                                     "detail": str(exc)})

    def authorize(member_key: str | None):
        if member_key != cfg.member_key:
            raise AuthorizationError("unknown member key")

    @app.post("/api/buildings", status_code=201)
    async def post_building(request: Request,
                            x_member_key: str | None = Header(None)):
        authorize(x_member_key)
        attrs = await request.json()
        profile = core.register_building(attrs)
        return {"building_id": profile.id, "blc": profile.blc}

    @app.post("/api/forecasts", status_code=201)
    async def post_forecast(request: Request,
                            x_member_key: str | None = Header(None)):
        authorize(x_member_key)
        body = await request.body()
        days = core.ingest_forecast(body)
        return {"days": [{"date": d, "digest": g} for d, g in days]}

    @app.post("/api/devices", status_code=201)
    async def post_device(request: Request,
                          x_member_key: str | None = Header(None)):
        authorize(x_member_key)
        doc = await request.json()
        device_id = core.register_device(doc)
        return {"device_id": device_id}

    @app.post("/api/schedules", status_code=201)
    async def post_schedule(request: Request,
                            baseline: int = Query(0),
                            x_member_key: str | None = Header(None)):
        authorize(x_member_key)
        doc = await request.json()
        try:
            building_id = str(doc["building_id"])
            date = str(doc["date"])
            temp = float(doc["current_temp_c"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad schedule request: {exc}") from exc
        schedule, extras = core.create_schedule(
            building_id, date, temp, include_baseline=bool(baseline))
        return schedule_doc(schedule, extras)

    @app.post("/api/schedules/{building_id}/{date}/execute", status_code=202)
    async def post_execute(building_id: str, date: str,
                           sim: int = Query(0),
                           x_member_key: str | None = Header(None)):
        authorize(x_member_key)
        records = core.execute_schedule(building_id, date,
                                        simulate=bool(sim))
        return {"records": [vars(r) for r in records]}

    @app.get("/api/metrics/{building_id}/{date}")
    async def get_metrics(building_id: str, date: str):
        return core.compute_metrics(building_id, date).to_doc()

    @app.get("/api/ledger/blocks")
    async def get_blocks(start: int = Query(0, alias="from"),
                         to: int | None = Query(None)):
        return {"blocks": [block_doc(b) for b in core.ledger_blocks(start, to)]}

    @app.get("/api/ledger/verify")
    async def get_verify():
        return core.verify_ledger().to_doc()

    ui_dir = os.environ.get(
        "GLS_UI_DIR",
        os.path.join(os.path.dirname(__file__), "..", "..", "frontend", "dist"))
    if os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
