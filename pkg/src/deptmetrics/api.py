"""Read-only HTTP API over one loaded snapshot.

Every response is a pure function of (snapshot, query): the snapshot is
immutable and shared across request handlers, so concurrent reads are
unrestricted. Refreshing data means restarting with a new snapshot id.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .model import NotFoundError, ValidationError
from .ranking import Direction, Metric, compare_adhoc, rank_institution, rank_thematic
from .render import metrics_json, table_json
from .snapshot import Snapshot


def _parse_metric(value: Optional[str]) -> Metric:
    if not value:
        return Metric.CITATIONS_PER_TRS
    try:
        return Metric(value)
    except ValueError:
        choices = ", ".join(m.value for m in Metric)
        raise ValidationError(f"unknown metric {value!r}; expected one of: {choices}")


def _parse_direction(value: Optional[str]) -> Direction:
    if not value:
        return Direction.DESCENDING
    try:
        return Direction(value)
    except ValueError:
        raise ValidationError(f"direction must be 'asc' or 'desc', got {value!r}")


def _split_csv(value: Optional[str]) -> list[str]:
    if not value:
        return []
    return [part.strip() for part in value.split(",") if part.strip()]


def create_app(
    snapshot: Snapshot,
    *,
    ui_dir: Optional[Path | str] = None,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="deptmetrics", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    departments = {d.id: d for d in snapshot.departments}
    institutions = {i.id: i for i in snapshot.institutions}
    metrics_by_dept = {m.department_id: m for m in snapshot.metrics}
    institutions_sorted = sorted(
        snapshot.institutions, key=lambda i: (-i.trs_count, i.name)
    )

    def render_table(table) -> dict:
        return table_json(table, departments, institutions)

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(ValidationError)
    async def _bad_request(request: Request, exc: ValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/api/institutions")
    def list_institutions() -> list[dict]:
        return [
            {
                "id": inst.id,
                "name": inst.name,
                "abbreviation": inst.abbreviation,
                "trs_count": inst.trs_count,
            }
            for inst in institutions_sorted
        ]

    @app.get("/api/institutions/{institution_id}/ranking")
    def institution_ranking(
        institution_id: str,
        metric: Optional[str] = None,
        direction: Optional[str] = None,
        top: Optional[int] = None,
    ) -> dict:
        table = rank_institution(
            snapshot,
            institution_id,
            _parse_metric(metric),
            k=top,
            direction=_parse_direction(direction),
        )
        return render_table(table)

    @app.get("/api/thematic")
    def thematic(
        q: str = "",
        exclude: Optional[str] = None,
        metric: Optional[str] = None,
        direction: Optional[str] = None,
        top: Optional[int] = None,
    ) -> dict:
        table = rank_thematic(
            snapshot,
            q.split(),
            exclude=_split_csv(exclude),
            metric=_parse_metric(metric),
            k=top,
            direction=_parse_direction(direction),
        )
        return render_table(table)

    @app.get("/api/compare")
    def compare(
        ids: str = "",
        metric: Optional[str] = None,
        direction: Optional[str] = None,
    ) -> dict:
        table = compare_adhoc(
            snapshot,
            _split_csv(ids),
            _parse_metric(metric),
            direction=_parse_direction(direction),
        )
        return render_table(table)

    @app.get("/api/departments/{department_id}")
    def department_detail(department_id: str) -> dict:
        dept = departments.get(department_id)
        metrics = metrics_by_dept.get(department_id)
        if dept is None or metrics is None:
            raise NotFoundError(f"unknown department: {department_id}")
        inst = institutions[dept.institution_id]
        return {
            "id": dept.id,
            "name": dept.name,
            "unit_kind": dept.unit_kind.value,
            "thematic_tags": sorted(dept.thematic_tags),
            "institution": {
                "id": inst.id,
                "name": inst.name,
                "abbreviation": inst.abbreviation,
            },
            "missing_profile_count": metrics.trs_without_profile,
            "metrics": metrics_json(metrics),
        }

    @app.get("/api/meta")
    def meta() -> dict:
        fetched = max((r.fetched_at for r in snapshot.provenance), default=None)
        return {
            "snapshot_id": snapshot.snapshot_id,
            "created_at": snapshot.created_at,
            "window": {
                "start_year": snapshot.window.start_year,
                "end_year": snapshot.window.end_year,
            },
            "fetched_at": fetched,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
