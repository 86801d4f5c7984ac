"""HTTP API over the library: upload ranked data, read tau, geometry,
server-rendered SVG, and per-pair drill-downs.

Datasets are immutable once uploaded and held in memory behind random
URL-safe ids; an optional store directory adds write-through persistence.
Every GET is a pure function of the stored dataset and query parameters.
"""
from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from ._anchoring import AnchorPolicy, TransformConfig, TransformMode, transform_point
from .dataset import ColumnSpec, DatasetError, RankedDataset, parse_csv, to_csv
from .geometry import (
    ClockMode,
    _plane_region,
    anchor_pair,
    dissimilarity_of_pair,
    geometry_document,
    tau_for_config,
)
from .kendall import TauResult, classify_pair
from .render import PlotStyle, RenderConfig, RenderError, render_pair_bars, render_styled

__all__ = ["ApiError", "DatasetRecord", "create_app"]

MAX_UPLOAD_BYTES = 10 * 2**20


class ApiError(Exception):
    """Error carried to the client as JSON with a machine-readable code."""

    def __init__(self, status: int, code: str, message: str):
        assert status in (400, 404, 413, 422, 500)
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    dataset: RankedDataset
    created_at: float
    tau: TauResult


class _Store:
    """Insert-only id -> record map with optional directory write-through."""

    def __init__(self, directory: str | None = None):
        self._records: dict[str, DatasetRecord] = {}
        self._lock = threading.Lock()
        self._dir = None
        if directory:
            from pathlib import Path

            self._dir = Path(directory)
            self._dir.mkdir(parents=True, exist_ok=True)
            self._load()

    def _load(self):
        for meta_path in sorted(self._dir.glob("*.meta.json")):
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            csv_path = self._dir / f"{meta['id']}.csv"
            if not csv_path.exists():
                continue
            dataset = parse_csv(
                csv_path.read_bytes(),
                ColumnSpec(x_column=1, y_column=2, label_column=0),
            )
            dataset = RankedDataset(
                x=dataset.x,
                y=dataset.y,
                labels=dataset.labels,
                x_name=meta["x_name"],
                y_name=meta["y_name"],
            )
            record = DatasetRecord(
                id=meta["id"],
                dataset=dataset,
                created_at=meta["created_at"],
                tau=tau_for_config(dataset, TransformConfig()),
            )
            self._records[record.id] = record

    def add(self, dataset: RankedDataset) -> DatasetRecord:
        record = DatasetRecord(
            id=secrets.token_urlsafe(16),
            dataset=dataset,
            created_at=time.time(),
            tau=tau_for_config(dataset, TransformConfig()),
        )
        with self._lock:
            self._records[record.id] = record
        if self._dir is not None:
            (self._dir / f"{record.id}.csv").write_text(
                to_csv(dataset), encoding="utf-8"
            )
            meta = {
                "id": record.id,
                "created_at": record.created_at,
                "x_name": dataset.x_name,
                "y_name": dataset.y_name,
                "m": len(dataset),
            }
            (self._dir / f"{record.id}.meta.json").write_text(
                json.dumps(meta), encoding="utf-8"
            )
        return record

    def get(self, dataset_id: str) -> DatasetRecord:
        record = self._records.get(dataset_id)
        if record is None:
            raise ApiError(404, "dataset_not_found", f"no dataset {dataset_id!r}")
        return record


def _counts_payload(result: TauResult) -> dict:
    counts = result.counts
    return {
        "c": counts.c,
        "d": counts.d,
        "t_x": counts.t_x,
        "t_y": counts.t_y,
        "t_xy": counts.t_xy,
        "total": counts.total,
    }


def _parse_transform_params(
    mode: str, anchor: str, epsilon: float
) -> TransformConfig:
    try:
        transform_mode = TransformMode(mode)
    except ValueError:
        raise ApiError(400, "bad_mode", f"unknown mode {mode!r}")
    try:
        policy = AnchorPolicy(anchor)
    except ValueError:
        raise ApiError(400, "bad_anchor", f"unknown anchor {anchor!r}")
    if not np.isfinite(epsilon) or epsilon < 0:
        raise ApiError(400, "bad_epsilon", "epsilon must be finite and >= 0")
    return TransformConfig(transform_mode, policy, epsilon)


def create_app(
    *,
    max_upload_bytes: int = MAX_UPLOAD_BYTES,
    store_dir: str | None = None,
    cors_origins=(),
    ui_dir: str | None = None,
) -> FastAPI:
    """Build the service; state is per-app so tests can isolate instances."""
    app = FastAPI(title="rankplot service", docs_url=None, redoc_url=None)
    store = _Store(store_dir)

    if cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def _api_error(_request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message},
        )

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/datasets")
    async def upload(
        request: Request,
        x: str = "x",
        y: str = "y",
        label: str | None = None,
    ):
        body = await request.body()
        if len(body) > max_upload_bytes:
            raise ApiError(413, "too_large", f"body exceeds {max_upload_bytes} bytes")

        def selector(token):
            if token is None:
                return None
            return int(token) if token.isdigit() else token

        try:
            spec = ColumnSpec(
                x_column=selector(x), y_column=selector(y), label_column=selector(label)
            )
            dataset = parse_csv(body, spec)
        except UnicodeDecodeError:
            raise ApiError(400, "malformed_csv", "body is not valid UTF-8")
        except DatasetError as exc:
            if "fewer than 2 valid rows" in str(exc):
                raise ApiError(422, "too_few_rows", str(exc))
            raise ApiError(400, "malformed_csv", str(exc))
        record = store.add(dataset)
        return {
            "id": record.id,
            "m": len(record.dataset),
            "tau": record.tau.tau,
            "counts": _counts_payload(record.tau),
            "dropped_rows": record.dataset.dropped_rows,
            "x_name": record.dataset.x_name,
            "y_name": record.dataset.y_name,
        }

    @app.get("/api/datasets/{dataset_id}/tau")
    def dataset_tau(dataset_id: str, epsilon: float = 0.0):
        record = store.get(dataset_id)
        config = _parse_transform_params("translate-rotate", "min-x", epsilon)
        result = (
            record.tau if epsilon == 0.0 else tau_for_config(record.dataset, config)
        )
        return {
            "id": record.id,
            "m": len(record.dataset),
            "tau": result.tau,
            "counts": _counts_payload(result),
        }

    @app.get("/api/datasets/{dataset_id}/geometry")
    def geometry(
        dataset_id: str,
        mode: str = "translate-rotate",
        anchor: str = "min-x",
        epsilon: float = 0.0,
    ):
        record = store.get(dataset_id)
        config = _parse_transform_params(mode, anchor, epsilon)
        return geometry_document(record.dataset, config)

    @app.get("/api/datasets/{dataset_id}/plot.svg")
    def plot_svg(
        dataset_id: str,
        style: str = "segments",
        mode: str = "translate-rotate",
        anchor: str = "min-x",
        epsilon: float = 0.0,
        clock_mode: str = "calibrated",
    ):
        record = store.get(dataset_id)
        config = _parse_transform_params(mode, anchor, epsilon)
        try:
            plot_style = PlotStyle.from_tokens(style, config)
            svg = render_styled(
                record.dataset,
                plot_style,
                RenderConfig(),
                clock_mode=ClockMode(clock_mode),
            )
        except (RenderError, ValueError) as exc:
            raise ApiError(400, "bad_style", str(exc))
        return Response(content=svg, media_type="image/svg+xml")

    def _pair_payload(record: DatasetRecord, i: int, j: int, config: TransformConfig):
        m = len(record.dataset)
        if not (0 <= i < j < m):
            raise ApiError(
                400, "pair_out_of_range", f"need 0 <= i < j < {m}, got ({i}, {j})"
            )
        a = record.dataset.observation(i)
        b = record.dataset.observation(j)
        _, delta = anchor_pair(a, b, config.anchor_policy)
        ex, ey = transform_point(delta[0], delta[1], config.mode)
        return {
            "i": i,
            "j": j,
            "a": {"label": a.label, "x": a.x, "y": a.y},
            "b": {"label": b.label, "x": b.x, "y": b.y},
            "class": classify_pair(a, b, config.tie_epsilon).value,
            "dx": delta[0],
            "dy": delta[1],
            "dissimilarity": dissimilarity_of_pair(delta),
            "endpoint": [ex, ey],
            "quadrant": _plane_region(ex, ey).value,
        }

    @app.get("/api/datasets/{dataset_id}/pairs/{i}/{j}")
    def pair_detail(
        dataset_id: str,
        i: int,
        j: int,
        mode: str = "translate-rotate",
        anchor: str = "min-x",
        epsilon: float = 0.0,
    ):
        record = store.get(dataset_id)
        config = _parse_transform_params(mode, anchor, epsilon)
        return _pair_payload(record, i, j, config)

    @app.get("/api/datasets/{dataset_id}/pairs/{i}/{j}/bars.svg")
    def pair_bars(dataset_id: str, i: int, j: int):
        record = store.get(dataset_id)
        m = len(record.dataset)
        if not (0 <= i < j < m):
            raise ApiError(
                400, "pair_out_of_range", f"need 0 <= i < j < {m}, got ({i}, {j})"
            )
        svg = render_pair_bars(
            record.dataset.observation(i),
            record.dataset.observation(j),
            RenderConfig(),
            x_name=record.dataset.x_name,
            y_name=record.dataset.y_name,
        )
        return Response(content=svg, media_type="image/svg+xml")

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
