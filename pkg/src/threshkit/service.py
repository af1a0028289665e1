"""HTTP facade over the library: upload, inspect, threshold, preview.

Images live in an in-memory LRU store (desk-tool scale, no persistence).
Every numeric answer is produced by the same library calls the CLI uses,
so the two transports cannot drift apart.
"""

from __future__ import annotations

import secrets
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .dispatch import DEFAULT_EDGE_PERCENTILE, DEFAULT_P, select_threshold
from .edges import NoEdgesError
from .formats import FormatError, encode_png_preview, read_image_bytes, write_pgm
from .image import GrayImage, apply_threshold, compute_histogram

DEFAULT_MAX_BYTES = 16 * 1024 * 1024
DEFAULT_MAX_IMAGES = 64

PGM_MEDIA_TYPE = "image/x-portable-graymap"
PNG_MEDIA_TYPE = "image/png"

SERVICE_METHODS = ("mean", "ptile", "hdt", "emt")


@dataclass(frozen=True)
class StoredImage:
    id: str
    image: GrayImage
    created_at: float


class ImageStore:
    """Bounded id -> image map; least recently touched entry is evicted."""

    def __init__(self, max_images: int):
        self._max = max_images
        self._lock = threading.Lock()
        self._entries: OrderedDict[str, StoredImage] = OrderedDict()

    def put(self, image: GrayImage) -> StoredImage:
        entry = StoredImage(id=secrets.token_urlsafe(9), image=image, created_at=time.time())
        with self._lock:
            self._entries[entry.id] = entry
            while len(self._entries) > self._max:
                self._entries.popitem(last=False)
        return entry

    def get(self, image_id: str) -> StoredImage:
        with self._lock:
            entry = self._entries.get(image_id)
            if entry is None:
                raise KeyError(image_id)
            self._entries.move_to_end(image_id)
            return entry


def create_app(
    max_bytes: int = DEFAULT_MAX_BYTES,
    max_images: int = DEFAULT_MAX_IMAGES,
    static_dir=None,
) -> FastAPI:
    app = FastAPI(title="threshkit", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = ImageStore(max_images)

    def _lookup(image_id: str) -> StoredImage:
        try:
            return store.get(image_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown image id") from None

    @app.post("/api/images", status_code=201)
    async def upload(request: Request):
        body = await request.body()
        if len(body) > max_bytes:
            raise HTTPException(status_code=413, detail=f"body exceeds {max_bytes} bytes")
        try:
            image = read_image_bytes(body)
        except FormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        entry = store.put(image)
        return {"id": entry.id, "width": image.width, "height": image.height}

    @app.get("/api/images/{image_id}/histogram")
    def histogram(image_id: str):
        hist = compute_histogram(_lookup(image_id).image)
        return {"counts": hist.counts.tolist(), "total": hist.total}

    @app.get("/api/images/{image_id}/threshold")
    def threshold(
        image_id: str,
        method: str,
        p: float = Query(default=DEFAULT_P, gt=0, lt=1),
        edge_percentile: float = Query(default=DEFAULT_EDGE_PERCENTILE, gt=0, lt=1),
    ):
        entry = _lookup(image_id)
        if method not in SERVICE_METHODS:
            raise HTTPException(
                status_code=422,
                detail=f"method must be one of {', '.join(SERVICE_METHODS)}",
            )
        try:
            result = select_threshold(entry.image, method, p=p, edge_percentile=edge_percentile)
        except NoEdgesError as exc:
            raise HTTPException(
                status_code=409,
                detail={"reason": "no_edges", "message": str(exc)},
            ) from None
        return {
            "method": result.method,
            "t": result.t,
            "criterion": result.criterion,
            "params": result.params,
        }

    @app.get("/api/images/{image_id}/binary")
    def binary(
        request: Request,
        image_id: str,
        t: int = Query(ge=0, le=255),
    ):
        entry = _lookup(image_id)
        mask = apply_threshold(entry.image, t)
        accept = request.headers.get("accept", "")
        if PGM_MEDIA_TYPE in accept:
            return Response(content=write_pgm(mask), media_type=PGM_MEDIA_TYPE)
        return Response(content=encode_png_preview(mask), media_type=PNG_MEDIA_TYPE)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        # mounted last so /api/* wins the route match
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
