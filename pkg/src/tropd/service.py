"""HTTP JSON API for the browser explorer and other clients.

Sessions are cheap in-memory templates plus an LRU of computed scenes keyed
by the exact coefficient vector; identical queries return byte-identical
bodies.  Long computations return 202 with a poll token instead of blocking
past the compute budget.
"""

from __future__ import annotations

import json
import threading
import uuid
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .analysis import stability_report
from .core import TropError, tds_from_json
from .exact import QPoint, frac
from .graph import build_graph, enumerate_cycles
from .orbits import BACKWARD, FORWARD, Limits, trace_orbit, trace_orbit_branches
from .presets import preset, preset_names
from .scene import export_scene, export_svg, orbit_to_json, report_to_json


class SessionStore:
    def __init__(self, capacity: int = 64):
        self.lock = threading.Lock()
        self.sessions: dict[str, dict] = {}
        self.capacity = capacity

    def create(self, tds) -> str:
        sid = uuid.uuid4().hex[:12]
        with self.lock:
            self.sessions[sid] = {"tds": tds, "cache": OrderedDict()}
        return sid

    def get(self, sid: str):
        with self.lock:
            return self.sessions.get(sid)

    def cache_get(self, sid: str, key):
        with self.lock:
            sess = self.sessions.get(sid)
            if sess is None or key not in sess["cache"]:
                return None
            sess["cache"].move_to_end(key)
            return sess["cache"][key]

    def cache_put(self, sid: str, key, value):
        with self.lock:
            sess = self.sessions.get(sid)
            if sess is None:
                return
            sess["cache"][key] = value
            sess["cache"].move_to_end(key)
            while len(sess["cache"]) > self.capacity:
                sess["cache"].popitem(last=False)


def _parse_overrides(raw_sets) -> dict:
    updates = {}
    for item in raw_sets:
        key, _, val = item.partition(":")
        try:
            updates[int(key)] = None if val in ("null", "-inf") else frac(val)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad override {item!r}: {exc}")
    return updates


def create_app(budget_seconds: float = 5.0, cache_capacity: int = 64,
               static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="tropd explorer service")
    store = SessionStore(cache_capacity)
    jobs: dict[str, dict] = {}
    jobs_lock = threading.Lock()
    pool = ThreadPoolExecutor(max_workers=4)

    def run_budgeted(fn):
        """Run fn within the budget; park it as a poll job when it overruns."""
        future = pool.submit(fn)
        try:
            return ("done", future.result(timeout=budget_seconds))
        except FutureTimeout:
            token = uuid.uuid4().hex[:12]
            with jobs_lock:
                jobs[token] = {"status": "pending"}

            def finalize(fut):
                with jobs_lock:
                    try:
                        jobs[token] = {"status": "done", "result": fut.result()}
                    except Exception as exc:   # surfaced on poll
                        jobs[token] = {"status": "error", "detail": str(exc)}

            future.add_done_callback(finalize)
            return ("pending", token)

    def error(status: int, name: str, detail: str = ""):
        return JSONResponse({"error": name, "detail": detail}, status_code=status)

    @app.get("/api/presets")
    def presets_endpoint():
        return {"presets": preset_names()}

    @app.post("/api/tds", status_code=201)
    async def create_tds(request: Request):
        body = await request.json()
        try:
            if isinstance(body, dict) and "preset" in body:
                tds = preset(body["preset"])
            else:
                tds = tds_from_json(body)
        except KeyError as exc:
            return error(400, "UnknownPreset", str(exc))
        except TropError as exc:
            return error(400, type(exc).__name__, str(exc))
        sid = store.create(tds)
        return {"id": sid}

    def session_or_404(sid):
        sess = store.get(sid)
        if sess is None:
            return None, error(404, "UnknownSession", sid)
        return sess, None

    @app.get("/api/tds/{sid}/scene")
    def scene_endpoint(sid: str, request: Request):
        sess, err = session_or_404(sid)
        if err:
            return err
        raw_sets = request.query_params.getlist("set")
        layers = request.query_params.get("layers")
        # an explicit layer list yields exactly those layers and nothing else
        layer_tuple = tuple(layers.split(",")) if layers else (
            "TU", "TV", "TI", "regions", "singularities", "vertices",
            "subdivision", "cycles", "graph", "report")
        try:
            updates = _parse_overrides(raw_sets)
            tds = sess["tds"].with_alpha(updates) if updates else sess["tds"]
        except (ValueError, TropError) as exc:
            return error(422, "BadOverride", str(exc))
        key = ("scene", tds.cache_key(), layer_tuple)
        cached = store.cache_get(sid, key)
        if cached is None:
            status, payload = run_budgeted(
                lambda: export_scene(tds, layers=layer_tuple,
                                     with_graph="graph" in layer_tuple,
                                     with_report="report" in layer_tuple).dumps())
            if status == "pending":
                return JSONResponse({"status": "pending", "token": payload}, status_code=202)
            cached = payload
            store.cache_put(sid, key, cached)
        return Response(cached, media_type="application/json")

    @app.get("/api/tds/{sid}/report")
    def report_endpoint(sid: str, request: Request):
        sess, err = session_or_404(sid)
        if err:
            return err
        try:
            updates = _parse_overrides(request.query_params.getlist("set"))
            tds = sess["tds"].with_alpha(updates) if updates else sess["tds"]
        except (ValueError, TropError) as exc:
            return error(422, "BadOverride", str(exc))
        key = ("report", tds.cache_key())
        cached = store.cache_get(sid, key)
        if cached is None:
            status, payload = run_budgeted(
                lambda: json.dumps(report_to_json(stability_report(tds)), sort_keys=True))
            if status == "pending":
                return JSONResponse({"status": "pending", "token": payload}, status_code=202)
            cached = payload
            store.cache_put(sid, key, cached)
        return Response(cached, media_type="application/json")

    @app.get("/api/tds/{sid}/graph")
    def graph_endpoint(sid: str):
        sess, err = session_or_404(sid)
        if err:
            return err
        g = build_graph(sess["tds"])
        cycles, truncated = enumerate_cycles(g)
        return {
            "nodes": [[list(n.degree), list(n.flow), n.pair_index] for n in g.nodes],
            "arcs": [[list(a), list(b)] for a, b in g.arcs],
            "cycles": [[list(d) for d in c] for c in cycles],
            "truncated": truncated,
        }

    @app.post("/api/tds/{sid}/orbit")
    async def orbit_endpoint(sid: str, request: Request):
        sess, err = session_or_404(sid)
        if err:
            return err
        body = await request.json()
        try:
            start = QPoint.of(frac(str(body["start"][0])), frac(str(body["start"][1])))
        except Exception as exc:
            return error(422, "BadPoint", str(exc))
        try:
            updates = _parse_overrides(body.get("set", []))
            tds = sess["tds"].with_alpha(updates) if updates else sess["tds"]
        except (ValueError, TropError) as exc:
            return error(422, "BadOverride", str(exc))
        direction = BACKWARD if body.get("direction") == "Backward" else FORWARD
        limits = Limits(max_segments=int(body.get("max_segments", 10_000)))
        if body.get("policy") == "branch-all":
            orbs = trace_orbit_branches(tds, start, direction, limits=limits)
            return {"orbits": [orbit_to_json(o) for o in orbs]}
        orbit = trace_orbit(tds, start, direction, limits=limits)
        return orbit_to_json(orbit)

    @app.get("/api/tds/{sid}/portrait.svg")
    def portrait_endpoint(sid: str, request: Request):
        sess, err = session_or_404(sid)
        if err:
            return err
        try:
            updates = _parse_overrides(request.query_params.getlist("set"))
            tds = sess["tds"].with_alpha(updates) if updates else sess["tds"]
        except (ValueError, TropError) as exc:
            return error(422, "BadOverride", str(exc))
        scene = export_scene(tds)
        return Response(export_svg(scene), media_type="image/svg+xml")

    @app.get("/api/jobs/{token}")
    def job_endpoint(token: str):
        with jobs_lock:
            job = jobs.get(token)
        if job is None:
            return error(404, "UnknownJob", token)
        if job["status"] == "pending":
            return JSONResponse({"status": "pending"}, status_code=202)
        if job["status"] == "error":
            return error(500, "JobFailed", job["detail"])
        return Response(job["result"], media_type="application/json")

    static = Path(static_dir) if static_dir else Path(__file__).parent.parent.parent / "frontend" / "dist"
    if static.exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static), html=True), name="static")
    else:
        @app.get("/")
        def index():
            return {"service": "tropd", "hint": "build frontend/ for the browser explorer"}

    return app
