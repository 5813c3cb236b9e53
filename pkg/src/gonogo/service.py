"""HTTP facade over the config dispatcher.

POST /api/v1/evaluate takes the same JSON document the CLI reads and returns
the report serialized by the shared serializer, so the response body is byte
for byte identical to the CLI's JSON output for the same config.  A coarse
cost estimator rejects requests that would exceed the compute budget before
any work is done.  The service is stateless and seed-deterministic.
"""

import math
import os
import uuid

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import __version__, config, reporting
from .errors import GonogoError, ParseError, TooExpensiveError, ValidationError
from .rules import enumerate_constellations

DEFAULT_BUDGET_SECONDS = 120.0
DEFAULT_MAX_BODY_BYTES = 1_000_000


def _error_body(exc: GonogoError) -> dict:
    return {"error": {"code": exc.code, "message": str(exc.args[0]),
                      "path": exc.path}}


def create_app(budget_seconds: float | None = None,
               max_body_bytes: int | None = None) -> FastAPI:
    if budget_seconds is None:
        budget_seconds = float(os.environ.get("GONOGO_BUDGET_SECONDS",
                                              DEFAULT_BUDGET_SECONDS))
    if max_body_bytes is None:
        max_body_bytes = int(os.environ.get("GONOGO_MAX_BODY_BYTES",
                                            DEFAULT_MAX_BODY_BYTES))
    app = FastAPI(title="gonogo", version=__version__)

    @app.post("/api/v1/evaluate")
    async def evaluate(request: Request) -> Response:
        body = await request.body()
        if len(body) > max_body_bytes:
            return JSONResponse(status_code=413, content={"error": {
                "code": "BODY_TOO_LARGE",
                "message": f"body exceeds {max_body_bytes} bytes",
                "path": None}})
        try:
            cfg = config.parse_config(body)
        except (ParseError, ValidationError) as e:
            return JSONResponse(status_code=400, content=_error_body(e))
        est = config.estimate_cost_seconds(cfg)
        if est > budget_seconds:
            n_sims = getattr(cfg.spec, "n_sims", config.DEFAULT_N_SIMS)
            suggestion = max(1, math.floor(n_sims * budget_seconds / est))
            exc = TooExpensiveError(
                f"estimated runtime {est:.0f}s exceeds the "
                f"{budget_seconds:.0f}s budget; try n_sims <= {suggestion}",
                suggested_n_sims=suggestion)
            body_out = _error_body(exc)
            body_out["error"]["suggested_n_sims"] = suggestion
            return JSONResponse(status_code=422, content=body_out)
        try:
            report = config.dispatch(cfg)
        except GonogoError as e:
            return JSONResponse(status_code=400, content=_error_body(e))
        except Exception:
            return JSONResponse(status_code=500, content={"error": {
                "code": "INTERNAL", "message": "internal error",
                "path": None, "incident_id": str(uuid.uuid4())}})
        return Response(content=reporting.serialize_json(report),
                        media_type="application/json")

    @app.get("/api/v1/constellations")
    def constellations() -> list[dict]:
        return [{"direction": c.direction.value, "go_shape": c.go_shape,
                 "nogo_shape": c.nogo_shape}
                for c in enumerate_constellations()]

    @app.get("/api/v1/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    return app
