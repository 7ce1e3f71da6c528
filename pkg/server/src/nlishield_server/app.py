"""FastAPI application for the scoring wire protocol.

POST /v1/score  {"model_id": str, "pairs": [{"premise", "hypothesis"}, ...]}
                -> {"scores": [{"entailment", "neutral", "contradiction"}, ...]}
GET  /v1/health -> {"status": "ok", "model_id": str}

Errors: 400 malformed body, 413 batch larger than the configured maximum,
503 model not loaded.
"""

from __future__ import annotations

import argparse
import logging
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import ServerConfig
from .scoring import Scorer

logger = logging.getLogger(__name__)


class PairBody(BaseModel):
    premise: str = Field(min_length=1)
    hypothesis: str = Field(min_length=1)


class ScoreRequestBody(BaseModel):
    model_id: str = Field(min_length=1)
    pairs: list[PairBody] = Field(min_length=1)


def create_app(config: ServerConfig, scorer: Optional[Scorer] = None) -> FastAPI:
    """Build the app. Without an injected scorer, the model is loaded on
    startup; requests arriving before (or after a failed) load get 503."""

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if app.state.scorer is None:
            from .scoring import TransformersScorer

            try:
                app.state.scorer = TransformersScorer(config.model_id, config.device)
            except Exception:
                logger.exception("failed to load model %s", config.model_id)
        yield

    app = FastAPI(title="nli-server", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.config = config
    app.state.scorer = scorer

    @app.exception_handler(RequestValidationError)
    async def malformed(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "model_id": config.model_id}

    @app.post("/v1/score")
    def score(body: ScoreRequestBody):
        if len(body.pairs) > config.max_batch:
            return JSONResponse(
                status_code=413,
                content={"error": f"batch too large (max {config.max_batch})"},
            )
        if app.state.scorer is None:
            return JSONResponse(status_code=503, content={"error": "model not loaded"})
        pairs = [(pair.premise, pair.hypothesis) for pair in body.pairs]
        return {"scores": app.state.scorer.score(pairs)}

    return app


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Serve NLI pair scoring over HTTP.")
    parser.add_argument("--model-id", default=ServerConfig.model_id)
    parser.add_argument("--device", default=ServerConfig.device)
    parser.add_argument("--max-batch", type=int, default=ServerConfig.max_batch)
    parser.add_argument("--port", type=int, default=ServerConfig.port)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)

    import uvicorn

    config = ServerConfig(
        model_id=args.model_id,
        device=args.device,
        max_batch=args.max_batch,
        port=args.port,
    )
    uvicorn.run(create_app(config), host=args.host, port=config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
