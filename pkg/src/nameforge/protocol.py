"""Wire protocol v1: the JSON-over-HTTP surface between toolkit and model.

Three endpoints, fixed paths:

    POST /v1/generate        {"mode","language","description","signature"} -> {"code"}
    POST /v1/generate_name   {"prompt"}                                    -> {"name"}
    GET  /v1/health                                                        -> {"ok": true}

Errors carry {"error": string} with status 400 (malformed body) or 503
(model unavailable).  The JSON Schema files under wire_schemas/ describe
the same shapes; any server implementation can validate against them.
"""
from __future__ import annotations

import json
from importlib import resources
from typing import Literal

from pydantic import BaseModel, ConfigDict

WIRE_VERSION = "v1"

GENERATE_PATH = "/v1/generate"
GENERATE_NAME_PATH = "/v1/generate_name"
HEALTH_PATH = "/v1/health"

SCHEMA_NAMES = (
    "generate_request",
    "generate_response",
    "generate_name_request",
    "generate_name_response",
    "health_response",
    "error_response",
)


class GenerateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["fd", "fd_sig"]
    language: Literal["java", "python"]
    description: str
    signature: str | None = None

    def wire_dict(self) -> dict:
        # all four keys always present on the wire, signature null for FD
        return {
            "mode": self.mode,
            "language": self.language,
            "description": self.description,
            "signature": self.signature,
        }


class GenerateResponse(BaseModel):
    model_config = ConfigDict(extra="forbid")

    code: str


class GenerateNameRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    prompt: str


class GenerateNameResponse(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str


class HealthResponse(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ok: Literal[True] = True


class ErrorResponse(BaseModel):
    model_config = ConfigDict(extra="forbid")

    error: str


def load_schema(name: str) -> dict:
    """Load one of the bundled wire schemas by short name."""
    if name not in SCHEMA_NAMES:
        raise KeyError(f"unknown wire schema {name!r}")
    path = resources.files("nameforge") / "wire_schemas" / f"{name}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


def schema_dir() -> str:
    """Filesystem path of the schema directory (for non-Python consumers)."""
    return str(resources.files("nameforge") / "wire_schemas")
