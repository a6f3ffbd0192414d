"""Deterministic mock model server for hermetic end-to-end tests.

The mock behaves like a code generator that is maximally sensitive to the
method name: it picks a fixed code template by hashing the request's
description and instantiates it with the requested name, so a perturbed
name changes exactly the name-derived identifier slots and nothing else.
A "robust" behavior flag makes it ignore the requested name instead,
which is the other endpoint of the defense-delta tests.

render_code() is exported so a fixture corpus can be built whose reference
code matches the mock's unperturbed output byte for byte.
"""
from __future__ import annotations

import hashlib
import re
import threading
import time
from dataclasses import dataclass, field

import uvicorn
from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .core import Language, SignatureError, parse_signature
from .morph import SNAKE, render_name
from .protocol import (
    GENERATE_NAME_PATH,
    GENERATE_PATH,
    HEALTH_PATH,
    GenerateNameRequest,
    GenerateRequest,
)

_STOPWORDS = frozenset(
    "a an the of to in on at and or for with that this is are be it its from".split()
)


def _content_words(text: str, limit: int = 2) -> list[str]:
    words = re.findall(r"[a-z0-9]+", text.lower())
    picked = [w for w in words if w not in _STOPWORDS and not w[0].isdigit()]
    if not picked:
        picked = ["generated"]
    while len(picked) < limit:
        picked.append("value")
    return picked[:limit]


def derive_name(description: str, convention: str = SNAKE) -> str:
    """The mock's name rule: first two content words, joined per convention."""
    return render_name(_content_words(description), convention)


_PY_TEMPLATES = (
    (
        "def {name}(values):\n"
        "    total = {name}_start()\n"
        "    for item in values:\n"
        "        total = {name}_add(total, item)\n"
        "    return {name}_scale(total)\n"
        "\n"
        "def {name}_start():\n"
        "    return 0\n"
        "\n"
        "def {name}_add(total, item):\n"
        "    return total + item\n"
        "\n"
        "def {name}_scale(total):\n"
        "    return total * 2\n"
    ),
    (
        "def {name}(text):\n"
        "    cleaned = {name}_seed()\n"
        "    for part in text.split():\n"
        "        cleaned.append({name}_clean(part))\n"
        "    return cleaned\n"
        "\n"
        "def {name}_seed():\n"
        "    return []\n"
        "\n"
        "def {name}_clean(part):\n"
        "    return part.strip()\n"
    ),
    (
        "def {name}(left, right):\n"
        "    low = {name}_low(left, right)\n"
        "    high = {name}_high(left, right)\n"
        "    return high - low\n"
        "\n"
        "def {name}_low(left, right):\n"
        "    return min(left, right)\n"
        "\n"
        "def {name}_high(left, right):\n"
        "    return max(left, right)\n"
    ),
    (
        "def {name}(items):\n"
        "    best = {name}_seed()\n"
        "    for item in items:\n"
        "        best = {name}_pick(best, item)\n"
        "    return {name}_wrap(best)\n"
        "\n"
        "def {name}_seed():\n"
        "    return None\n"
        "\n"
        "def {name}_pick(best, item):\n"
        "    if best is None or item > best:\n"
        "        return item\n"
        "    return best\n"
        "\n"
        "def {name}_wrap(best):\n"
        "    return [best]\n"
    ),
)

_JAVA_TEMPLATES = (
    (
        "public class Solution {{\n"
        "    public static int {name}(int[] values) {{\n"
        "        int total = {name}Start();\n"
        "        for (int i = 0; i < values.length; i++) {{\n"
        "            total = total + {name}Step(values[i]);\n"
        "        }}\n"
        "        return {name}Scale(total);\n"
        "    }}\n"
        "\n"
        "    static int {name}Start() {{\n"
        "        return 0;\n"
        "    }}\n"
        "\n"
        "    static int {name}Step(int value) {{\n"
        "        return value * 2;\n"
        "    }}\n"
        "\n"
        "    static int {name}Scale(int total) {{\n"
        "        return total;\n"
        "    }}\n"
        "}}\n"
    ),
    (
        "public class Solution {{\n"
        "    public static int {name}(String text) {{\n"
        "        int count = {name}Start();\n"
        "        for (int i = 0; i < text.length(); i++) {{\n"
        "            count = count + {name}Mark(text.charAt(i));\n"
        "        }}\n"
        "        return {name}Adjust(count);\n"
        "    }}\n"
        "\n"
        "    static int {name}Start() {{\n"
        "        return 0;\n"
        "    }}\n"
        "\n"
        "    static int {name}Mark(char ch) {{\n"
        "        if (ch != ' ') {{\n"
        "            return 1;\n"
        "        }}\n"
        "        return 0;\n"
        "    }}\n"
        "\n"
        "    static int {name}Adjust(int count) {{\n"
        "        return count + 1;\n"
        "    }}\n"
        "}}\n"
    ),
    (
        "public class Solution {{\n"
        "    public static int {name}(int left, int right) {{\n"
        "        int low = {name}Low(left, right);\n"
        "        int high = {name}High(left, right);\n"
        "        return {name}Gap(low, high);\n"
        "    }}\n"
        "\n"
        "    static int {name}Low(int left, int right) {{\n"
        "        if (right < left) {{\n"
        "            return right;\n"
        "        }}\n"
        "        return left;\n"
        "    }}\n"
        "\n"
        "    static int {name}High(int left, int right) {{\n"
        "        if (right < left) {{\n"
        "            return left;\n"
        "        }}\n"
        "        return right;\n"
        "    }}\n"
        "\n"
        "    static int {name}Gap(int low, int high) {{\n"
        "        return high - low;\n"
        "    }}\n"
        "}}\n"
    ),
)


def _template_for(description: str, language: Language) -> str:
    pool = _PY_TEMPLATES if language is Language.PYTHON else _JAVA_TEMPLATES
    digest = hashlib.sha256(description.encode("utf-8")).digest()
    return pool[digest[0] % len(pool)]


def render_code(description: str, name: str, language: Language | str) -> str:
    """Instantiate the description's template with the given method name."""
    language = Language(language)
    return _template_for(description, language).format(name=name)


@dataclass
class MockBehavior:
    robust: bool = False              # ignore the requested name entirely
    fail_first: int = 0               # 503 the first N requests (retry tests)
    name_map: dict[str, str] = field(default_factory=dict)
    name_convention: str = SNAKE      # for /v1/generate_name derivation


def create_app(behavior: MockBehavior | None = None) -> FastAPI:
    behavior = behavior or MockBehavior()
    app = FastAPI(title="nameforge mock model", docs_url=None, redoc_url=None)
    remaining_failures = [behavior.fail_first]
    lock = threading.Lock()

    def should_fail() -> bool:
        with lock:
            if remaining_failures[0] > 0:
                remaining_failures[0] -= 1
                return True
        return False

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request, exc):  # noqa: ANN001 - fastapi contract
        return JSONResponse(status_code=400, content={"error": "malformed request body"})

    @app.get(HEALTH_PATH)
    def health() -> dict:
        return {"ok": True}

    @app.post(GENERATE_PATH)
    def generate(req: GenerateRequest):
        if should_fail():
            return JSONResponse(status_code=503, content={"error": "model unavailable"})
        language = Language(req.language)
        if req.mode == "fd_sig":
            if req.signature is None:
                return JSONResponse(
                    status_code=400, content={"error": "fd_sig requires a signature"}
                )
            try:
                name = parse_signature(req.signature, language).name
            except SignatureError as exc:
                return JSONResponse(status_code=400, content={"error": str(exc)})
        else:
            name = derive_name(req.description, language.naming_convention)
        if behavior.robust:
            name = derive_name(req.description, language.naming_convention)
        return {"code": render_code(req.description, name, language)}

    @app.post(GENERATE_NAME_PATH)
    def generate_name(req: GenerateNameRequest):
        if should_fail():
            return JSONResponse(status_code=503, content={"error": "model unavailable"})
        mapped = behavior.name_map.get(req.prompt)
        if mapped is not None:
            return {"name": mapped}
        return {"name": derive_name(req.prompt, behavior.name_convention)}

    return app


class MockServer:
    """The mock app on a real socket, run in a background thread.

    port=0 binds an ephemeral port; base_url is valid after start().
    """

    def __init__(
        self,
        behavior: MockBehavior | None = None,
        host: str = "127.0.0.1",
        port: int = 0,
        app=None,
    ) -> None:
        self._host = host
        self._port = port
        config = uvicorn.Config(
            app if app is not None else create_app(behavior),
            host=host,
            port=port,
            log_level="warning",
        )
        self._server = uvicorn.Server(config)
        self._thread: threading.Thread | None = None

    def start(self, timeout: float = 30.0) -> "MockServer":
        self._thread = threading.Thread(target=self._server.run, daemon=True)
        self._thread.start()
        deadline = time.monotonic() + timeout
        while not self._server.started:
            if not self._thread.is_alive():
                raise RuntimeError(f"mock server failed to bind {self._host}:{self._port}")
            if time.monotonic() > deadline:
                raise RuntimeError("mock server did not start in time")
            time.sleep(0.01)
        sock = self._server.servers[0].sockets[0]
        self._port = sock.getsockname()[1]
        return self

    @property
    def base_url(self) -> str:
        return f"http://{self._host}:{self._port}"

    def stop(self) -> None:
        self._server.should_exit = True
        if self._thread is not None:
            self._thread.join(timeout=10)

    def __enter__(self) -> "MockServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
