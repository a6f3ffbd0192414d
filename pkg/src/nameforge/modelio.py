"""Wire-protocol client: retries, response validation, and a request cache.

The attack loop issues up to repeats * population * iterations queries per
sample, most of them duplicates, so every response is cached under a hash
of the request content. With cache_path set the cache also persists as an
append-only JSONL log and re-runs replay it without touching the network.
"""
from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import httpx
from pydantic import ValidationError

from .core import GenerationMode, Language
from .protocol import (
    GENERATE_NAME_PATH,
    GENERATE_PATH,
    HEALTH_PATH,
    GenerateNameResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
)


class ProtocolError(RuntimeError):
    """The endpoint answered, but not with wire protocol v1."""


class EndpointError(RuntimeError):
    """The endpoint stayed unreachable or unavailable through all retries."""


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    timeout: float = 30.0
    max_retries: int = 3
    max_in_flight: int = 8
    cache_path: str | Path | None = None

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")


def _request_key(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ModelClient:
    """Synchronous client, shareable across worker threads."""

    def __init__(
        self,
        config: EndpointConfig,
        transport: httpx.BaseTransport | None = None,
        backoff: float = 0.25,
    ) -> None:
        self.config = config
        self._backoff = backoff
        self._client = httpx.Client(
            base_url=config.base_url, timeout=config.timeout, transport=transport
        )
        self._sem = threading.BoundedSemaphore(config.max_in_flight)
        self._lock = threading.Lock()
        self._cache: dict[str, str] = {}
        self._cache_file = None
        self.network_calls = 0
        if config.cache_path is not None:
            path = Path(config.cache_path)
            if path.exists():
                self._load_cache(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            self._cache_file = path.open("a", encoding="utf-8")

    def _load_cache(self, path: Path) -> None:
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                self._cache[entry["key"]] = entry["value"]

    def _remember(self, key: str, value: str) -> None:
        with self._lock:
            self._cache[key] = value
            if self._cache_file is not None:
                self._cache_file.write(
                    json.dumps({"key": key, "value": value}, ensure_ascii=False) + "\n"
                )
                self._cache_file.flush()

    def _cached(self, key: str) -> str | None:
        with self._lock:
            return self._cache.get(key)

    # --- wire operations ---------------------------------------------------

    def generate_code(
        self,
        description: str,
        signature: str | None,
        mode: GenerationMode | str,
        language: Language | str,
    ) -> str:
        mode = GenerationMode(mode)
        language = Language(language)
        if mode is GenerationMode.FD_SIG and signature is None:
            raise ValueError("fd_sig generation requires a signature")
        request = GenerateRequest(
            mode=mode.value,
            language=language.value,
            description=description,
            signature=signature,
        )
        key = _request_key({"op": "generate", **request.wire_dict()})
        hit = self._cached(key)
        if hit is not None:
            return hit
        raw = self._post(GENERATE_PATH, request.wire_dict())
        try:
            code = GenerateResponse(**raw).code
        except (ValidationError, TypeError) as exc:
            raise ProtocolError(f"bad generate response: {exc}") from exc
        self._remember(key, code)
        return code

    def generate_name(self, prompt: str) -> str:
        key = _request_key({"op": "generate_name", "prompt": prompt})
        hit = self._cached(key)
        if hit is not None:
            return hit
        raw = self._post(GENERATE_NAME_PATH, {"prompt": prompt})
        try:
            name = GenerateNameResponse(**raw).name
        except (ValidationError, TypeError) as exc:
            raise ProtocolError(f"bad generate_name response: {exc}") from exc
        self._remember(key, name)
        return name

    def health(self) -> bool:
        try:
            resp = self._client.get(HEALTH_PATH)
            HealthResponse(**resp.json())
            return resp.status_code == 200
        except Exception:
            return False

    # --- transport ---------------------------------------------------------

    def _post(self, path: str, body: dict) -> dict:
        attempts: list[str] = []
        with self._sem:
            for attempt in range(1, self.config.max_retries + 1):
                try:
                    with self._lock:
                        self.network_calls += 1
                    resp = self._client.post(path, json=body)
                except httpx.HTTPError as exc:
                    attempts.append(f"attempt {attempt}: {exc.__class__.__name__}: {exc}")
                else:
                    if resp.status_code == 200:
                        try:
                            data = resp.json()
                        except ValueError as exc:
                            raise ProtocolError(
                                f"non-JSON response body from {path}"
                            ) from exc
                        if not isinstance(data, dict):
                            raise ProtocolError(f"non-object response body from {path}")
                        return data
                    if resp.status_code >= 500:
                        attempts.append(f"attempt {attempt}: HTTP {resp.status_code}")
                    else:
                        raise ProtocolError(
                            f"HTTP {resp.status_code} from {path}: {resp.text[:200]}"
                        )
                if attempt < self.config.max_retries:
                    time.sleep(self._backoff * (2 ** (attempt - 1)))
        raise EndpointError(
            f"{path} failed after {self.config.max_retries} attempts:\n"
            + "\n".join(attempts)
        )

    def close(self) -> None:
        self._client.close()
        if self._cache_file is not None:
            self._cache_file.close()

    def __enter__(self) -> "ModelClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
