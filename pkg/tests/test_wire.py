"""Wire protocol v1: schemas, mock model server, client retry/cache behavior."""
from __future__ import annotations

import asyncio
import hashlib
import json
import threading

import httpx
import pytest
from fastapi import FastAPI
from fastapi.testclient import TestClient
from jsonschema import Draft7Validator, ValidationError as SchemaError, validate

from nameforge.core import GenerationMode, Language
from nameforge.lexer import lex
from nameforge.mockserver import (
    MockBehavior,
    MockServer,
    create_app,
    derive_name,
    render_code,
)
from nameforge.modelio import (
    EndpointConfig,
    EndpointError,
    ModelClient,
    ProtocolError,
)
from nameforge.protocol import (
    GENERATE_NAME_PATH,
    GENERATE_PATH,
    HEALTH_PATH,
    SCHEMA_NAMES,
    GenerateRequest,
    load_schema,
)

# --- schemas ------------------------------------------------------------------


def test_all_schemas_load_and_compile():
    for name in SCHEMA_NAMES:
        Draft7Validator.check_schema(load_schema(name))


def test_unknown_schema_name():
    with pytest.raises(KeyError):
        load_schema("bogus")


def test_request_model_matches_schema():
    req = GenerateRequest(
        mode="fd_sig",
        language="python",
        description="sort a list",
        signature="def sort_list(xs):",
    )
    validate(req.wire_dict(), load_schema("generate_request"))
    fd = GenerateRequest(mode="fd", language="java", description="sum values")
    assert fd.wire_dict()["signature"] is None
    validate(fd.wire_dict(), load_schema("generate_request"))


def test_schema_rejects_malformed_request():
    schema = load_schema("generate_request")
    with pytest.raises(SchemaError):
        validate({"mode": "fd", "language": "python", "description": "x"}, schema)
    with pytest.raises(SchemaError):
        validate(
            {"mode": "surprise", "language": "python", "description": "x", "signature": None},
            schema,
        )


# --- mock server --------------------------------------------------------------


@pytest.fixture()
def mock_client():
    with TestClient(create_app(), raise_server_exceptions=False) as client:
        yield client


def test_health(mock_client):
    resp = mock_client.get(HEALTH_PATH)
    assert resp.status_code == 200
    assert resp.json() == {"ok": True}
    validate(resp.json(), load_schema("health_response"))


def _gen_body(description, signature, mode="fd_sig", language="python"):
    return {
        "mode": mode,
        "language": language,
        "description": description,
        "signature": signature,
    }


def test_generate_is_deterministic(mock_client):
    body = _gen_body("compute the sum of the values", "def add(a, b):")
    first = mock_client.post(GENERATE_PATH, json=body)
    second = mock_client.post(GENERATE_PATH, json=body)
    assert first.status_code == 200
    assert first.content == second.content
    code = first.json()["code"]
    assert "add" in code
    validate(first.json(), load_schema("generate_response"))


def test_generate_varies_only_in_name_slots():
    desc = "join the parts of the path"
    a = render_code(desc, "join_parts", "python")
    b = render_code(desc, "glue_bits", "python")
    assert a != b
    assert a.replace("join_parts", "NAME") == b.replace("glue_bits", "NAME")


def test_templates_cover_pool_and_parse():
    from nameforge.curation import check_syntax

    seen_py, seen_java = set(), set()
    for i in range(40):
        desc = f"description variant number {i} for coverage"
        seen_py.add(hashlib.sha256(desc.encode()).digest()[0] % 4)
        seen_java.add(hashlib.sha256(desc.encode()).digest()[0] % 3)
        assert check_syntax(render_code(desc, "probe_name", "python"), "python")
        assert check_syntax(render_code(desc, "probeName", "java"), "java")
    assert seen_py == {0, 1, 2, 3}
    assert seen_java == {0, 1, 2}


def test_generate_fd_derives_name_from_description(mock_client):
    body = _gen_body("Compute the total of the values given", None, mode="fd")
    resp = mock_client.post(GENERATE_PATH, json=body)
    assert "compute_total" in resp.json()["code"]

    jbody = _gen_body(
        "Compute the total of the values given", None, mode="fd", language="java"
    )
    jresp = mock_client.post(GENERATE_PATH, json=jbody)
    assert "computeTotal" in jresp.json()["code"]


def test_robust_mode_ignores_requested_name():
    with TestClient(create_app(MockBehavior(robust=True))) as client:
        desc = "count the words in the text"
        a = client.post(GENERATE_PATH, json=_gen_body(desc, "def count_words(t):"))
        b = client.post(GENERATE_PATH, json=_gen_body(desc, "def cnt_wrds(t):"))
        assert a.json() == b.json()


def test_fail_first_returns_503_then_recovers():
    with TestClient(create_app(MockBehavior(fail_first=2))) as client:
        body = _gen_body("sum the values", "def sum_values(xs):")
        for _ in range(2):
            resp = client.post(GENERATE_PATH, json=body)
            assert resp.status_code == 503
            validate(resp.json(), load_schema("error_response"))
        assert client.post(GENERATE_PATH, json=body).status_code == 200


def test_malformed_body_is_400_not_422(mock_client):
    resp = mock_client.post(GENERATE_PATH, json={"mode": "fd"})
    assert resp.status_code == 400
    validate(resp.json(), load_schema("error_response"))

    resp = mock_client.post(
        GENERATE_PATH, content=b"not json", headers={"content-type": "application/json"}
    )
    assert resp.status_code == 400

    resp = mock_client.post(GENERATE_PATH, json=_gen_body("d", "def f():", mode="nope"))
    assert resp.status_code == 400


def test_fd_sig_requires_signature(mock_client):
    resp = mock_client.post(GENERATE_PATH, json=_gen_body("d e s c", None))
    assert resp.status_code == 400
    assert "signature" in resp.json()["error"]


def test_bad_signature_is_400(mock_client):
    resp = mock_client.post(GENERATE_PATH, json=_gen_body("d e s c", "no parens here"))
    assert resp.status_code == 400


def test_generate_name_mapping_and_fallback():
    behavior = MockBehavior(name_map={"median prompt": "calculate_median"})
    with TestClient(create_app(behavior)) as client:
        hit = client.post(GENERATE_NAME_PATH, json={"prompt": "median prompt"})
        assert hit.json() == {"name": "calculate_median"}
        validate(hit.json(), load_schema("generate_name_response"))

        miss = client.post(GENERATE_NAME_PATH, json={"prompt": "reverse the given string"})
        assert miss.json() == {"name": "reverse_given"}


def test_derive_name_skips_stopwords_and_digits():
    assert derive_name("Return the sum of 2 numbers") == "return_sum"
    assert derive_name("Return the sum of 2 numbers", "camel") == "returnSum"
    assert derive_name("of the") == "generated_value"


def test_generated_code_token_shape():
    desc = "walk the tree and collect the leaves"
    code = render_code(desc, "walk_tree", "python")
    idents = [t.text for t in lex(code, "python") if t.text.startswith("walk_tree")]
    assert len(idents) >= 3  # the name occupies several slots


# --- client -------------------------------------------------------------------


def _config(**kw) -> EndpointConfig:
    base = dict(base_url="http://mock", timeout=5.0, max_retries=3, max_in_flight=8)
    base.update(kw)
    return EndpointConfig(**base)


def _transport_client(handler, **kw) -> ModelClient:
    return ModelClient(
        _config(**kw), transport=httpx.MockTransport(handler), backoff=0.001
    )


def test_config_validation():
    with pytest.raises(ValueError):
        _config(timeout=0)
    with pytest.raises(ValueError):
        _config(max_retries=0)
    with pytest.raises(ValueError):
        _config(max_in_flight=0)


def test_repeated_call_hits_cache():
    calls = []

    def handler(request):
        calls.append(request.url.path)
        return httpx.Response(200, json={"code": "def f():\n    pass\n"})

    with _transport_client(handler) as client:
        first = client.generate_code("desc", "def f():", "fd_sig", "python")
        second = client.generate_code("desc", "def f():", "fd_sig", "python")
    assert first == second
    assert len(calls) == 1
    assert client.network_calls == 1


def test_distinct_requests_not_conflated():
    def handler(request):
        body = json.loads(request.content)
        return httpx.Response(200, json={"code": body["description"]})

    with _transport_client(handler) as client:
        a = client.generate_code("one", "def f():", "fd_sig", "python")
        b = client.generate_code("two", "def f():", "fd_sig", "python")
        c = client.generate_code("one", "def f():", "fd_sig", "java")
    assert (a, b) == ("one", "two")
    assert c == "one"
    assert client.network_calls == 3


def test_500_exhausts_retries():
    calls = []

    def handler(request):
        calls.append(1)
        return httpx.Response(500, json={"error": "boom"})

    with _transport_client(handler) as client:
        with pytest.raises(EndpointError) as err:
            client.generate_code("d", "def f():", "fd_sig", "python")
    assert len(calls) == 3
    assert "3 attempts" in str(err.value)


def test_503_then_recovery():
    state = {"n": 0}

    def handler(request):
        state["n"] += 1
        if state["n"] <= 2:
            return httpx.Response(503, json={"error": "model unavailable"})
        return httpx.Response(200, json={"code": "ok"})

    with _transport_client(handler) as client:
        assert client.generate_code("d", "def f():", "fd_sig", "python") == "ok"
    assert state["n"] == 3


def test_protocol_error_on_bad_body():
    def wrong_key(request):
        return httpx.Response(200, json={"kode": "x"})

    with _transport_client(wrong_key) as client:
        with pytest.raises(ProtocolError):
            client.generate_code("d", "def f():", "fd_sig", "python")

    def not_json(request):
        return httpx.Response(200, content=b"plain text")

    with _transport_client(not_json) as client:
        with pytest.raises(ProtocolError):
            client.generate_name("p")


def test_4xx_is_protocol_error_without_retry():
    calls = []

    def handler(request):
        calls.append(1)
        return httpx.Response(400, json={"error": "malformed"})

    with _transport_client(handler) as client:
        with pytest.raises(ProtocolError):
            client.generate_code("d", "def f():", "fd_sig", "python")
    assert len(calls) == 1


def test_fd_sig_requires_signature_client_side():
    with _transport_client(lambda r: httpx.Response(200, json={"code": "x"})) as client:
        with pytest.raises(ValueError):
            client.generate_code("d", None, "fd_sig", "python")


def test_generate_name_roundtrip_and_cache():
    calls = []

    def handler(request):
        calls.append(1)
        body = json.loads(request.content)
        return httpx.Response(200, json={"name": body["prompt"].split()[0]})

    with _transport_client(handler) as client:
        assert client.generate_name("walk the tree") == "walk"
        assert client.generate_name("walk the tree") == "walk"
    assert len(calls) == 1


def test_persistent_cache_survives_restart(tmp_path):
    cache = tmp_path / "cache.jsonl"
    calls = []

    def handler(request):
        calls.append(1)
        return httpx.Response(200, json={"code": "cached body"})

    with _transport_client(handler, cache_path=cache) as client:
        client.generate_code("d", "def f():", "fd_sig", "python")
    assert len(calls) == 1

    with _transport_client(handler, cache_path=cache) as reborn:
        out = reborn.generate_code("d", "def f():", "fd_sig", "python")
    assert out == "cached body"
    assert len(calls) == 1  # no further network traffic
    assert reborn.network_calls == 0


# --- client against a live socket ---------------------------------------------


def test_client_against_live_mock_server():
    with MockServer() as server:
        config = EndpointConfig(base_url=server.base_url, timeout=5.0)
        with ModelClient(config) as client:
            assert client.health()
            code = client.generate_code(
                "compute the sum of the values",
                "def compute_sum(values):",
                GenerationMode.FD_SIG,
                Language.PYTHON,
            )
            assert "compute_sum" in code
            again = client.generate_code(
                "compute the sum of the values",
                "def compute_sum(values):",
                GenerationMode.FD_SIG,
                Language.PYTHON,
            )
            assert again == code
            assert client.network_calls == 1


def test_max_in_flight_is_respected():
    state = {"now": 0, "peak": 0}
    app = FastAPI()

    @app.post(GENERATE_PATH)
    async def generate(payload: dict):
        state["now"] += 1
        state["peak"] = max(state["peak"], state["now"])
        await asyncio.sleep(0.03)
        state["now"] -= 1
        return {"code": payload["description"]}

    with MockServer(app=app) as server:
        config = EndpointConfig(base_url=server.base_url, timeout=5.0, max_in_flight=3)
        with ModelClient(config) as client:
            threads = [
                threading.Thread(
                    target=client.generate_code,
                    args=(f"desc {i}", "def f():", "fd_sig", "python"),
                )
                for i in range(12)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
    assert 2 <= state["peak"] <= 3
