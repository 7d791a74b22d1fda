import json

import httpx
import pytest

from graphlin.gateway import (API_KEY_ENV, AuthMissingError, ChatEndpoint,
                              ConstantModel, ContextOverflowError, Gateway,
                              GatewayError, ModelConfig, PerfectOracle,
                              ResponseCache, TOKEN_BUDGETS, TransportError,
                              UniformRandomAnswer, mock_models, resolve_model)
from graphlin.prompts import PromptRecord, Shots
from graphlin.tasks import TaskInstance, TaskKind


def prompt_for(kind=TaskKind.NODE_COUNTING, edges=3, text="Q: how many?"):
    return PromptRecord(text=text, task=kind, shots=Shots.ZERO,
                        exemplar_ref=None, token_estimate=100 + 5 * edges)


def test_budget_table_values():
    short = {TaskKind.NODE_COUNTING, TaskKind.MAX_DEGREE,
             TaskKind.NODE_DEGREE, TaskKind.MOTIF_SHAPE}
    for kind in TaskKind:
        assert TOKEN_BUDGETS[kind] == (16 if kind in short else 128)


def test_default_decoding_params():
    cfg = ModelConfig()
    assert cfg.temperature == pytest.approx(1e-3)
    assert cfg.top_p == pytest.approx(1e-1)


def test_perfect_oracle_returns_gold():
    inst = TaskInstance(graph_ref="r", kind=TaskKind.NODE_COUNTING, truth=12)
    assert PerfectOracle().complete(prompt_for(), inst).text == "12"
    with pytest.raises(GatewayError):
        PerfectOracle().complete(prompt_for())


def test_constant_model():
    model = ConstantModel("0")
    assert model.complete(prompt_for()).text == "0"
    assert model.name == "mock:constant:0"


def test_uniform_random_answer_deterministic_per_prompt():
    model = UniformRandomAnswer(seed=4)
    p = prompt_for(TaskKind.EDGE_EXISTENCE, text="Q: edge?")
    assert model.complete(p).text == model.complete(p).text
    answers = {model.complete(prompt_for(TaskKind.EDGE_EXISTENCE,
                                         text=f"Q{i}")).text
               for i in range(50)}
    assert answers == {"yes", "no"}


def test_uniform_random_answer_spaces():
    model = UniformRandomAnswer(seed=0)
    motif = model.complete(prompt_for(TaskKind.MOTIF_SHAPE, text="m")).text
    assert motif in {"clique", "star", "fan", "diamond", "tree"}
    numeric = model.complete(prompt_for(TaskKind.NODE_COUNTING, text="n")).text
    assert numeric.isdigit()


def test_resolve_model_names():
    assert isinstance(resolve_model("mock:oracle"), PerfectOracle)
    assert resolve_model("mock:constant:yes").answer == "yes"
    assert resolve_model("mock:random:7").seed == 7
    with pytest.raises(GatewayError):
        resolve_model("mock:unknown")
    assert set(mock_models()) == {"oracle", "constant", "random"}


def test_context_overflow_preflight(monkeypatch):
    monkeypatch.setenv(API_KEY_ENV, "k")
    cfg = ModelConfig(endpoint="http://example/v1/chat", model="m",
                      context_window=8192)
    endpoint = ChatEndpoint(cfg)
    ok = prompt_for(edges=1618)  # 100 + 5*1618 = 8190 <= window minus nothing
    too_big = prompt_for(edges=1619)
    with pytest.raises(ContextOverflowError):
        endpoint.complete(too_big)
    # 1618 edges still overflows once the output budget is reserved;
    # the capacity table bounds the prompt itself
    assert ok.token_estimate <= 8192


def test_auth_missing(monkeypatch):
    monkeypatch.delenv(API_KEY_ENV, raising=False)
    cfg = ModelConfig(endpoint="http://example/v1/chat", model="m")
    with pytest.raises(AuthMissingError):
        ChatEndpoint(cfg).complete(prompt_for())


def test_http_retry_then_success(monkeypatch):
    monkeypatch.setenv(API_KEY_ENV, "k")
    calls = {"n": 0}

    def fake_post(url, json=None, headers=None, timeout=None):
        calls["n"] += 1
        if calls["n"] < 3:
            return httpx.Response(429, text="slow down")
        return httpx.Response(200, json={
            "choices": [{"message": {"content": "42"}}],
            "usage": {"prompt_tokens": 10, "completion_tokens": 1}})

    monkeypatch.setattr(httpx, "post", fake_post)
    cfg = ModelConfig(endpoint="http://example/v1/chat", model="m",
                      backoff_base=0.0)
    resp = ChatEndpoint(cfg).complete(prompt_for())
    assert resp.text == "42"
    assert calls["n"] == 3


def test_http_no_retry_on_content_error(monkeypatch):
    monkeypatch.setenv(API_KEY_ENV, "k")
    calls = {"n": 0}

    def fake_post(url, **kwargs):
        calls["n"] += 1
        return httpx.Response(400, text="bad request")

    monkeypatch.setattr(httpx, "post", fake_post)
    cfg = ModelConfig(endpoint="http://example/v1/chat", model="m",
                      backoff_base=0.0)
    with pytest.raises(TransportError):
        ChatEndpoint(cfg).complete(prompt_for())
    assert calls["n"] == 1


def test_http_request_payload(monkeypatch):
    monkeypatch.setenv(API_KEY_ENV, "secret")
    seen = {}

    def fake_post(url, json=None, headers=None, timeout=None):
        seen.update(url=url, payload=json, headers=headers)
        return httpx.Response(200, json={
            "choices": [{"message": {"content": "ok"}}]})

    monkeypatch.setattr(httpx, "post", fake_post)
    cfg = ModelConfig(endpoint="http://example/v1/chat", model="llm-x")
    ChatEndpoint(cfg).complete(prompt_for(TaskKind.DIAMETER))
    assert seen["payload"]["model"] == "llm-x"
    assert seen["payload"]["messages"][0]["role"] == "user"
    assert seen["payload"]["max_tokens"] == 128
    assert seen["payload"]["temperature"] == pytest.approx(1e-3)
    assert seen["payload"]["top_p"] == pytest.approx(1e-1)
    assert seen["headers"]["Authorization"] == "Bearer secret"


def test_cache_replay_zero_network_calls(tmp_path):
    cache_path = str(tmp_path / "cache.jsonl")
    inst = TaskInstance(graph_ref="r", kind=TaskKind.NODE_COUNTING, truth=5)
    items = [(prompt_for(text=f"Q{i}"), inst) for i in range(10)]

    gw1 = Gateway(PerfectOracle(), cache=ResponseCache(cache_path))
    first = gw1.run(items)
    assert gw1.network_calls == 10

    gw2 = Gateway(PerfectOracle(), cache=ResponseCache(cache_path))
    second = gw2.run(items)
    assert gw2.network_calls == 0
    assert [r.text for r in first] == [r.text for r in second]
    assert all(r.status == "cached" for r in second)


def test_gateway_parallel_preserves_order():
    inst = lambda t: TaskInstance(graph_ref="r", kind=TaskKind.NODE_COUNTING,
                                  truth=t)
    items = [(prompt_for(text=f"p{i}"), inst(i)) for i in range(20)]
    gw = Gateway(PerfectOracle(), max_parallel=4)
    results = gw.run(items)
    assert [r.text for r in results] == [str(i) for i in range(20)]
