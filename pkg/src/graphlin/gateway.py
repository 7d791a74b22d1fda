"""Chat-completion gateway: HTTP client, deterministic mocks, caching.

This is the only concurrent module. A bounded worker pool issues
requests and delivers results in input order; the append-only response
cache makes interrupted runs resumable with zero duplicate calls.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import httpx

from .generators import Shape
from .prompts import PromptRecord
from .rng import derive_rng
from .tasks import EXISTENCE_TASKS, TaskInstance, TaskKind

# Per-task output token budgets (short numeric answers vs. tasks where
# models tend to produce longer responses).
TOKEN_BUDGETS: Dict[TaskKind, int] = {
    TaskKind.NODE_COUNTING: 16,
    TaskKind.MAX_DEGREE: 16,
    TaskKind.NODE_DEGREE: 16,
    TaskKind.MOTIF_SHAPE: 16,
    TaskKind.EDGE_EXISTENCE: 128,
    TaskKind.DIAMETER: 128,
    TaskKind.SHORTEST_PATH: 128,
    TaskKind.PATH_EXISTENCE: 128,
}

DEFAULT_TEMPERATURE = 1e-3
DEFAULT_TOP_P = 1e-1

API_KEY_ENV = "GRAPHLIN_API_KEY"


class GatewayError(RuntimeError):
    pass


class ContextOverflowError(GatewayError):
    pass


class TransportError(GatewayError):
    pass


class AuthMissingError(GatewayError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    endpoint: str = ""
    model: str = ""
    temperature: float = DEFAULT_TEMPERATURE
    top_p: float = DEFAULT_TOP_P
    context_window: Optional[int] = None
    token_budgets: Dict[TaskKind, int] = field(default_factory=lambda: dict(TOKEN_BUDGETS))
    timeout: float = 60.0
    max_retries: int = 3
    backoff_base: float = 1.0
    max_parallel: int = 4

    def budget(self, kind: TaskKind) -> int:
        return self.token_budgets.get(kind, 128)


@dataclass
class ModelResponse:
    text: str
    latency_s: float = 0.0
    prompt_tokens: Optional[int] = None
    completion_tokens: Optional[int] = None
    status: str = "ok"


class Model:
    """Interface: mocks receive the task instance, HTTP models ignore it."""

    name: str = "model"

    def complete(self, prompt: PromptRecord,
                 instance: Optional[TaskInstance] = None) -> ModelResponse:
        raise NotImplementedError


class ChatEndpoint(Model):
    """OpenAI-style chat-completion client with retry and backoff."""

    def __init__(self, config: ModelConfig):
        if not config.endpoint or not config.model:
            raise GatewayError("endpoint URL and model name are required")
        self.config = config
        self.name = config.model

    def _check_window(self, prompt: PromptRecord) -> None:
        window = self.config.context_window
        if window is None:
            return
        needed = prompt.token_estimate + self.config.budget(prompt.task)
        if prompt.token_estimate > window or needed > window:
            raise ContextOverflowError(
                f"prompt needs ~{needed} tokens, window is {window}")

    def complete(self, prompt: PromptRecord,
                 instance: Optional[TaskInstance] = None) -> ModelResponse:
        self._check_window(prompt)
        api_key = os.environ.get(API_KEY_ENV, "")
        if not api_key:
            raise AuthMissingError(f"set {API_KEY_ENV} for endpoint access")
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt.text}],
            "temperature": self.config.temperature,
            "top_p": self.config.top_p,
            "max_tokens": self.config.budget(prompt.task),
        }
        headers = {"Authorization": f"Bearer {api_key}"}
        last_err: Optional[Exception] = None
        for attempt in range(self.config.max_retries + 1):
            start = time.monotonic()
            try:
                resp = httpx.post(self.config.endpoint, json=payload,
                                  headers=headers, timeout=self.config.timeout)
            except httpx.HTTPError as err:
                last_err = err
            else:
                if resp.status_code == 200:
                    body = resp.json()
                    usage = body.get("usage", {})
                    return ModelResponse(
                        text=body["choices"][0]["message"]["content"],
                        latency_s=time.monotonic() - start,
                        prompt_tokens=usage.get("prompt_tokens"),
                        completion_tokens=usage.get("completion_tokens"),
                    )
                if resp.status_code not in (429, 500, 502, 503, 504):
                    raise TransportError(
                        f"endpoint returned {resp.status_code}: {resp.text[:200]}")
                last_err = TransportError(f"status {resp.status_code}")
            if attempt < self.config.max_retries:
                time.sleep(self.config.backoff_base * 2 ** attempt)
        raise TransportError(f"request failed after retries: {last_err}")


class PerfectOracle(Model):
    """Answers every prompt with the instance's gold answer."""

    name = "mock:oracle"

    def complete(self, prompt, instance=None):
        if instance is None:
            raise GatewayError("oracle mock requires the task instance")
        truth = instance.truth
        if isinstance(truth, list):
            truth = truth[0]
        return ModelResponse(text=str(truth))


class ConstantModel(Model):
    """Always returns the same text."""

    def __init__(self, answer: str):
        self.answer = answer
        self.name = f"mock:constant:{answer}"

    def complete(self, prompt, instance=None):
        return ModelResponse(text=self.answer)


class UniformRandomAnswer(Model):
    """Uniform random answers over each task's plausible answer space.

    Deterministic: the reply is a pure function of (seed, prompt text).
    """

    def __init__(self, seed: int = 0, numeric_range: Tuple[int, int] = (0, 20)):
        self.seed = seed
        self.numeric_range = numeric_range
        self.name = f"mock:random:{seed}"

    def complete(self, prompt, instance=None):
        rng = derive_rng(self.seed, "mock-random", prompt.text)
        if prompt.task in EXISTENCE_TASKS:
            answer = rng.choice(["yes", "no"])
        elif prompt.task is TaskKind.MOTIF_SHAPE:
            answer = rng.choice([s.value for s in Shape])
        else:
            answer = str(rng.randint(*self.numeric_range))
        return ModelResponse(text=answer)


def mock_models() -> Dict[str, type]:
    return {"oracle": PerfectOracle, "constant": ConstantModel,
            "random": UniformRandomAnswer}


def resolve_model(name: str, config: Optional[ModelConfig] = None) -> Model:
    """Build a model from a name: ``mock:oracle``, ``mock:constant:<ans>``,
    ``mock:random:<seed>``, or any other name as an HTTP chat endpoint."""
    if name.startswith("mock:"):
        parts = name.split(":", 2)
        kind = parts[1]
        if kind == "oracle":
            return PerfectOracle()
        if kind == "constant":
            if len(parts) < 3:
                raise GatewayError("mock:constant needs an answer, e.g. mock:constant:0")
            return ConstantModel(parts[2])
        if kind == "random":
            return UniformRandomAnswer(int(parts[2]) if len(parts) > 2 else 0)
        raise GatewayError(f"unknown mock model {name!r}")
    cfg = config or ModelConfig()
    if not cfg.model:
        cfg = ModelConfig(**{**cfg.__dict__, "model": name})
    return ChatEndpoint(cfg)


class ResponseCache:
    """Append-only response cache keyed by (model, decoding params, prompt)."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        self._entries: Dict[str, str] = {}
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        obj = json.loads(line)
                        self._entries[obj["key"]] = obj["text"]

    @staticmethod
    def key(model_name: str, prompt: PromptRecord,
            temperature: float = DEFAULT_TEMPERATURE,
            top_p: float = DEFAULT_TOP_P, max_tokens: int = 0) -> str:
        blob = json.dumps([model_name, temperature, top_p, max_tokens,
                           prompt.text], sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, key: str) -> Optional[str]:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, text: str) -> None:
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = text
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps({"key": key, "text": text}) + "\n")

    def __len__(self) -> int:
        return len(self._entries)


class Gateway:
    """Drives a model over batches of prompts, optionally cached."""

    def __init__(self, model: Model, cache: Optional[ResponseCache] = None,
                 max_parallel: int = 1,
                 temperature: float = DEFAULT_TEMPERATURE,
                 top_p: float = DEFAULT_TOP_P):
        self.model = model
        self.cache = cache
        self.max_parallel = max(1, max_parallel)
        self.temperature = temperature
        self.top_p = top_p
        self.network_calls = 0
        self._stats_lock = threading.Lock()

    def _one(self, item: Tuple[PromptRecord, Optional[TaskInstance]]) -> ModelResponse:
        prompt, instance = item
        key = None
        if self.cache is not None:
            key = ResponseCache.key(self.model.name, prompt,
                                    self.temperature, self.top_p,
                                    TOKEN_BUDGETS.get(prompt.task, 128))
            hit = self.cache.get(key)
            if hit is not None:
                return ModelResponse(text=hit, status="cached")
        resp = self.model.complete(prompt, instance)
        with self._stats_lock:
            self.network_calls += 1
        if self.cache is not None:
            self.cache.put(key, resp.text)
        return resp

    def run(self, items: Sequence[Tuple[PromptRecord, Optional[TaskInstance]]]
            ) -> List[ModelResponse]:
        """Complete every prompt; results come back in input order."""
        if self.max_parallel == 1 or len(items) <= 1:
            return [self._one(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.max_parallel) as pool:
            return list(pool.map(self._one, items))
