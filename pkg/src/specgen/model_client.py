"""Sample raw completions from a chat-completions endpoint or a deterministic stub."""

from __future__ import annotations

import json
import logging
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Protocol, Sequence

import httpx

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10
RETRY_STATUS = {408, 409, 425, 429, 500, 502, 503, 504}


class ConfigurationError(ValueError):
    pass


class GenerationError(RuntimeError):
    """A task could not get its full batch of samples."""


@dataclass
class EndpointConfig:
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o"
    api_key_env: str = "OPENAI_API_KEY"
    temperature: float = 0.8
    max_tokens: int = 2048
    n_samples: int = DEFAULT_SAMPLES
    timeout: float = 120.0
    max_retries: int = 5
    backoff: float = 1.0
    max_backoff: float = 60.0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.n_samples, int) or self.n_samples < 1:
            raise ConfigurationError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if self.temperature < 0:
            raise ConfigurationError(f"temperature must be >= 0, got {self.temperature!r}")
        if self.max_retries < 0:
            raise ConfigurationError("max_retries must be >= 0")

    def snapshot(self) -> dict:
        """Endpoint settings safe to record (the key itself is never included)."""
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EndpointConfig":
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})


@dataclass
class SampleSet:
    task_id: str
    outputs: list[str]
    usage: list[dict] = field(default_factory=list)
    endpoint: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return asdict(self)

    @classmethod
    def from_record(cls, rec: dict) -> "SampleSet":
        return cls(rec["task_id"], list(rec["outputs"]), list(rec.get("usage", [])), dict(rec.get("endpoint", {})))


class Backend(Protocol):
    def complete(self, messages: list[dict], task_id: str, sample: int) -> tuple[str, dict]:
        ...

    def describe(self) -> dict:
        ...


class ChatBackend:
    """OpenAI-compatible ``/chat/completions``; one request per sample."""

    def __init__(self, config: EndpointConfig, transport: httpx.BaseTransport | None = None,
                 sleep: Callable[[float], None] = time.sleep):
        key = os.environ.get(config.api_key_env)
        if not key:
            raise ConfigurationError(f"API key missing: set the {config.api_key_env} environment variable")
        self.config = config
        self.sleep = sleep
        self.client = httpx.Client(
            base_url=config.base_url.rstrip("/"),
            headers={"Authorization": f"Bearer {key}"},
            timeout=config.timeout,
            transport=transport,
        )

    def describe(self) -> dict:
        return {"backend": "chat", **self.config.snapshot()}

    def _delay(self, attempt: int, resp: httpx.Response | None) -> float:
        if resp is not None:
            retry_after = resp.headers.get("retry-after")
            if retry_after:
                try:
                    return min(float(retry_after), self.config.max_backoff)
                except ValueError:
                    pass
        return min(self.config.backoff * (2 ** attempt), self.config.max_backoff)

    def complete(self, messages, task_id, sample):
        body = {
            "model": self.config.model,
            "messages": messages,
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        }
        last = ""
        for attempt in range(self.config.max_retries + 1):
            resp = None
            try:
                resp = self.client.post("/chat/completions", json=body)
            except httpx.TransportError as exc:
                last = f"{type(exc).__name__}: {exc}"
            else:
                if resp.status_code == 200:
                    data = resp.json()
                    content = data["choices"][0]["message"].get("content") or ""
                    return content, dict(data.get("usage") or {})
                last = f"HTTP {resp.status_code}: {resp.text[:300]}"
                if resp.status_code not in RETRY_STATUS:
                    raise GenerationError(f"{task_id}#{sample}: {last}")
            if attempt < self.config.max_retries:
                wait = self._delay(attempt, resp)
                log.warning("%s#%d: %s; retrying in %.1fs", task_id, sample, last, wait)
                self.sleep(wait)
        raise GenerationError(f"{task_id}#{sample}: retries exhausted ({last})")

    def close(self) -> None:
        self.client.close()


class StubBackend:
    """Canned outputs picked by a seeded RNG per (task, sample); never touches the network.

    ``outputs`` is either a list, or a mapping with an optional ``by_task``
    table (cycled by sample index) and a ``default`` list.
    """

    def __init__(self, outputs: Sequence[str] | dict, seed: int = 0):
        if isinstance(outputs, dict):
            self.by_task = {k: list(v) for k, v in outputs.get("by_task", {}).items()}
            self.default = list(outputs.get("default", []))
        else:
            self.by_task, self.default = {}, list(outputs)
        if not self.default and not self.by_task:
            raise ConfigurationError("stub backend needs at least one canned output")
        self.seed = seed

    @classmethod
    def from_file(cls, path: str | Path, seed: int = 0) -> "StubBackend":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")), seed)

    def describe(self) -> dict:
        return {"backend": "stub", "seed": self.seed}

    def complete(self, messages, task_id, sample):
        if task_id in self.by_task:
            pool = self.by_task[task_id]
            text = pool[sample % len(pool)]
        else:
            if not self.default:
                raise GenerationError(f"stub has no output for {task_id}")
            text = random.Random(f"{self.seed}:{task_id}:{sample}").choice(self.default)
        return text, {"completion_tokens": len(text.split())}


def raw_path(root: str | Path, task_id: str, sample: int) -> Path:
    return Path(root) / task_id / f"{sample}.raw.txt"


def _persist(root: Path, task_id: str, sample: int, text: str) -> None:
    path = raw_path(root, task_id, sample)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def generate(
    backend: Backend,
    task_id: str,
    messages: list[dict],
    n_samples: int = DEFAULT_SAMPLES,
    out_dir: str | Path | None = None,
) -> SampleSet:
    """Collect ``n_samples`` outputs in order, writing each raw text before returning.

    Samples already on disk under ``out_dir`` are reused, so an interrupted
    task resumes where it stopped.
    """
    if not isinstance(n_samples, int) or n_samples < 1:
        raise ConfigurationError(f"n_samples must be >= 1, got {n_samples!r}")
    root = Path(out_dir) if out_dir is not None else None
    outputs, usage = [], []
    for i in range(n_samples):
        existing = raw_path(root, task_id, i) if root is not None else None
        if existing is not None and existing.exists():
            outputs.append(existing.read_text(encoding="utf-8"))
            usage.append({"cached": True})
            continue
        try:
            text, use = backend.complete(messages, task_id, i)
        except GenerationError:
            raise
        except Exception as exc:
            raise GenerationError(f"{task_id}#{i}: {exc}") from exc
        if root is not None:
            _persist(root, task_id, i, text)
        outputs.append(text)
        usage.append(use)
    sset = SampleSet(task_id, outputs, usage, backend.describe())
    if root is not None:
        (root / task_id / "samples.json").write_text(json.dumps(sset.to_record(), indent=2), encoding="utf-8")
    return sset


def generate_many(
    backend: Backend,
    requests: Iterable[tuple[str, list[dict]]],
    n_samples: int = DEFAULT_SAMPLES,
    out_dir: str | Path | None = None,
    max_in_flight: int = 4,
) -> tuple[dict[str, SampleSet], dict[str, str]]:
    """Run :func:`generate` for many tasks; failures are returned per task, not raised."""
    reqs = list(requests)
    results: dict[str, SampleSet] = {}
    errors: dict[str, str] = {}

    def one(item):
        tid, msgs = item
        try:
            return tid, generate(backend, tid, msgs, n_samples, out_dir), None
        except GenerationError as exc:
            return tid, None, str(exc)

    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        for tid, sset, err in pool.map(one, reqs):
            if err is None:
                results[tid] = sset
            else:
                log.error("generation failed: %s", err)
                errors[tid] = err
    return results, errors
