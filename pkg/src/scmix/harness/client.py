"""OpenAI-compatible chat-completions client with retry and latency capture.

Images travel inline as base64 PNG data URIs so that no pixel is perturbed in
flight (a lossy format would corrupt the stripe patterns under test).
"""

from __future__ import annotations

import base64
import os
import time
from dataclasses import dataclass, field

import numpy as np
import requests

from ..images import png_bytes
from .manifest import ManifestEntry


class QueryError(RuntimeError):
    """A cell-level failure: retries exhausted or a non-retryable response."""


class AuthError(RuntimeError):
    """Authentication rejected; fatal for the whole run."""


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model_name: str
    api_key_env: str = ""
    temperature: float = 0.0
    max_output_tokens: int = 256
    extra_params: dict = field(default_factory=dict)
    max_in_flight: int = 4
    max_attempts: int = 3
    backoff_base: float = 0.5
    timeout: float = 120.0

    def __post_init__(self) -> None:
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")

    @classmethod
    def from_dict(cls, obj: dict) -> "EndpointConfig":
        retry = obj.get("retry", {})
        return cls(
            base_url=obj["base_url"],
            model_name=obj["model_name"],
            api_key_env=obj.get("api_key_env", ""),
            temperature=obj.get("temperature", 0.0),
            max_output_tokens=obj.get("max_output_tokens", 256),
            extra_params=obj.get("extra_params", {}),
            max_in_flight=obj.get("max_in_flight", 4),
            max_attempts=retry.get("max_attempts", obj.get("max_attempts", 3)),
            backoff_base=retry.get("backoff_base", obj.get("backoff_base", 0.5)),
            timeout=obj.get("timeout", 120.0),
        )

    def api_key(self) -> str | None:
        if not self.api_key_env:
            return None
        return os.environ.get(self.api_key_env) or None

    def completions_url(self) -> str:
        base = self.base_url.rstrip("/")
        if base.endswith("/chat/completions"):
            return base
        return base + "/chat/completions"


def image_data_uri(img: np.ndarray) -> str:
    encoded = base64.b64encode(png_bytes(img)).decode("ascii")
    return f"data:image/png;base64,{encoded}"


def build_request(
    entry: ManifestEntry,
    img: np.ndarray,
    endpoint: EndpointConfig,
    question_index: int = 0,
) -> dict:
    """Chat-completions payload: prompt text plus the image as a PNG data URI.

    ``extra_params`` merge last so callers can override or extend any field.
    """
    payload = {
        "model": endpoint.model_name,
        "temperature": endpoint.temperature,
        "max_tokens": endpoint.max_output_tokens,
        "messages": [
            {
                "role": "user",
                "content": [
                    {"type": "text", "text": entry.question(question_index)},
                    {
                        "type": "image_url",
                        "image_url": {"url": image_data_uri(img)},
                    },
                ],
            }
        ],
    }
    payload.update(endpoint.extra_params)
    return payload


_RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})


def query_model(
    endpoint: EndpointConfig,
    payload: dict,
    session: requests.Session | None = None,
) -> tuple[str, float]:
    """POST the payload; returns (first choice text, latency in ms).

    Transient failures (HTTP 429/5xx, timeouts, connection errors) are
    retried with exponential backoff up to ``max_attempts``; 401/403 raise
    :class:`AuthError` immediately.
    """
    sess = session or requests
    headers = {"Content-Type": "application/json"}
    key = endpoint.api_key()
    if key:
        headers["Authorization"] = f"Bearer {key}"
    url = endpoint.completions_url()
    start = time.perf_counter()
    last_error = "no attempt made"
    for attempt in range(endpoint.max_attempts):
        if attempt:
            time.sleep(endpoint.backoff_base * (2 ** (attempt - 1)))
        try:
            resp = sess.post(
                url, json=payload, headers=headers, timeout=endpoint.timeout
            )
        except (requests.Timeout, requests.ConnectionError) as exc:
            last_error = f"connection failure: {exc}"
            continue
        if resp.status_code in (401, 403):
            raise AuthError(f"endpoint rejected credentials: HTTP {resp.status_code}")
        if resp.status_code in _RETRYABLE_STATUS:
            last_error = f"HTTP {resp.status_code}"
            continue
        if resp.status_code != 200:
            raise QueryError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        latency_ms = (time.perf_counter() - start) * 1000.0
        try:
            text = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise QueryError(f"malformed response body: {exc}")
        return str(text), latency_ms
    raise QueryError(
        f"retries exhausted after {endpoint.max_attempts} attempts ({last_error})"
    )
