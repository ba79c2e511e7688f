"""Shared test utilities: synthetic fixtures, oracles, a mock VLM server."""

from __future__ import annotations

import base64
import json
import threading
from fractions import Fraction
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from scmix.images import decode_image_bytes


def synthetic_image(seed: int, h: int = 360, w: int = 360) -> np.ndarray:
    """Deterministic smooth colour image: cosine fields plus soft blobs."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:h, 0:w]
    xf = x / w
    yf = y / h
    img = np.zeros((h, w, 3))
    for c in range(3):
        f = np.zeros((h, w))
        for _ in range(5):
            fx = rng.uniform(0.5, 3.0)
            fy = rng.uniform(0.5, 3.0)
            p1, p2 = rng.uniform(0, 2 * np.pi, 2)
            amp = rng.uniform(0.4, 1.0)
            f += amp * np.cos(2 * np.pi * fx * xf + p1) * np.cos(2 * np.pi * fy * yf + p2)
        img[..., c] = f
    for _ in range(3):
        cx, cy = rng.uniform(0.2, 0.8, 2)
        rad = rng.uniform(0.08, 0.25)
        colour = rng.uniform(-1, 1, 3)
        mask = np.exp(-(((xf - cx) ** 2 + (yf - cy) ** 2) / rad**2))
        img += mask[..., None] * colour[None, None, :]
    img -= img.min()
    img /= img.max() + 1e-12
    return np.round(img * 255).astype(np.uint8)


def random_rgb_image(rng: np.random.Generator, h: int, w: int) -> np.ndarray:
    return rng.integers(0, 256, (h, w, 3), dtype=np.uint8)


# ---------------------------------------------------------------------------
# independent oracles


def oracle_luma(r: int, g: int, b: int) -> int:
    """Round-half-up Rec.601 luma via Fraction arithmetic.

    int() truncates towards zero, which equals floor for the non-negative
    values here, so int(v + 1/2) is round-half-up."""
    r, g, b = int(r), int(g), int(b)
    return int(Fraction(299 * r + 587 * g + 114 * b, 1000) + Fraction(1, 2))


def oracle_partition_enum(total: int, weights: list[Fraction]) -> list[int]:
    """Brute-force apportionment: enumerate all compositions of ``total``,
    minimise sum |n_i - total*w_i|, break ties by giving leftover units to
    the lowest indices (= lexicographically greatest minimiser)."""
    k = len(weights)
    best = None
    best_cost = None

    def compositions(remaining: int, parts: list[int]):
        if len(parts) == k - 1:
            yield parts + [remaining]
            return
        for v in range(remaining + 1):
            yield from compositions(remaining - v, parts + [v])

    for cand in compositions(total, []):
        cost = sum(abs(Fraction(n) - total * w) for n, w in zip(cand, weights))
        if best_cost is None or cost < best_cost or (cost == best_cost and cand > best):
            best, best_cost = cand, cost
    return best


def block_mean_image(img: np.ndarray, degree: int) -> np.ndarray:
    """Round-half-up per-block mean image (each block filled with its mean)."""
    h, w = img.shape[:2]
    out = np.empty_like(img)
    p = img.astype(np.int64)
    for y0 in range(0, h, degree):
        hh = min(degree, h - y0)
        for x0 in range(0, w, degree):
            ww = min(degree, w - x0)
            s = p[y0 : y0 + hh, x0 : x0 + ww].sum(axis=(0, 1))
            area = hh * ww
            out[y0 : y0 + hh, x0 : x0 + ww] = (2 * s + area) // (2 * area)
    return out


# ---------------------------------------------------------------------------
# mock OpenAI-compatible endpoint


class MockVlmServer:
    """In-process chat-completions endpoint driven by a responder callable.

    ``responder(prompt, image)`` returns either the reply text or an
    (http_status, text) pair. Tracks the peak number of concurrent in-flight
    requests for the bounded-concurrency assertion.
    """

    def __init__(self, responder):
        self.responder = responder
        self.request_count = 0
        self.max_concurrent = 0
        self._inflight = 0
        self._lock = threading.Lock()
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # quiet
                pass

            def do_POST(self):
                with outer._lock:
                    outer.request_count += 1
                    outer._inflight += 1
                    outer.max_concurrent = max(outer.max_concurrent, outer._inflight)
                try:
                    length = int(self.headers["Content-Length"])
                    payload = json.loads(self.rfile.read(length))
                    prompt, image = _extract(payload)
                    result = outer.responder(prompt, image)
                    if isinstance(result, tuple):
                        status, text = result
                    else:
                        status, text = 200, result
                    if status != 200:
                        self.send_response(status)
                        self.end_headers()
                        return
                    body = json.dumps(
                        {"choices": [{"message": {"role": "assistant", "content": text}}]}
                    ).encode()
                    self.send_response(200)
                    self.send_header("Content-Type", "application/json")
                    self.send_header("Content-Length", str(len(body)))
                    self.end_headers()
                    self.wfile.write(body)
                finally:
                    with outer._lock:
                        outer._inflight -= 1

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}/v1"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._server.shutdown()
        self._server.server_close()


def _extract(payload: dict):
    prompt = None
    image = None
    for part in payload["messages"][0]["content"]:
        if part["type"] == "text":
            prompt = part["text"]
        elif part["type"] == "image_url":
            url = part["image_url"]["url"]
            prefix = "data:image/png;base64,"
            assert url.startswith(prefix)
            image = decode_image_bytes(base64.b64decode(url[len(prefix):]))
    return prompt, image
