"""Translation backends: a deterministic mock and a chat-completions HTTP client."""

from __future__ import annotations

import json
import logging
import os
import re
import socket
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Optional, Protocol

log = logging.getLogger(__name__)


class BackendError(Exception):
    pass


class Timeout(BackendError):
    pass


class HttpStatus(BackendError):
    def __init__(self, code: int, body: str = "") -> None:
        super().__init__(f"HTTP {code}: {body[:200]}")
        self.code = code


class MalformedResponse(BackendError):
    pass


class Backend(Protocol):
    def complete(self, packet) -> bytes: ...


def prefix_lines(text: bytes, prefix: bytes) -> bytes:
    parts = text.split(b"\n")
    tail = parts[-1] == b""
    body = parts[:-1] if tail else parts
    out = b"\n".join(prefix + line for line in body)
    return out + b"\n" if tail else out


@dataclass(frozen=True)
class MockBackend:
    """Pure function of the packet's source text; ``transform`` is "identity" or "prefix"."""

    transform: str = "identity"
    prefix: bytes = b"// t: "

    def __post_init__(self) -> None:
        if self.transform not in ("identity", "prefix"):
            raise ValueError(f"unknown mock transform: {self.transform}")

    def apply(self, source: bytes) -> bytes:
        if self.transform == "identity":
            return source
        return prefix_lines(source, self.prefix)

    def complete(self, packet) -> bytes:
        return self.apply(packet.source_text)


class RateLimiter:
    """Spaces request starts at least 1/rps seconds apart across threads."""

    def __init__(self, rps: Optional[float]) -> None:
        self.interval = 1.0 / rps if rps else 0.0
        self._lock = threading.Lock()
        self._next = 0.0

    def wait(self) -> None:
        if not self.interval:
            return
        with self._lock:
            now = time.monotonic()
            start = max(now, self._next)
            self._next = start + self.interval
        delay = start - now
        if delay > 0:
            time.sleep(delay)


_FENCE = re.compile(r"^\s*```[\w+-]*\n(.*?)\n```\s*$", re.S)


class HttpBackend:
    def __init__(
        self,
        base_url: str,
        model: str,
        api_key_env: str = "OPENAI_API_KEY",
        timeout: float = 60.0,
        retries: int = 3,
        backoff: float = 1.0,
        max_in_flight: int = 4,
        rps: Optional[float] = None,
        temperature: float = 0.0,
    ) -> None:
        self.url = base_url.rstrip("/") + "/chat/completions"
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.temperature = temperature
        self._slots = threading.BoundedSemaphore(max(1, max_in_flight))
        self._limiter = RateLimiter(rps)

    def request_body(self, packet) -> dict:
        return {
            "model": self.model,
            "messages": [{"role": "user", "content": packet.prompt.decode("utf-8", "replace")}],
            "max_tokens": packet.budget.reserved_output,
            "temperature": self.temperature,
        }

    def _post(self, body: dict) -> bytes:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        req = urllib.request.Request(self.url, data=json.dumps(body).encode("utf-8"), headers=headers, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = resp.read()
        except urllib.error.HTTPError as exc:
            raise HttpStatus(exc.code, exc.read().decode("utf-8", "replace")) from None
        except (socket.timeout, TimeoutError) as exc:
            raise Timeout(str(exc)) from None
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (socket.timeout, TimeoutError)):
                raise Timeout(str(exc.reason)) from None
            raise BackendError(str(exc.reason)) from None
        return extract_text(payload)

    def complete(self, packet) -> bytes:
        body = self.request_body(packet)
        attempt = 0
        while True:
            try:
                with self._slots:
                    self._limiter.wait()
                    return self._post(body)
            except BackendError as exc:
                # other 4xx responses will not improve on retry
                if isinstance(exc, HttpStatus) and 400 <= exc.code < 500 and exc.code not in (408, 429):
                    raise
                if attempt >= self.retries:
                    raise
                delay = self.backoff * (2**attempt)
                log.warning("backend call failed (%s); retry %d in %.2fs", exc, attempt + 1, delay)
                time.sleep(delay)
                attempt += 1


def extract_text(payload: bytes) -> bytes:
    try:
        data = json.loads(payload)
        choice = data["choices"][0]
        text = choice["message"]["content"] if "message" in choice else choice["text"]
    except (ValueError, KeyError, IndexError, TypeError):
        raise MalformedResponse(payload[:200].decode("utf-8", "replace")) from None
    if not isinstance(text, str):
        raise MalformedResponse("choice text is not a string")
    m = _FENCE.match(text)
    if m:
        text = m.group(1)
    return text.encode("utf-8")


def backend_call(backend: Backend, packet) -> bytes:
    return backend.complete(packet)
