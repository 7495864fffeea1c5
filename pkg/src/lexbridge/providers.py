"""Phrase-proposal providers: a deterministic scripted stub and an HTTP
client for chat-completion endpoints.

Both expose the same two calls. ``complete`` returns the raw reply text
for one subject; ``propose`` additionally extracts the first well-formed
JSON array of strings from that reply. Judges reuse ``complete`` and
parse their own reply format.
"""

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import requests

DEFAULT_MAX_PHRASES = 16
DEFAULT_TOKEN_ENV = "LEXBRIDGE_API_TOKEN"


class ProviderError(Exception):
    """Base class for provider failures."""


class ProviderRequestError(ProviderError):
    """The provider could not produce a reply (network, status, missing
    script entry)."""


class ProviderParseError(ProviderError):
    """The provider replied, but no usable payload could be extracted."""


@dataclass(frozen=True)
class ProviderRequest:
    subject_id: str
    prompt: str
    max_phrases: int = DEFAULT_MAX_PHRASES


@dataclass(frozen=True)
class ProviderResponse:
    phrases: tuple[str, ...]
    raw: str | None = None


def _iter_json_values(text: str, openers: str):
    decoder = json.JSONDecoder()
    for i, ch in enumerate(text):
        if ch in openers:
            try:
                value, _ = decoder.raw_decode(text, i)
            except ValueError:
                continue
            yield value


def extract_string_array(text: str) -> list[str]:
    """First well-formed JSON array of strings anywhere in the text.

    Surrounding prose is ignored; arrays holding non-strings are skipped.
    """
    for value in _iter_json_values(text, "["):
        if isinstance(value, list) and all(isinstance(x, str) for x in value):
            return value
    raise ProviderParseError(f"no JSON array of strings in reply: {text[:200]!r}")


class Provider:
    """Interface shared by proposal providers and judges."""

    name = "provider"

    def complete(self, request: ProviderRequest) -> str:
        raise NotImplementedError

    def propose(self, request: ProviderRequest) -> ProviderResponse:
        raw = self.complete(request)
        phrases = extract_string_array(raw)
        return ProviderResponse(tuple(phrases[: request.max_phrases]), raw)


class StubProvider(Provider):
    """Scripted provider: a mapping from subject id to either a phrase
    array (proposal side) or a raw reply string (judge side).

    ``propose`` on an unknown subject yields an empty proposal;
    ``complete`` on an unknown subject fails like a dead endpoint, which
    is what judge degradation tests need.
    """

    def __init__(self, script: Mapping, name: str = "stub"):
        for key, value in script.items():
            if not isinstance(key, str):
                raise ValueError(f"stub script keys must be strings: {key!r}")
            if isinstance(value, list):
                if not all(isinstance(x, str) for x in value):
                    raise ValueError(
                        f"stub script entry {key!r} must list only strings"
                    )
            elif not isinstance(value, str):
                raise ValueError(
                    f"stub script entry {key!r} must be a string or array of strings"
                )
        self._script = dict(script)
        self.name = name

    @classmethod
    def from_file(cls, path) -> "StubProvider":
        try:
            with open(path, encoding="utf-8") as fh:
                script = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc.msg})") from None
        if not isinstance(script, dict):
            raise ValueError(f"{path}: stub script must be a JSON object")
        return cls(script, name=f"stub:{Path(path).name}")

    def complete(self, request: ProviderRequest) -> str:
        if request.subject_id not in self._script:
            raise ProviderRequestError(
                f"no scripted reply for subject {request.subject_id!r}"
            )
        value = self._script[request.subject_id]
        return value if isinstance(value, str) else json.dumps(value)

    def propose(self, request: ProviderRequest) -> ProviderResponse:
        if request.subject_id not in self._script:
            return ProviderResponse(())
        return super().propose(request)


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    model: str
    temperature: float = 0.0
    max_tokens: int = 256
    timeout: float = 30.0
    retries: int = 2
    backoff: float = 0.5
    token_env: str = DEFAULT_TOKEN_ENV  # secret stays in the environment


class HttpProvider(Provider):
    """Chat-completions client. Request failures (network trouble or a
    non-2xx status) are retried with exponential backoff; a reply that
    arrives but cannot be parsed is surfaced immediately."""

    def __init__(self, config: EndpointConfig):
        self.config = config
        self.name = f"http:{config.model}"

    def complete(self, request: ProviderRequest) -> str:
        cfg = self.config
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(cfg.token_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        payload = {
            "model": cfg.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": cfg.temperature,
            "max_tokens": cfg.max_tokens,
        }
        last_error = None
        for attempt in range(cfg.retries + 1):
            if attempt:
                time.sleep(cfg.backoff * (2 ** (attempt - 1)))
            try:
                resp = requests.post(
                    cfg.url, json=payload, headers=headers, timeout=cfg.timeout
                )
            except requests.RequestException as exc:
                last_error = f"request failed: {exc}"
                continue
            if resp.status_code // 100 != 2:
                last_error = f"endpoint returned status {resp.status_code}"
                continue
            try:
                body = resp.json()
                content = body["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError):
                raise ProviderParseError(
                    f"malformed completion envelope: {resp.text[:200]!r}"
                ) from None
            if not isinstance(content, str):
                raise ProviderParseError("completion content is not text")
            return content
        raise ProviderRequestError(
            f"{cfg.url}: giving up after {cfg.retries + 1} attempts ({last_error})"
        )
