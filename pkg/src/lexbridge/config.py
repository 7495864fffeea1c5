"""Minimal TOML-style config reader for experiment manifests.

Supported: ``[section]`` headers, ``key = value`` pairs, ``#`` comments,
and values that are double-quoted strings, integers, floats, booleans,
or flat arrays of those. That subset keeps manifests trivially
diffable; anything else is rejected with a line-numbered error.
"""

import json
import re

_SECTION_RE = re.compile(r"^\[([A-Za-z0-9_.-]+)\]$")
_KEY_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class ConfigError(ValueError):
    pass


def _strip_comment(line: str) -> str:
    out = []
    in_string = False
    escaped = False
    for ch in line:
        if in_string:
            out.append(ch)
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == "#":
            break
        out.append(ch)
        if ch == '"':
            in_string = True
    return "".join(out)


def _parse_value(raw: str, where: str):
    if raw == "true":
        return True
    if raw == "false":
        return False
    try:
        value = json.loads(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse value {raw!r}") from None
    if isinstance(value, (str, int, float)):
        return value
    if isinstance(value, list) and all(
        isinstance(x, (str, int, float, bool)) for x in value
    ):
        return value
    raise ConfigError(f"{where}: unsupported value {raw!r}")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Returns {section: {key: value}}; keys before any header land in
    the "" section."""
    sections: dict[str, dict] = {}
    current = sections.setdefault("", {})
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line).strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        header = _SECTION_RE.match(line)
        if header:
            current = sections.setdefault(header.group(1), {})
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value' or '[section]'")
        key, _, raw = line.partition("=")
        key = key.strip()
        if not _KEY_RE.match(key):
            raise ConfigError(f"{where}: bad key {key!r}")
        current[key] = _parse_value(raw.strip(), where)
    if not sections[""]:
        del sections[""]
    return sections


def load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), source=str(path))
