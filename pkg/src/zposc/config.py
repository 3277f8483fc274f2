"""Flat key=value run-configuration files.

Files hold one `key = value` pair per line with `#` comments; values are
kept as strings and coerced by the consuming command.  Command-line flags
override file values, which override built-in defaults.  Unknown keys are
rejected so typos fail loudly.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Union

from .errors import ConfigError


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def load_config_file(path: Union[str, Path]) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text)


def merge_settings(
    defaults: Mapping[str, object],
    file_values: Mapping[str, str],
    flag_values: Mapping[str, object],
) -> dict[str, object]:
    """defaults <- file <- flags, strings coerced to each default's type.

    Every file key must name a known setting; flag values of None mean
    "not given on the command line".
    """
    merged = dict(defaults)
    for key, raw in file_values.items():
        if key not in merged:
            raise ConfigError(
                f"unknown config key {key!r}; known keys: {', '.join(sorted(merged))}"
            )
        merged[key] = _coerce(raw, defaults[key], key)
    for key, value in flag_values.items():
        if value is not None:
            merged[key] = value
    return merged


def _coerce(raw: str, template: object, key: str):
    if isinstance(template, bool):
        lowered = raw.lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"key {key!r}: expected a boolean, got {raw!r}")
    if isinstance(template, int):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from None
    if isinstance(template, float):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from None
    return raw
