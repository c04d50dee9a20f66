from __future__ import annotations

import pathlib
import tomllib
from dataclasses import dataclass, field
from typing import Any

from qcat.arith.catmap import CatMap, validate_catmap
from qcat.exceptions import ConfigError
from qcat.heisenberg.export import FORMAT_VERSION

DEFAULT_MATRIX = "2,3,1,2"


def parse_matrix(text: str) -> CatMap:
    """`a,b,c,d` to a validated cat map; `ConditionViolation` propagates."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 4:
        raise ConfigError(f"Matrix must be four comma separated integers, got {text!r}")
    try:
        a, b, c, d = (int(part) for part in parts)
    except ValueError as exc:
        raise ConfigError(f"Matrix entries must be integers, got {text!r}") from exc
    return validate_catmap(a, b, c, d)


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"Expected comma separated integers, got {text!r}") from exc


def load_config_file(path: pathlib.Path | str) -> dict[str, Any]:
    """
    TOML file turned into a click `default_map`: top-level keys feed the global
    options, one table per subcommand feeds that subcommand.
    """
    try:
        with open(path, "rb") as fp:
            data = tomllib.load(fp)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"Cannot read config {path}: {exc}") from exc

    def normalize(table: dict[str, Any]) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for key, value in table.items():
            name = key.replace("-", "_")
            out[name] = normalize(value) if isinstance(value, dict) else value
        return out

    # subcommand tables keep their dashed names
    return {
        key if isinstance(value, dict) else key.replace("-", "_"): (
            normalize(value) if isinstance(value, dict) else value
        )
        for key, value in data.items()
    }


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one command, echoed into every output header."""

    command: str
    catmap: CatMap
    params: dict[str, Any] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key, value in self.params.items():
            if key.endswith("tol") and not (isinstance(value, (int, float)) and value > 0):
                raise ConfigError(f"Tolerance {key} must be positive, got {value!r}")

    def header(self, **fields: Any) -> dict[str, Any]:
        out: dict[str, Any] = {"matrix": self.catmap.label, "command": self.command}
        out.update(fields)
        out.update({key: self.params[key] for key in sorted(self.params)})
        out["format-version"] = FORMAT_VERSION
        out.update({f"meta.{key}": value for key, value in sorted(self.metadata.items())})
        return out
