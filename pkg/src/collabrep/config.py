"""Configuration: rule constants, allocation window, snapshot cadence, listen address.

Values come from an INI file (``[section] key = value``) and may be overridden by
environment variables named ``COLLABREP_<SECTION>_<KEY>``, e.g.
``COLLABREP_ALLOCATION_EPSILON=0.4``. Point values are given in whole points.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .allocation import AllocationRules
from .grading import GradingRules
from .model import points

ENV_PREFIX = "COLLABREP_"

DEFAULTS: dict[str, dict[str, str]] = {
    "grading": {
        "registration": "25",
        "community_created": "25",
        "community_joined": "25",
        "version_saved": "2",
        "vote": "2",
        "report_upheld_reporter": "5",
        "report_upheld_editor": "-5",
        "report_upheld_publisher": "-5",
        "report_rejected_reporter": "-5",
    },
    "allocation": {
        "points_per_version": "5",
        "close_to_one_percent": "70",
        "publisher_percent": "20",
        "epsilon": "0.5",
    },
    "service": {
        "snapshot_interval": "1000",
        "host": "127.0.0.1",
        "port": "8080",
    },
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    rules: GradingRules = field(default_factory=GradingRules)
    snapshot_interval: int = 1000
    host: str = "127.0.0.1"
    port: int = 8080

    def __post_init__(self):
        if self.snapshot_interval < 1:
            raise ValueError("snapshot_interval must be at least 1")

    def fingerprint(self) -> str:
        """Stable digest of the rule constants; snapshots made under other rules are ignored."""
        blob = json.dumps(asdict(self.rules), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _raw_values(path: str | os.PathLike | None, environ: Mapping[str, str]) -> dict[str, dict[str, str]]:
    values = {section: dict(keys) for section, keys in DEFAULTS.items()}
    if path is not None:
        parser = configparser.ConfigParser()
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for section in parser.sections():
            if section not in values:
                raise ConfigError(f"unknown config section [{section}]")
            for key, value in parser.items(section):
                if key not in values[section]:
                    raise ConfigError(f"unknown config key {section}.{key}")
                values[section][key] = value
    for section, keys in values.items():
        for key in keys:
            env_name = f"{ENV_PREFIX}{section}_{key}".upper()
            if env_name in environ:
                keys[key] = environ[env_name]
    return values


def load_config(path: str | os.PathLike | None = None,
                environ: Mapping[str, str] | None = None) -> Config:
    values = _raw_values(path, os.environ if environ is None else environ)
    try:
        grading = {key: points(value) for key, value in values["grading"].items()}
        alloc = values["allocation"]
        allocation = AllocationRules(
            per_version=points(alloc["points_per_version"]),
            close_percent=int(alloc["close_to_one_percent"]),
            publisher_percent=int(alloc["publisher_percent"]),
            epsilon=Fraction(alloc["epsilon"]),
        )
        service = values["service"]
        return Config(
            rules=GradingRules(allocation=allocation, **grading),
            snapshot_interval=int(service["snapshot_interval"]),
            host=service["host"],
            port=int(service["port"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def default_config_text() -> str:
    lines = []
    for section, keys in DEFAULTS.items():
        lines.append(f"[{section}]")
        lines.extend(f"{key} = {value}" for key, value in keys.items())
        lines.append("")
    return "\n".join(lines)


def write_default_config(path: str | os.PathLike) -> Path:
    path = Path(path)
    path.write_text(default_config_text(), encoding="utf-8")
    return path
