"""Configuration loading, stable JSON reports and a content-addressed result cache."""

import hashlib
import json
import os
import tempfile

import yaml

from .errors import ConfigError


def load_config(path):
    """Read a YAML or JSON mapping from ``path``; raises ConfigError on anything else."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML/JSON: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    return data


def _default(obj):
    if isinstance(obj, tuple):
        return list(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj, key=str)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "numerator") and hasattr(obj, "denominator"):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report):
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2, default=_default, ensure_ascii=False) + "\n"


def content_hash(command, config, version):
    payload = json.dumps({"command": command, "config": config, "version": version}, sort_keys=True, default=_default)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file in the same directory and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class ResultCache:
    """Reports stored as ``<dir>/<sha256>.json`` keyed by command, config and package version."""

    def __init__(self, directory):
        self.directory = directory

    def path(self, key):
        return os.path.join(self.directory, f"{key}.json")

    def get(self, key):
        try:
            with open(self.path(key), "r", encoding="utf-8") as fh:
                return json.load(fh)
        except (OSError, ValueError):
            return None

    def put(self, key, report):
        atomic_write(self.path(key), dumps(report))
