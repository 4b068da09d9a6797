"""Disk cache for analytic constants and prime-sum partial results.

One JSON file per section inside the cache directory; every stored real
is a lossless base-16 mantissa/exponent string tagged with its precision,
so cold and warm runs produce bit-identical numbers.
"""

from __future__ import annotations

import json
import os
import tempfile

ENV_VAR = "MOMENTPOLY_CACHE"


def default_cache_dir() -> str:
    env = os.environ.get(ENV_VAR)
    if env:
        return env
    base = os.environ.get("XDG_CACHE_HOME", os.path.join(os.path.expanduser("~"), ".cache"))
    return os.path.join(base, "momentpoly")


class ConstantCache:
    """get/put of JSON-serializable values keyed by section and key."""

    def __init__(self, path: str | None = None, persistent: bool = True):
        self.path = path or default_cache_dir()
        self.persistent = persistent
        self._sections = {}

    def _file(self, section: str) -> str:
        return os.path.join(self.path, section + ".json")

    def _load(self, section: str) -> dict:
        if section in self._sections:
            return self._sections[section]
        data = {}
        if self.persistent:
            try:
                with open(self._file(section)) as fh:
                    data = json.load(fh)
            except (OSError, ValueError):
                data = {}
        self._sections[section] = data
        return data

    def get(self, section: str, key: str):
        return self._load(section).get(key)

    def put(self, section: str, key: str, value):
        data = self._load(section)
        data[key] = value
        if not self.persistent:
            return
        try:
            os.makedirs(self.path, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.path, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh)
            os.replace(tmp, self._file(section))
        except OSError:
            self.persistent = False


_default = None


def default_cache() -> ConstantCache:
    global _default
    if _default is None:
        _default = ConstantCache()
    return _default
