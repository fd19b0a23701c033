"""Content-addressed on-disk cache for JSON results.

Keys hash the operation name, its arguments and the convention constants, so
changing a pinned sign or the package version invalidates old entries.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import __version__, extcalc, klattice

ENV_VAR = "PFWIN_CACHE"


def convention_version() -> str:
    return f"{__version__};pfaffian={extcalc.PFAFFIAN_TWIST_SIGN};koszul={klattice.KOSZUL_SIGN}"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "pfwin"


def cache_key(op: str, args: Any) -> str:
    payload = json.dumps([op, args, convention_version()], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


class ResultCache:
    def __init__(self, directory: Path | str | None = None, enabled: bool = True):
        self.directory = Path(directory) if directory is not None else default_dir()
        self.enabled = enabled

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, op: str, args: Any) -> Any | None:
        if not self.enabled:
            return None
        path = self._path(cache_key(op, args))
        try:
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        except (OSError, ValueError):
            return None

    def put(self, op: str, args: Any, value: Any) -> None:
        if not self.enabled:
            return
        path = self._path(cache_key(op, args))
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            # write then rename so concurrent readers never see half a file
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(value, fh, sort_keys=True)
            os.replace(tmp, path)
        except OSError:
            pass

    def fetch(self, op: str, args: Any, compute: Callable[[], Any]) -> Any:
        hit = self.get(op, args)
        if hit is not None:
            return hit
        value = compute()
        self.put(op, args, value)
        return value
