"""Atomic artefact writing with provenance metadata."""
from __future__ import annotations

import io
import json
import math
import os
import tempfile
from pathlib import Path

from . import __version__, _kernels


def metadata(scenario, command: str) -> dict:
    return {
        "tool": "rassjam",
        "version": __version__,
        "command": command,
        "seed": scenario.master_seed,
        "scenario_sha256": scenario.digest(),
        "backend": _kernels.BACKEND,
    }


def comment_line(meta: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in meta.items())


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """JSON text; non-finite floats become the strings "inf", "-inf", "nan"."""
    return json.dumps(_finite(obj), indent=2) + "\n"


def atomic_write_text(path, text: str) -> Path:
    """Write to a temp file beside ``path`` then rename over it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_with(path, writer) -> Path:
    """Run ``writer(fh)`` into a buffer, then write it atomically."""
    buf = io.StringIO()
    writer(buf)
    return atomic_write_text(path, buf.getvalue())


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return repr(x)
