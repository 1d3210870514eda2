"""Split-scan backend selection: compiled kernel if importable, else numpy.

The two backends are arithmetic-identical (see _scan_py), so the choice
only affects speed. STYLOBOOST_BACKEND=python|cython|auto overrides the
default; it is read per training run so tests and benchmarks can switch
in-process.
"""

from __future__ import annotations

import os

from . import _scan_py

try:
    from . import _splitkernel  # type: ignore[attr-defined]
except ImportError:  # extension not built; pure fallback
    _splitkernel = None


def compiled_available() -> bool:
    return _splitkernel is not None


def resolve_backend(name: str | None = None):
    """Return (backend_name, scan_block callable)."""
    if name is None:
        name = os.environ.get("STYLOBOOST_BACKEND", "auto")
    if name == "python":
        return "python", _scan_py.scan_block
    if name == "cython":
        if _splitkernel is None:
            raise RuntimeError(
                "compiled split kernel requested via STYLOBOOST_BACKEND=cython "
                "but the extension is not built"
            )
        return "cython", _splitkernel.scan_block
    if name == "auto":
        if _splitkernel is not None:
            return "cython", _splitkernel.scan_block
        return "python", _scan_py.scan_block
    raise ValueError(f"unknown backend {name!r}; expected auto, python, or cython")


def thread_count() -> int:
    """Worker cap from STYLO_THREADS, defaulting to the core count."""
    raw = os.environ.get("STYLO_THREADS")
    if raw is None or raw == "":
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"STYLO_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)
