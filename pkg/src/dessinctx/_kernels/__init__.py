"""Backend selection for the hot census kernels.

Two interchangeable implementations live here: a numba ``@njit`` one and a
numpy/bitset fallback.  The numba path is used when numba imports cleanly
and the environment variable ``DESSINCTX_NO_NUMBA`` is unset (or "0");
results are bit-identical either way, only speed differs.  The benchmark
in ``benchmarks/bench_census.py`` compares the two.
"""

from __future__ import annotations

import os

_FORCED: str | None = None  # test hook, overrides the environment


def active_backend_name() -> str:
    if _FORCED is not None:
        return _FORCED
    if os.environ.get("DESSINCTX_NO_NUMBA", "0") not in ("", "0"):
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def get_impl(name: str | None = None):
    """Return the kernel module for `name` (default: the active backend)."""
    name = name or active_backend_name()
    if name == "numba":
        from . import numba_impl
        return numba_impl
    if name == "numpy":
        from . import numpy_impl
        return numpy_impl
    raise ValueError(f"unknown kernel backend {name!r}")
