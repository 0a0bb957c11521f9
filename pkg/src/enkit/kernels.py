"""Kernel backend selection.

The hot loops (box-root enumeration, family closure, bulk equation checks)
exist twice: a Cython extension (enkit._kernels) and a pure-Python reference
(enkit._pykernels).  The compiled backend is used when it imported cleanly;
set ENKIT_PURE=1 to force the pure backend.  benchmarks/bench_kernels.py
compares the two.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("ENKIT_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND

grid_roots = _impl.grid_roots
check_equations = _impl.check_equations
family_join = _impl.family_join


def backends() -> dict[str, object]:
    """All importable backends, for parity tests and benchmarks."""
    found: dict[str, object] = {"pure": _pykernels}
    try:
        from . import _kernels
        found["compiled"] = _kernels
    except ImportError:
        pass
    return found
