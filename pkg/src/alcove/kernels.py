"""Select the compiled kernels when available, the pure-Python ones otherwise.

Set ``ALCOVE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

IMPLEMENTATION = "python"
_impl = _kernels_py

if os.environ.get("ALCOVE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py

primitive = _impl.primitive
fm_combine = _impl.fm_combine
ff_pivot = _impl.ff_pivot
row_values = _impl.row_values
int_rank = _impl.int_rank

__all__ = ["IMPLEMENTATION", "primitive", "fm_combine", "ff_pivot", "row_values", "int_rank"]
