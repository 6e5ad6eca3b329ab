"""Backend selection for the hot numeric kernels.

The package ships two implementations of every hot kernel: a numba
``@njit`` version and a pure-numpy one.  The environment variable
``MLBOUND_BACKEND`` picks the path:

* ``auto`` (default): numba if it imports, numpy otherwise;
* ``numba``: require numba, raise if unavailable;
* ``numpy``: force the pure-numpy fallback (numba never imported).

The choice is made once at import time; ``NUMBA_ENABLED`` is the single
flag the kernel dispatchers consult.
"""

from __future__ import annotations

import os
import warnings

_REQUESTED = os.environ.get("MLBOUND_BACKEND", "auto").strip().lower()
if _REQUESTED not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"MLBOUND_BACKEND must be one of auto|numba|numpy, got {_REQUESTED!r}"
    )

NUMBA_ENABLED = False

if _REQUESTED in ("auto", "numba"):
    try:
        from numba import njit, prange  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:
        if _REQUESTED == "numba":
            raise
        warnings.warn(
            "numba is not importable; falling back to the pure-numpy kernels "
            "(set MLBOUND_BACKEND=numpy to silence this warning)",
            stacklevel=2,
        )

if not NUMBA_ENABLED:
    # No-op shims so kernel definitions stay importable without numba.
    def njit(*args, **kwargs):  # type: ignore[no-redef]
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

    prange = range  # type: ignore[assignment]


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
