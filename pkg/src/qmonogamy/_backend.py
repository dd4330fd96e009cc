"""Kernel backend selection.

Hot numeric loops (the Jacobi eigensolver and the decomposition-refinement
loop of the convex-roof optimizer) exist in two interchangeable
implementations: numba-compiled scalar kernels and a vectorized pure-numpy
path. The environment variable QMONOGAMY_BACKEND picks one:

    QMONOGAMY_BACKEND=auto    use numba when importable (default)
    QMONOGAMY_BACKEND=numba   require numba, error if missing
    QMONOGAMY_BACKEND=numpy   force the pure-numpy path

Both paths implement the same arithmetic; `benchmarks/bench_backends.py`
compares their throughput.
"""

from __future__ import annotations

import os

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

_choice = os.environ.get("QMONOGAMY_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"QMONOGAMY_BACKEND must be one of auto|numba|numpy, got {_choice!r}"
    )
if _choice == "numba" and not HAVE_NUMBA:
    raise ImportError("QMONOGAMY_BACKEND=numba but numba is not importable")

USE_NUMBA = HAVE_NUMBA if _choice == "auto" else _choice == "numba"


def active_backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
