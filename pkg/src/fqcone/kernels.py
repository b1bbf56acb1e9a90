"""Backend selection for the hot kernels.

Set FQCONE_BACKEND=numpy to force the pure-numpy path, FQCONE_BACKEND=numba
to require the compiled one; the default picks numba when importable.
FQCONE_WORKERS, if set, is forwarded to numba's thread pool (the stock
kernels are serial, so this only matters for user-supplied parallel ones).
"""

import os

_requested = os.environ.get("FQCONE_BACKEND", "auto").lower()

if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(f"FQCONE_BACKEND must be auto|numba|numpy, got {_requested!r}")

if _requested == "numpy":
    BACKEND = "numpy"
else:
    try:
        import numba  # noqa: F401
        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        BACKEND = "numpy"

if BACKEND == "numba":
    workers = os.environ.get("FQCONE_WORKERS")
    if workers:
        import numba
        numba.set_num_threads(
            min(max(1, int(workers)), numba.config.NUMBA_NUM_THREADS))
    from ._kernels_numba import (  # noqa: F401
        gradient_eval,
        pair_count,
        pair_exponent_hist,
        pair_table_complex,
        pair_table_int,
    )
else:
    from ._kernels_numpy import (  # noqa: F401
        gradient_eval,
        pair_count,
        pair_exponent_hist,
        pair_table_complex,
        pair_table_int,
    )

# The separable tensor contraction beats the compiled direct sum by orders
# of magnitude at larger q (see benchmarks/bench_backends.py), so it serves
# both backends; the jitted loop remains as a cross-validation reference.
from ._kernels_numpy import extension_table  # noqa: F401,E402
