"""Hot-loop kernels: compiled core with a pure-python (numpy) fallback.

The two implementations are required to produce bit-identical results; the
compiled core is built without FP contraction for exactly that reason. Set
TDMPSIM_PURE_PYTHON=1 to force the fallback (used by the benchmark and the
cross-backend equivalence tests).
"""

import os

if os.environ.get("TDMPSIM_PURE_PYTHON"):
    from . import fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import fallback as _impl

        BACKEND = "python"

pair_reception = _impl.pair_reception
beacon_scatter = _impl.beacon_scatter
rng_edges = _impl.rng_edges


def backend() -> str:
    """Name of the kernel implementation selected at import."""
    return BACKEND
