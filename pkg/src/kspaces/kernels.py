"""Backend selection for the hot numeric kernels.

At import time this module binds to the compiled Cython core
(``kspaces._core``) when it is available, and otherwise to the pure
NumPy/stdlib fallback (``kspaces._kernels_py``).  Setting the environment
variable ``KS_PURE_PYTHON=1`` forces the fallback.  Both backends satisfy
the same contracts; ``benchmarks/bench_kernels.py`` compares their speed.
"""

import os

import numpy as np

# Kronrod-15 nodes on [-1, 1], ascending.  The embedded Gauss-7 rule uses
# the odd indices (1, 3, ..., 13).
GK15_NODES = np.array(
    [
        -0.991455371120812639206854697526329,
        -0.949107912342758524526189684047851,
        -0.864864423359769072789712788640926,
        -0.741531185599394439863864773280788,
        -0.586087235467691130294144838258730,
        -0.405845151377397166906606412076961,
        -0.207784955007898467600689403773245,
        0.0,
        0.207784955007898467600689403773245,
        0.405845151377397166906606412076961,
        0.586087235467691130294144838258730,
        0.741531185599394439863864773280788,
        0.864864423359769072789712788640926,
        0.949107912342758524526189684047851,
        0.991455371120812639206854697526329,
    ]
)

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}
try:  # pragma: no cover - depends on build environment
    from . import _core

    _BACKENDS["cython"] = _core
except ImportError:  # pragma: no cover
    _core = None

if os.environ.get("KS_PURE_PYTHON") == "1" or _core is None:
    _active_name = "python"
else:
    _active_name = "cython"


def backend_name():
    """Name of the kernel backend in use ("cython" or "python")."""
    return _active_name


def available_backends():
    return tuple(sorted(_BACKENDS))


def force_backend(name):
    """Switch the active backend; intended for tests and benchmarks."""
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}")
    _active_name = name


def neumaier_sum(values):
    """Compensated sum of a 1-d array, deterministic for a fixed order."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.size == 0:
        return 0.0
    return _BACKENDS[_active_name].neumaier_sum(arr)


def gk15_batch(fvals, halfwidths):
    """Panel integrals and error estimates for a batch of GK15 panels.

    ``fvals``: (m, 15) integrand values at ``GK15_NODES`` per panel.
    ``halfwidths``: (m,) panel half-widths.  Returns ``(values, errors)``.
    """
    impl = _BACKENDS[_active_name]
    if impl is _kernels_py:
        return impl.gk15_batch(fvals, halfwidths)
    fvals = np.ascontiguousarray(fvals, dtype=np.float64)
    halfwidths = np.ascontiguousarray(halfwidths, dtype=np.float64)
    m = fvals.shape[0]
    values = np.empty(m)
    errors = np.empty(m)
    impl.gk15_batch_into(fvals, halfwidths, values, errors)
    return values, errors
