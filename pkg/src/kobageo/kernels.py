"""Backend selection for the hot kernels.

The compiled extension ``_ckernels`` is used when it imports and the domain
is a built-in kind; otherwise the numpy implementations in ``_pykernels``
run.  Set ``KOBAGEO_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

_ck = None
if os.environ.get("KOBAGEO_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _ck
    except ImportError:  # extension not built
        _ck = None

BACKEND = "cython" if _ck is not None else "python"


def _real_view(z):
    return np.ascontiguousarray(z, dtype=complex).view(float)


def rho_batch(domain, pts, backend=None):
    """Defining function at an ``(N, d)`` batch of points."""
    pts = np.asarray(pts, dtype=complex)
    use_c = _ck is not None and domain.kernel is not None and backend != "python"
    if backend == "cython" and not use_c:
        raise RuntimeError("compiled kernels unavailable for this domain")
    if use_c:
        kind, params = domain.kernel
        flat = pts.reshape(-1, pts.shape[-1])
        return _ck.rho_batch(kind, params, _real_view(flat)).reshape(pts.shape[:-1])
    return domain.rho(pts)


def exit_radii(domain, origins, dirs, tmax, n_march=32, rtol=1e-10, backend=None):
    """First exit distance of each ray; see ``_pykernels.exit_radii``."""
    origins = np.atleast_2d(np.asarray(origins, dtype=complex))
    dirs = np.atleast_2d(np.asarray(dirs, dtype=complex))
    origins, dirs = np.broadcast_arrays(origins, dirs)
    use_c = _ck is not None and domain.kernel is not None and backend != "python"
    if backend == "cython" and not use_c:
        raise RuntimeError("compiled kernels unavailable for this domain")
    if use_c:
        kind, params = domain.kernel
        return _ck.exit_radii(kind, params, _real_view(origins), _real_view(dirs),
                              float(tmax), n_march, rtol)
    return _pykernels.exit_radii(domain.rho, origins, dirs, tmax, n_march, rtol)
