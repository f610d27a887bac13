"""Pure numpy kernels.

These are the reference implementations of the defining functions of the
built-in domains and of the ray-exit bisection.  ``_ckernels`` provides
compiled versions of the same routines for the built-in kinds; this module
is used for custom domains and whenever the extension is unavailable.

Points are complex arrays of shape ``(..., d)``.
"""

from __future__ import annotations

import numpy as np

KIND_BALL = 0
KIND_POLYDISK = 1
KIND_EXAMPLE51 = 2
KIND_EXAMPLE52 = 3


def cutoff(s, a, b):
    """C-infinity step: 1 on ``[0, a]``, 0 on ``[b, inf)``."""
    s = np.asarray(s, dtype=float)
    x = np.clip((b - s) / (b - a), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f1 = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        y = 1.0 - x
        f2 = np.where(y > 0, np.exp(-1.0 / np.where(y > 0, y, 1.0)), 0.0)
    return f1 / (f1 + f2)


def rho_ball(z, center, radius):
    return np.linalg.norm(z - center, axis=-1) - radius


def rho_polydisk(z, center, radii):
    return np.max(np.abs(z - center) / radii, axis=-1) - 1.0


def _flat_exp(a):
    # exp(-1/a) extended by 0 at a = 0
    with np.errstate(divide="ignore"):
        return np.where(a > 0, np.exp(-1.0 / np.where(a > 0, a, 1.0)), 0.0)


def rho_example51(z, eps, n, C):
    z = np.asarray(z, dtype=complex)
    a1 = np.abs(z[..., 0]) ** 2
    t = a1 + np.abs(z[..., 1]) ** 2
    phi0 = _flat_exp(a1) - z[..., 1].imag
    chi = np.where(t > eps * eps, np.maximum(t - eps * eps, 0.0) ** n, 0.0)
    return C * chi + phi0 * cutoff(np.sqrt(t), 2 * eps, 3 * eps)


def rho_example52(z, eps, logC):
    z = np.asarray(z, dtype=complex)
    t = np.abs(z[..., 0]) ** 2 + np.abs(z[..., 1]) ** 2
    phi0 = _flat_exp(t) - z[..., 1].imag
    gap = t - eps * eps
    with np.errstate(divide="ignore", over="ignore"):
        psi = np.where(gap > 0, np.exp(logC - 1.0 / np.where(gap > 0, gap, 1.0)), 0.0)
    return psi + phi0 * cutoff(np.sqrt(t), 2 * eps, 3 * eps)


def rho_builtin(kind, params, z):
    """Evaluate a built-in defining function from its packed parameter vector."""
    z = np.asarray(z, dtype=complex)
    d = z.shape[-1]
    p = np.asarray(params, dtype=float)
    if kind == KIND_BALL:
        center = p[1:1 + 2 * d].view(complex)
        return rho_ball(z, center, p[0])
    if kind == KIND_POLYDISK:
        radii = p[:d]
        center = p[d:3 * d].view(complex)
        return rho_polydisk(z, center, radii)
    if kind == KIND_EXAMPLE51:
        return rho_example51(z, p[0], int(p[1]), p[2])
    if kind == KIND_EXAMPLE52:
        return rho_example52(z, p[0], p[1])
    raise ValueError(f"unknown kernel kind {kind}")


def exit_radii(rho, origins, dirs, tmax, n_march=32, rtol=1e-10,
               max_halvings=1100, max_bisect=200):
    """First exit distance along rays ``origin + t * dir``.

    A coarse march over ``(0, tmax]`` brackets the first sign change of
    ``rho``; when the first march step is already outside, the bracket is
    shrunk geometrically so exits at any scale down to underflow resolve.
    Bisection then runs to relative width ``rtol``.  The returned value is
    the inside end of the final bracket, so it never exceeds the true exit.
    Rays that never leave within ``tmax`` return ``tmax``.
    """
    origins = np.asarray(origins, dtype=complex)
    dirs = np.asarray(dirs, dtype=complex)
    n = origins.shape[0]
    lo = np.zeros(n)
    hi = np.full(n, float(tmax))
    found = np.zeros(n, dtype=bool)

    step = float(tmax) / n_march
    for k in range(1, n_march + 1):
        todo = ~found
        if not todo.any():
            break
        t = step * k
        idx = np.nonzero(todo)[0]
        out = rho(origins[idx] + t * dirs[idx]) >= 0
        hit = idx[out]
        hi[hit] = t
        found[hit] = True
        lo[idx[~out]] = t
    lo[~found] = float(tmax)
    hi[~found] = float(tmax)

    # exit inside the first march step: shrink geometrically
    shrink = found & (lo == 0.0)
    for _ in range(max_halvings):
        idx = np.nonzero(shrink)[0]
        if idx.size == 0:
            break
        t = 0.5 * hi[idx]
        inside = rho(origins[idx] + t[:, None] * dirs[idx]) < 0
        lo[idx[inside]] = t[inside]
        hi[idx[~inside]] = t[~inside]
        shrink[idx[inside]] = False
        shrink[idx[~inside & (t == 0.0)]] = False

    active = found & (lo > 0.0)
    for _ in range(max_bisect):
        active &= (hi - lo) > rtol * lo
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        mid = 0.5 * (lo[idx] + hi[idx])
        inside = rho(origins[idx] + mid[:, None] * dirs[idx]) < 0
        lo[idx[inside]] = mid[inside]
        hi[idx[~inside]] = mid[~inside]
    return lo
