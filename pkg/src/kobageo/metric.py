"""Two-sided bounds on the Kobayashi-Royden metric and shell suprema.

Upper bound: the disk ``{z + zeta v/|v| : |zeta| < r(z; v)}`` lies in the
domain, so ``kappa(z; v) <= |v| / r(z; v)``.  Lower bounds: inclusion in
the enclosing ball (exact ball metric), and for convex domains
``kappa(z; v) >= |v| / (2 r(z; v))``.  Ball and polydisk kinds use their
exact metric on both sides.

``M(r)`` is the supremum of ``1/kappa(z; v)`` over unit ``v`` and points
with boundary distance at most ``r``; :func:`estimate_M_shell` estimates it
from below (``M_lower``, via the metric upper bound) and reports the same
supremum taken with the metric lower bound as ``M_upper``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import models
from .domain import (
    Domain, as_direction, as_point, boundary_distances, contains, contains_many,
    coordinate_directions, complex_directions, kernels, line_radii, sample_interior,
)
from .errors import DomainError, InputError, SamplingError

SHELL_WIDTH = 0.25


@dataclass(frozen=True)
class MetricEstimate:
    lower: float
    upper: float
    lower_method: str
    upper_method: str

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol


@dataclass(frozen=True)
class MShellEstimate:
    r: float
    M_lower: float
    M_upper: float
    localizer: tuple | None
    sample_count: int
    witness: np.ndarray | None = field(default=None, repr=False)
    witness_direction: np.ndarray | None = field(default=None, repr=False)


def exact_model_metric(model: str, z, v) -> float:
    """Exact metric of the unit disk, unit polydisk or unit ball."""
    z = as_point(z)
    v = as_point(v, z.shape[0])
    if model == "disk":
        if z.shape[0] != 1:
            raise InputError("the disk model takes one coordinate")
        model = "ball"
    if model == "ball":
        if np.linalg.norm(z) >= 1:
            raise DomainError(f"{z} is not inside the unit ball")
        return float(models.ball_metric(z, v))
    if model == "polydisk":
        if np.max(np.abs(z)) >= 1:
            raise DomainError(f"{z} is not inside the unit polydisk")
        return float(models.polydisk_metric(z, v))
    raise InputError(f"unknown model {model!r}")


def metric_floor(domain: Domain) -> float:
    """``c`` with ``kappa(z; v) >= c |v|`` everywhere: the enclosing ball at its center."""
    return 1.0 / domain.radius


def enclosing_ball_metric(domain: Domain, pts, dirs) -> np.ndarray:
    w = (np.asarray(pts, dtype=complex) - domain.center) / domain.radius
    return models.ball_metric(w, dirs) / domain.radius


def model_metric(domain: Domain, pts, dirs) -> np.ndarray:
    """Exact metric for ball/polydisk kinds; nan outside the model."""
    kind, c, r = domain.model
    w = (np.asarray(pts, dtype=complex) - c) / r
    dirs = np.asarray(dirs, dtype=complex) / r
    with np.errstate(invalid="ignore", divide="ignore"):
        if kind == "ball":
            out = models.ball_metric(w, dirs)
            bad = np.linalg.norm(w, axis=-1) >= 1
        else:
            out = models.polydisk_metric(w, dirs)
            bad = np.max(np.abs(w), axis=-1) >= 1
    return np.where(bad, np.nan, out)


def metric_bounds_many(domain: Domain, pts, dirs, n_phases: int = 64,
                       refine_iters: int = 28, rtol: float = 1e-10):
    """Vectorized ``(lower, upper)`` metric bounds at ``(N, d)`` points/directions.

    Points are assumed interior; outside points give nan.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    dirs = np.atleast_2d(np.asarray(dirs, dtype=complex))
    pts, dirs = np.broadcast_arrays(pts, dirs)
    if domain.model is not None:
        k = model_metric(domain, pts, dirs)
        return k, k
    norm = np.linalg.norm(dirs, axis=1)
    inside = contains_many(domain, pts)
    out_l = np.full(norm.shape, np.nan)
    out_u = np.full(norm.shape, np.nan)
    zero = norm == 0
    out_l[zero & inside] = 0.0
    out_u[zero & inside] = 0.0
    idx = np.nonzero(inside & ~zero)[0]
    if idx.size:
        r = line_radii(domain, pts[idx], dirs[idx], n_phases, refine_iters, rtol)
        upper = norm[idx] / r
        lower = enclosing_ball_metric(domain, pts[idx], dirs[idx])
        if domain.convex:
            lower = np.maximum(lower, 0.5 * upper)
        out_l[idx] = np.minimum(lower, upper)
        out_u[idx] = upper
    return out_l, out_u


def metric_bounds(domain: Domain, z, v) -> MetricEstimate:
    """Certified ``lower <= kappa(z; v) <= upper`` at an interior point."""
    z = as_point(z, domain.d)
    v = as_direction(v, domain.d)
    if not contains(domain, z):
        raise DomainError(f"point {z} is not in the domain")
    lo, up = metric_bounds_many(domain, z[None, :], v[None, :])
    if domain.model is not None:
        return MetricEstimate(float(lo[0]), float(up[0]), "exact-model", "exact-model")
    return MetricEstimate(
        float(lo[0]), float(up[0]),
        "enclosing-ball+convex-half" if domain.convex else "enclosing-ball",
        "line-radius",
    )


# ---------------------------------------------------------------------------
# shell suprema
# ---------------------------------------------------------------------------

def _in_localizer(pts, localizer):
    if localizer is None:
        return np.ones(pts.shape[0], dtype=bool)
    c, rad = localizer
    return np.linalg.norm(pts - c, axis=1) < rad


def shell_points(domain: Domain, r: float, n_points: int, seed: int = 0,
                 localizer=None, h: float = SHELL_WIDTH, axis_rays: bool = True,
                 bisect_iters: int = 48):
    """Points with estimated boundary distance in ``((1-h) r, r]``.

    Random interior points are pushed outward along random directions until
    the batch boundary-distance estimate hits a target level.  That
    estimate never undershoots, so every returned point has true boundary
    distance at most ``r``.  With ``axis_rays`` the rays from the base point
    along the coordinate directions are included with target exactly ``r``.
    """
    d = domain.d
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(n_points)
    origins = np.empty((n_points, d), dtype=complex)
    dirs = np.empty((n_points, d), dtype=complex)
    targets = np.empty(n_points)
    within = None if localizer is None else (as_point(localizer[0], d), float(localizer[1]))
    for k, child in enumerate(children):
        rng = np.random.default_rng(child)
        origins[k] = sample_interior(domain, 1, rng, within=within)[0]
        g = rng.standard_normal(2 * d)
        dirs[k] = (g / np.linalg.norm(g)).view(complex)
        targets[k] = r * (1.0 - h * rng.random())
    if axis_rays and localizer is None:
        cd = coordinate_directions(d)
        origins = np.concatenate([np.repeat(domain.base_point[None, :], len(cd), 0), origins])
        dirs = np.concatenate([cd, dirs])
        targets = np.concatenate([np.full(len(cd), r), targets])

    T = kernels.exit_radii(domain, origins, dirs, domain.tmax)
    lo = np.zeros(len(T))
    hi = T.copy()
    d0 = boundary_distances(domain, origins)
    ok = d0 > (1.0 - h) * r
    start_in = ok & (d0 <= r)
    for _ in range(bisect_iters):
        mid = 0.5 * (lo + hi)
        dm = boundary_distances(domain, origins + mid[:, None] * dirs)
        above = dm > targets
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    s = np.where(start_in, 0.0, hi)
    pts = origins + s[:, None] * dirs
    dist = boundary_distances(domain, pts)
    keep = ok & contains_many(domain, pts) & (dist <= r) & (dist > 0) & _in_localizer(pts, within)
    return pts[keep], dist[keep]


def estimate_M_shell(domain: Domain, r: float, localizer=None, n_points: int = 96,
                     n_dirs: int = 32, seed: int = 0, h: float = SHELL_WIDTH,
                     n_phases: int = 64) -> MShellEstimate:
    """Estimate ``M(r)`` (or its localized version) from shell samples."""
    if not (0 < r < domain.radius):
        raise InputError(f"shell radius must lie in (0, {domain.radius})")
    if n_points < 1 or n_dirs < 1:
        raise InputError("budget needs at least one point and one direction")
    if localizer is not None:
        c, rad = as_point(localizer[0], domain.d), float(localizer[1])
        if not rad > 0:
            raise InputError("localizer radius must be positive")
        localizer = (c, rad)
    pts, _ = shell_points(domain, r, n_points, seed, localizer, h)
    if pts.shape[0] == 0:
        raise SamplingError(f"no samples found in the shell delta in ({(1 - h) * r:.3g}, {r:.3g}]")
    vs = np.concatenate([complex_directions(n_dirs, domain.d), np.eye(domain.d, dtype=complex)])
    P = np.repeat(pts, len(vs), axis=0)
    V = np.tile(vs, (pts.shape[0], 1))
    lo, up = metric_bounds_many(domain, P, V, n_phases=n_phases)
    inv_up = 1.0 / up
    k = int(np.nanargmax(inv_up))
    return MShellEstimate(
        r=float(r), M_lower=float(inv_up[k]), M_upper=float(np.nanmax(1.0 / lo)),
        localizer=None if localizer is None else (localizer[0].tolist(), localizer[1]),
        sample_count=int(pts.shape[0]), witness=P[k], witness_direction=V[k],
    )
