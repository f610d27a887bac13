"""Sampled paths, Kobayashi lengths, distance estimates and almost-geodesics.

Distances are bracketed: the upper bound is the length of an optimized
polyline measured with the metric upper bound, the lower bound comes from
holomorphic maps onto model domains (the enclosing ball and, for convex
domains, supporting strips mapped to the upper half-plane).  On ball and
polydisk kinds the exact distance is the lower bound.

A polyline is optimized by minimizing the discrete energy
``K * sum(L_i**2)`` over its interior vertices, where ``L_i`` is the
Gauss-Legendre length of segment ``i``; at a minimum all segments have
equal length, so the energy equals the squared total length.  Gradients
come from central differences, perturbing every other vertex at once.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import models
from .domain import Domain, as_point, contains_many, line_radii, nearest_boundary_point
from .errors import (
    CertificateInfeasible, DegeneratePathError, GapNotClosed, InputError,
    ReparametrizationError, SearchFailure,
)
from .metric import metric_bounds_many, metric_floor, model_metric

PENALTY = 1e6
JITTER = 1e-14


@dataclass(frozen=True, eq=False)
class SampledPath:
    grid: np.ndarray
    points: np.ndarray
    domain: Domain | None = field(default=None, repr=False)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        p = np.asarray(self.points, dtype=complex)
        if p.ndim != 2 or g.shape != (p.shape[0],):
            raise InputError("grid and points must have matching lengths")
        if g.size < 2:
            raise InputError("a path needs at least two samples")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(p))):
            raise InputError("path has non-finite entries")
        if np.any(np.diff(g) <= 0):
            raise InputError("path grid must be strictly increasing")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "points", p)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def max_step(self) -> float:
        return float(np.max(np.linalg.norm(np.diff(self.points, axis=0), axis=1)))


@dataclass(frozen=True)
class DistanceEstimate:
    lower: float
    upper: float
    witness_path: SampledPath | None = field(default=None, repr=False)
    lower_method: str = ""
    info: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True)
class AlmostGeodesicCertificate:
    lam: float
    kappa: float
    worst_pair_margin: float
    lower_margin: float
    upper_margin: float
    lemma_margin: float
    speed_max: float
    speed_min: float
    lipschitz_const: float
    lipschitz_bound: float
    length: float
    n_pairs: int

    def passes(self, tol: float = 1e-3) -> bool:
        return (self.worst_pair_margin >= -tol and self.lemma_margin >= -tol
                and self.speed_max <= self.lam * (1 + tol)
                and self.lipschitz_const <= self.lipschitz_bound + tol)

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["lambda"] = out.pop("lam")
        return out


@dataclass(frozen=True)
class PathBudget:
    """Optimizer settings.

    ``levels`` are the successive segment counts (default: up to 64 on
    ball/polydisk kinds, up to 16 elsewhere).  Refinement stops early once
    the upper bound is within ``rel_gap`` of the lower bound.
    """

    levels: tuple | None = None
    maxiter: int = 400
    rel_gap: float = 2e-3
    n_phases: int = 16
    quad_nodes: int = 6
    final_sub: int = 4


# ---------------------------------------------------------------------------
# lengths
# ---------------------------------------------------------------------------

def _gauss(q):
    x, w = np.polynomial.legendre.leggauss(q)
    return 0.5 * (x + 1.0), 0.5 * w


def _metric(domain, pts, dirs, side="upper", n_phases=64, refine_iters=28, rtol=1e-10):
    if domain.model is not None:
        return model_metric(domain, pts, dirs)
    lo, up = metric_bounds_many(domain, pts, dirs, n_phases, refine_iters, rtol)
    return up if side == "upper" else lo


def segment_lengths(domain: Domain, pts, side: str = "upper", q: int = 6, sub: int = 1,
                    n_phases: int = 64, refine_iters: int = 28, rtol: float = 1e-10,
                    penalty: float | None = None) -> np.ndarray:
    """Gauss-Legendre length of each chord of the polyline ``pts``.

    ``pts`` has shape ``(K+1, d)`` or a batch ``(B, K+1, d)``.  Each chord is
    split into ``sub`` pieces with ``q`` nodes each.  Nodes outside the
    domain give nan, or ``penalty * |dz|`` when set.
    """
    pts = np.asarray(pts, dtype=complex)
    batch = pts.ndim == 3
    if not batch:
        pts = pts[None]
    B, K, d = pts.shape[0], pts.shape[1] - 1, pts.shape[2]
    x, w = _gauss(q)
    s = ((np.arange(sub)[:, None] + x[None, :]) / sub).ravel()
    ws = np.tile(w, sub) / sub
    dz = np.diff(pts, axis=1)
    nodes = pts[:, :-1, None, :] + s[None, None, :, None] * dz[:, :, None, :]
    V = np.broadcast_to(dz[:, :, None, :], nodes.shape)
    k = _metric(domain, nodes.reshape(-1, d), V.reshape(-1, d), side,
                n_phases, refine_iters, rtol).reshape(B, K, -1)
    if penalty is not None:
        k = np.where(np.isnan(k), penalty * np.linalg.norm(dz, axis=2)[:, :, None], k)
    out = k @ ws
    return out if batch else out[0]


def kobayashi_length(domain: Domain, path: SampledPath, sub: int = 4, delta_min: float = 0.0):
    """``(lower, upper)`` length of a path by composite midpoint quadrature.

    Each chord is split into ``sub`` cells and the metric bounds are
    evaluated at the cell midpoints.
    """
    pts = path.points
    inside = contains_many(domain, pts)
    if not inside.all():
        raise DegeneratePathError("path leaves the domain")
    if delta_min > 0:
        from .domain import boundary_distances
        if np.min(boundary_distances(domain, pts)) < delta_min:
            raise DegeneratePathError("path comes closer than delta_min to the boundary")
    K, d = pts.shape[0] - 1, pts.shape[1]
    dz = np.diff(pts, axis=0)
    if not np.any(dz):
        return 0.0, 0.0
    s = (np.arange(sub) + 0.5) / sub
    nodes = pts[:-1, None, :] + s[None, :, None] * dz[:, None, :]
    V = np.broadcast_to(dz[:, None, :], nodes.shape).reshape(-1, d) / sub
    if domain.model is not None:
        k = model_metric(domain, nodes.reshape(-1, d), V)
        lo = up = k
    else:
        lo, up = metric_bounds_many(domain, nodes.reshape(-1, d), V)
    if np.any(np.isnan(up)):
        raise DegeneratePathError("path chord leaves the domain")
    return float(np.sum(lo)), float(np.sum(up))


# ---------------------------------------------------------------------------
# lower bounds
# ---------------------------------------------------------------------------

def model_distance(domain: Domain, z, w) -> np.ndarray:
    kind, c, r = domain.model
    a = (np.asarray(z, dtype=complex) - c) / r
    b = (np.asarray(w, dtype=complex) - c) / r
    if kind == "ball":
        return models.ball_distance(a, b)
    return models.polydisk_distance(a, b)


def enclosing_ball_distance(domain: Domain, z, w) -> np.ndarray:
    a = (np.asarray(z, dtype=complex) - domain.center) / domain.radius
    b = (np.asarray(w, dtype=complex) - domain.center) / domain.radius
    return models.ball_distance(a, b)


def supporting_strips(domain: Domain, pts):
    """For each point: its nearest boundary point ``p`` and unit normal ``n``.

    Convexity puts the domain in ``{-W < Re<x - p, n> < 0}``, with ``W``
    from the enclosing ball.  Returns ``(P, N, W)``.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    P = np.empty_like(pts)
    N = np.empty_like(pts)
    for k, z in enumerate(pts):
        delta, p = nearest_boundary_point(domain, z)
        n = (p - z) / delta
        # tiny outward shift absorbs the residual of the refined minimum
        P[k] = p + 1e-12 * domain.radius * n
        N[k] = n
    W = np.real(np.sum((P - domain.center) * np.conj(N), axis=1)) + domain.radius
    return P, N, W


def _strip_coordinate(x, p, n, W):
    # Re in (0, W) -> upper half-plane via exp(i pi u / W)
    zeta = np.sum((x - p) * np.conj(n), axis=-1) + W
    return np.exp(1j * np.pi * zeta / W)


def _uhp_distance(a, b):
    num = np.abs(a - b)
    den = np.abs(a - np.conj(b))
    t = np.clip(num / den, 0.0, 1.0)
    with np.errstate(divide="ignore"):
        return np.arctanh(t)


def strip_distance_matrix(domain: Domain, pts, strips=None) -> np.ndarray:
    """Pairwise lower bounds from every point's supporting strip."""
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    P, N, W = supporting_strips(domain, pts) if strips is None else strips
    m = pts.shape[0]
    best = np.zeros((m, m))
    for s in range(P.shape[0]):
        eta = _strip_coordinate(pts, P[s], N[s], W[s])
        best = np.maximum(best, _uhp_distance(eta[:, None], eta[None, :]))
    return best


def distance_lower_bound(domain: Domain, z, w):
    """``(value, method)``: a certified lower bound on the distance."""
    z = as_point(z, domain.d)
    w = as_point(w, domain.d)
    if domain.model is not None:
        return float(model_distance(domain, z, w)), "exact-model"
    best = float(enclosing_ball_distance(domain, z, w))
    method = "enclosing-ball"
    if domain.convex:
        strip = float(strip_distance_matrix(domain, np.stack([z, w]))[0, 1])
        if strip > best:
            best, method = strip, "supporting-strip"
    return best, method


# ---------------------------------------------------------------------------
# polyline optimization
# ---------------------------------------------------------------------------

class _Energy:
    def __init__(self, domain, z, w, K, budget):
        self.domain, self.z, self.w, self.K, self.b = domain, z, w, K, budget
        self.d = z.shape[0]
        self.evals = 0
        # exact model metrics are smooth; line radii carry bisection noise
        self.step = 1e-6 if domain.model is not None else 1e-4

    def points(self, x):
        inner = x.view(complex).reshape(self.K - 1, self.d)
        return np.concatenate([self.z[None, :], inner, self.w[None, :]])

    def seg(self, P):
        self.evals += 1
        return segment_lengths(self.domain, P, q=self.b.quad_nodes, n_phases=self.b.n_phases,
                               refine_iters=0, penalty=PENALTY)

    def value(self, x):
        L = self.seg(self.points(x))
        return self.K * float(L @ L)

    def value_grad(self, x):
        P = self.points(x)
        K, d = self.K, self.d
        chord = np.linalg.norm(np.diff(P, axis=0), axis=1)
        h = self.step * np.minimum(chord[:-1], chord[1:]) + 1e-15
        Pr = P.view(float)
        # every other vertex moves at once: each segment sees one moved end
        combos, stack = [], [Pr]
        for color in (1, 2):
            idx = np.arange(color, K, 2)
            for j in range(2 * d):
                for sign in (1.0, -1.0):
                    Q = Pr.copy()
                    Q[idx, j] += sign * h[idx - 1]
                    stack.append(Q)
                combos.append((idx, j))
        Ls = self.seg(np.stack(stack).view(complex))
        L = Ls[0]
        grad = np.zeros((K - 1, 2 * d))
        for c, (idx, j) in enumerate(combos):
            Lp, Lm = Ls[1 + 2 * c], Ls[2 + 2 * c]
            ep = Lp[idx - 1] ** 2 + Lp[idx] ** 2
            em = Lm[idx - 1] ** 2 + Lm[idx] ** 2
            grad[idx - 1, j] = K * (ep - em) / (2 * h[idx - 1])
        return K * float(L @ L), grad.ravel()


def _refine(P):
    mid = 0.5 * (P[:-1] + P[1:])
    out = np.empty((2 * P.shape[0] - 1, P.shape[1]), dtype=complex)
    out[0::2] = P
    out[1::2] = mid
    return out


def _resample(P, K):
    # K chords, uniform in Euclidean arc length
    s = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(P, axis=0), axis=1))])
    t = np.linspace(0.0, s[-1], K + 1)
    re = np.stack([np.interp(t, s, P[:, j].real) for j in range(P.shape[1])], axis=1)
    im = np.stack([np.interp(t, s, P[:, j].imag) for j in range(P.shape[1])], axis=1)
    return re + 1j * im


def _initial_paths(domain, z, w, K):
    line = z + np.linspace(0.0, 1.0, K + 1)[:, None] * (w - z)
    cands = []
    if contains_many(domain, line).all():
        cands.append(("chord", line))
    if not domain.convex or not cands:
        b = domain.base_point
        half = max(K // 2, 1)
        leg1 = z + np.linspace(0.0, 1.0, half + 1)[:, None] * (b - z)
        leg2 = b + np.linspace(0.0, 1.0, K - half + 1)[1:, None] * (w - b)
        via = np.concatenate([leg1, leg2])
        if contains_many(domain, via).all():
            cands.append(("via-base", via))
    return cands


def _optimize(domain, z, w, P0, budget, lower, levels):
    P = P0
    history = []
    for K in levels:
        if P.shape[0] - 1 != K:
            P = _refine(P) if P.shape[0] - 1 == K // 2 else _resample(P, K)
        if K < 2:
            continue
        en = _Energy(domain, z, w, K, budget)
        x0 = np.ascontiguousarray(P[1:-1]).view(float).ravel()
        res = optimize.minimize(en.value_grad, x0, jac=True, method="L-BFGS-B",
                                options={"maxiter": budget.maxiter, "gtol": 1e-12,
                                         "ftol": 1e-15, "maxcor": 20})
        if res.fun <= en.value(x0):
            P = en.points(res.x)
        L = segment_lengths(domain, P, q=budget.quad_nodes, n_phases=budget.n_phases,
                            refine_iters=0)
        total = float(np.sum(L))
        history.append({"K": K, "length": total, "iterations": int(res.nit), "evals": en.evals})
        if budget.rel_gap > 0 and lower > 0 and total <= lower * (1 + budget.rel_gap):
            break
    return P, history


def _default_levels(domain):
    return (4, 8, 16, 32, 64) if domain.model is not None else (4, 8, 16)


def path_upper_length(domain: Domain, P, q: int = 6, sub: int = 4) -> float:
    L = segment_lengths(domain, P, q=q, sub=sub)
    if np.any(np.isnan(L)):
        return math.inf
    return float(np.sum(L))


def estimate_distance(domain: Domain, z, w, budget: PathBudget | None = None) -> DistanceEstimate:
    """Bracket the Kobayashi distance between two interior points."""
    budget = budget or PathBudget()
    levels = budget.levels or _default_levels(domain)
    z = as_point(z, domain.d)
    w = as_point(w, domain.d)
    inside = contains_many(domain, np.stack([z, w]))
    if not inside.all():
        from .errors import DomainError
        raise DomainError("both endpoints must lie in the domain")
    lower, method = distance_lower_bound(domain, z, w)
    if np.array_equal(z, w):
        path = SampledPath(np.array([0.0, 1.0]), np.stack([z, w]), domain)
        return DistanceEstimate(0.0, 0.0, path, method)
    best = (math.inf, None, None, None)
    for name, P0 in _initial_paths(domain, z, w, levels[0]):
        P, hist = _optimize(domain, z, w, P0, budget, lower, levels)
        up = path_upper_length(domain, P, q=budget.quad_nodes, sub=budget.final_sub)
        if up < best[0]:
            best = (up, P, name, hist)
    upper, P, name, hist = best
    if not math.isfinite(upper):
        raise SearchFailure("no connecting path inside the domain was found")
    upper = max(upper, lower)
    t = np.linspace(0.0, 1.0, P.shape[0])
    return DistanceEstimate(lower, upper, SampledPath(t, P, domain), method,
                            {"init": name, "levels": hist})


# ---------------------------------------------------------------------------
# geodesics on models
# ---------------------------------------------------------------------------

def exact_model_geodesic(model, z, w, n: int = 257) -> SampledPath:
    """Closed-form geodesic from z to w on a uniform arc-length grid.

    ``model`` is ``"disk"``, ``"polydisk"``, ``"ball"`` (unit models) or a
    ball/polydisk-kind :class:`Domain`.
    """
    domain = None
    if isinstance(model, Domain):
        if model.model is None:
            raise InputError("exact geodesics need a ball or polydisk domain")
        domain = model
        kind, c, r = model.model
    else:
        kind = {"disk": "ball", "ball": "ball", "polydisk": "polydisk", "bidisk": "polydisk"}.get(model)
        if kind is None:
            raise InputError(f"unknown model {model!r}")
        c, r = 0.0, 1.0
    z = as_point(z)
    w = as_point(w, z.shape[0])
    if np.array_equal(z, w):
        raise InputError("exact geodesic needs distinct endpoints")
    a, b = (z - c) / r, (w - c) / r
    bad = np.linalg.norm(a) >= 1 or np.linalg.norm(b) >= 1 if kind == "ball" else \
        np.max(np.abs(a)) >= 1 or np.max(np.abs(b)) >= 1
    if bad:
        from .errors import DomainError
        raise DomainError("endpoints must lie inside the model")
    if kind == "ball":
        total = float(models.ball_distance(a, b))
        u = np.linspace(0.0, total, n)
        pts = models.ball_geodesic(a, b, u)
    else:
        total = float(models.polydisk_distance(a, b))
        u = np.linspace(0.0, total, n)
        pts = models.polydisk_geodesic(a, b, u)
    pts[0], pts[-1] = a, b
    return SampledPath(u, c + r * pts, domain)


# ---------------------------------------------------------------------------
# almost-geodesics
# ---------------------------------------------------------------------------

def _node_indices(n, m):
    if n <= m:
        return np.arange(n)
    return np.unique(np.round(np.linspace(0, n - 1, m)).astype(int))


def verify_almost_geodesic(domain: Domain, path: SampledPath, lam: float = 1.0,
                           kappa: float = 1e-6, n_nodes: int = 64) -> AlmostGeodesicCertificate:
    """Check the (lam, kappa) almost-geodesic inequalities on sampled pairs.

    For nodes ``s < t``: the distance lower bound must exceed
    ``|t-s|/lam - kappa``; the best distance upper bound (the path's own
    chain length, or the exact distance on models) must stay below
    ``lam |t-s| + kappa``; and the subsegment length must not exceed the
    lower distance bound plus ``kappa``.  Speeds are chord upper lengths
    over parameter steps; the Lipschitz constant is the largest Euclidean
    chord to parameter ratio, compared with ``lam / c``.
    """
    if lam < 1 or kappa < 0:
        raise InputError("need lam >= 1 and kappa >= 0")
    P, t = path.points, path.grid
    if not contains_many(domain, P).all():
        raise DegeneratePathError("path leaves the domain")
    L = segment_lengths(domain, P, q=6, sub=2)
    if np.any(np.isnan(L)):
        raise DegeneratePathError("path chord leaves the domain")
    cum = np.concatenate([[0.0], np.cumsum(L)])
    speed = L / np.diff(t)

    idx = _node_indices(P.shape[0], n_nodes)
    X, T, C = P[idx], t[idx], cum[idx]
    dt = np.abs(T[:, None] - T[None, :])
    chain = np.abs(C[:, None] - C[None, :])
    if domain.model is not None:
        k_lo = model_distance(domain, X[:, None, :], X[None, :, :])
        k_up = np.minimum(k_lo, chain)
    else:
        k_lo = enclosing_ball_distance(domain, X[:, None, :], X[None, :, :])
        if domain.convex:
            k_lo = np.maximum(k_lo, strip_distance_matrix(domain, X))
        k_up = chain
    iu = np.triu_indices(len(idx), 1)
    lower_m = (k_lo - (dt / lam - kappa))[iu]
    upper_m = (lam * dt + kappa - k_up)[iu]
    lemma_m = (k_lo + kappa - chain)[iu]
    eu = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        lip = np.nanmax((eu / dt)[iu]) if iu[0].size else 0.0
    if iu[0].size == 0:
        lower_m = upper_m = lemma_m = np.array([np.inf])
    return AlmostGeodesicCertificate(
        lam=float(lam), kappa=float(kappa),
        worst_pair_margin=float(min(lower_m.min(), upper_m.min())),
        lower_margin=float(lower_m.min()), upper_margin=float(upper_m.min()),
        lemma_margin=float(lemma_m.min()),
        speed_max=float(speed.max()), speed_min=float(speed.min()),
        lipschitz_const=float(lip), lipschitz_bound=float(lam / metric_floor(domain)),
        length=float(cum[-1]), n_pairs=int(iu[0].size),
    )


def reparametrize_unit_speed(domain: Domain, path: SampledPath, kappa: float,
                             reference_upper: float | None = None, slack: float = 0.05,
                             n_out: int = 257, cell: float = 0.002, max_cells: int = 400_000):
    """Reparametrize a near-minimizing path by its upper-metric arc length.

    The cumulative length ``f`` is built from cells of length at most
    ``cell``, inverted by monotone linear interpolation and sampled on a
    uniform grid of ``[0, f(end)]``.  Returns the new path and its
    (1, kappa) certificate.
    """
    if not kappa > 0:
        raise InputError("kappa must be positive")
    P = path.points
    dz = np.diff(P, axis=0)
    if np.any(np.linalg.norm(dz, axis=1) == 0):
        raise ReparametrizationError("path has a zero-speed segment")
    L = segment_lengths(domain, P, q=6, sub=2)
    if np.any(~np.isfinite(L)):
        raise DegeneratePathError("path leaves the domain")
    total = float(np.sum(L))
    if reference_upper is None:
        reference_upper = estimate_distance(domain, P[0], P[-1]).upper
    if total > reference_upper + kappa * (1 - slack):
        raise CertificateInfeasible(
            f"path length {total:.6g} exceeds distance bound {reference_upper:.6g} "
            f"+ kappa(1 - slack)")
    m = np.maximum(1, np.ceil(L / cell)).astype(int)
    if m.sum() > max_cells:
        m = np.maximum(1, (m * max_cells / m.sum()).astype(int))
    s = np.concatenate([k + np.arange(mk) / mk for k, mk in enumerate(m)] + [[len(m)]])
    seg = np.minimum(s.astype(int), len(m) - 1)
    frac = s - seg
    fine = P[seg] + frac[:, None] * dz[seg]
    lens = segment_lengths(domain, fine, q=3)
    if np.any(~np.isfinite(lens)) or np.any(lens <= 0):
        raise ReparametrizationError("cumulative length is not strictly increasing")
    F = np.concatenate([[0.0], np.cumsum(lens)])
    bump = np.diff(F) <= 0
    if bump.any():
        F = F + JITTER * np.concatenate([[0], np.cumsum(bump)])
    u = np.linspace(0.0, F[-1], n_out)
    re = np.stack([np.interp(u, F, fine[:, j].real) for j in range(P.shape[1])], axis=1)
    im = np.stack([np.interp(u, F, fine[:, j].imag) for j in range(P.shape[1])], axis=1)
    out = SampledPath(u, re + 1j * im, domain)
    return out, verify_almost_geodesic(domain, out, 1.0, kappa)


def almost_geodesic_between(domain: Domain, z, w, kappa: float,
                            budget: PathBudget | None = None, slack: float = 0.05,
                            n_out: int = 257):
    """A certified (1, kappa)-almost-geodesic from z to w."""
    if not kappa > 0:
        raise InputError("kappa must be positive")
    z = as_point(z, domain.d)
    w = as_point(w, domain.d)
    if np.array_equal(z, w):
        raise InputError("endpoints coincide")
    est = estimate_distance(domain, z, w, budget or PathBudget(rel_gap=0.0))
    gap = est.upper - est.lower
    if gap > kappa * (1 - slack):
        raise GapNotClosed(f"distance bracket width {gap:.4g} exceeds kappa(1 - slack)", gap)
    path, cert = reparametrize_unit_speed(domain, est.witness_path, kappa, est.upper, slack, n_out)
    return path, cert


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def path_to_csv(path: SampledPath, extra: dict | None = None) -> str:
    """CSV text: t, Re z1, Im z1, ..., plus optional extra columns."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    d = path.d
    head = ["t"] + [f"{p}_z{j + 1}" for j in range(d) for p in ("re", "im")]
    extra = extra or {}
    wr.writerow(head + list(extra))
    cols = [np.asarray(v, dtype=float) for v in extra.values()]
    for i in range(len(path)):
        row = [path.grid[i]]
        for j in range(d):
            row += [path.points[i, j].real, path.points[i, j].imag]
        row += [c[i] for c in cols]
        wr.writerow(["%.17g" % v for v in row])
    return buf.getvalue()


def path_from_csv(text: str, domain: Domain | None = None) -> SampledPath:
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 3:
        raise InputError("path CSV needs a header and at least two rows")
    head = rows[0]
    d = sum(1 for h in head if h.startswith("re_z"))
    try:
        data = np.array([[float(x) for x in r[:1 + 2 * d]] for r in rows[1:] if r], dtype=float)
    except ValueError:
        raise InputError("path CSV has non-numeric entries") from None
    pts = data[:, 1::2] + 1j * data[:, 2::2]
    return SampledPath(data[:, 0], pts, domain)
