"""Bounded domains in C^d given by a defining function.

A :class:`Domain` is ``{rho < 0}`` together with an enclosing ball, a base
point and a convexity flag.  Built-in kinds are the ball (and disk),
polydisk, the two flat-boundary convex examples ``example51`` and
``example52``, polydisk graph subspaces, and custom sublevel sets given
by an expression (see :mod:`kobageo.expr`).

Points and directions are complex numpy arrays of shape ``(d,)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from . import _pykernels as pk
from . import kernels, models
from .errors import DomainError, InputError, ParameterError, SamplingError
from .expr import compile_expression

EX51_EPS_MAX = 1.0 / math.sqrt(6.0)
EX52_EPS_MAX = 1.0 / (2.0 * math.sqrt(2.0))
ENCLOSING_MARGIN = 1e-3


@dataclass(frozen=True, eq=False)
class Domain:
    kind: str
    params: dict
    rho: Callable
    center: np.ndarray
    radius: float
    base_point: np.ndarray
    convex: bool
    kernel: tuple | None = None
    model: tuple | None = None
    constants: dict = field(default_factory=dict)
    graph_map: object | None = None

    @property
    def d(self) -> int:
        return int(self.center.shape[0])

    @property
    def tmax(self) -> float:
        # every ray from an interior point exits within one diameter
        return 2.0 * self.radius

    def spec(self) -> dict:
        return {"kind": self.kind, "params": _jsonable(self.params)}

    def __repr__(self):
        return f"Domain(kind={self.kind!r}, d={self.d}, params={self.params!r})"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# ---------------------------------------------------------------------------
# points and directions
# ---------------------------------------------------------------------------

def _to_complex(c):
    if isinstance(c, str):
        try:
            return complex(c.replace(" ", ""))
        except ValueError:
            raise InputError(f"cannot parse complex number {c!r}") from None
    if isinstance(c, (list, tuple)) and len(c) == 2:
        return complex(float(c[0]), float(c[1]))
    return complex(c)


def as_point(z, d: int | None = None) -> np.ndarray:
    """Coerce ``z`` to a finite complex vector, checking its dimension."""
    if isinstance(z, np.ndarray):
        arr = z.astype(complex).reshape(-1)
    else:
        if np.isscalar(z):
            z = [z]
        try:
            arr = np.array([_to_complex(c) for c in z], dtype=complex)
        except (TypeError, ValueError):
            raise InputError(f"cannot interpret {z!r} as a point") from None
    if arr.size == 0:
        raise InputError("points need at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"non-finite point {arr}")
    if d is not None and arr.shape[0] != d:
        raise InputError(f"expected {d} coordinates, got {arr.shape[0]}")
    return arr


def as_direction(v, d: int | None = None) -> np.ndarray:
    arr = as_point(v, d)
    if np.linalg.norm(arr) == 0:
        raise InputError("zero direction")
    return arr


def sphere_directions(n: int, dim: int) -> np.ndarray:
    """Deterministic, roughly uniform unit vectors in R^dim, shape (n, dim).

    Circle: equal angles.  S^2: Fibonacci spiral.  S^3: Fibonacci-type
    lattice in Hopf coordinates.  Higher: fixed-seed Gaussian directions.
    """
    i = np.arange(n) + 0.5
    if dim == 1:
        return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)[:, None]
    if dim == 2:
        a = 2 * np.pi * np.arange(n) / n
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    if dim == 3:
        zc = 1 - 2 * i / n
        a = np.pi * (1 + 5 ** 0.5) * np.arange(n)
        s = np.sqrt(1 - zc * zc)
        return np.stack([s * np.cos(a), s * np.sin(a), zc], axis=1)
    if dim == 4:
        # plastic-number Kronecker sequence for the two Hopf angles
        g = 1.32471795724474602596
        u = i / n
        x1 = 2 * np.pi * ((np.arange(n) / g) % 1.0)
        x2 = 2 * np.pi * ((np.arange(n) / (g * g)) % 1.0)
        s, c = np.sqrt(u), np.sqrt(1 - u)
        return np.stack([s * np.cos(x1), s * np.sin(x1), c * np.cos(x2), c * np.sin(x2)], axis=1)
    g = np.random.default_rng(20240611).standard_normal((n, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def complex_directions(n: int, d: int) -> np.ndarray:
    """``sphere_directions`` in R^{2d} packed as complex (n, d) unit vectors."""
    return np.ascontiguousarray(sphere_directions(n, 2 * d)).view(complex)


def coordinate_directions(d: int) -> np.ndarray:
    """The 4d real coordinate directions +-e_j, +-i e_j as complex (4d, d)."""
    eye = np.eye(d, dtype=complex)
    return np.concatenate([eye, -eye, 1j * eye, -1j * eye])


def probe_directions(n: int, d: int) -> np.ndarray:
    return np.concatenate([complex_directions(n, d), coordinate_directions(d)])


# ---------------------------------------------------------------------------
# membership and distances
# ---------------------------------------------------------------------------

def rho_many(domain: Domain, pts) -> np.ndarray:
    return kernels.rho_batch(domain, np.asarray(pts, dtype=complex))


def contains(domain: Domain, z) -> bool:
    z = as_point(z, domain.d)
    return bool(rho_many(domain, z[None, :])[0] < 0)


def contains_many(domain: Domain, pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=complex)
    if not np.all(np.isfinite(pts)):
        raise InputError("non-finite points")
    return rho_many(domain, pts) < 0


def _require_inside(domain, z):
    z = as_point(z, domain.d)
    if not contains(domain, z):
        raise DomainError(f"point {z} is not in the domain")
    return z


def _model_boundary_distance(domain, pts):
    kind, c, r = domain.model
    w = pts - c
    if kind == "ball":
        return r - np.linalg.norm(w, axis=-1)
    return np.min(r - np.abs(w), axis=-1)


def exit_distance(domain: Domain, z, u) -> float:
    """First exit distance from ``z`` along the real unit direction ``u``."""
    return float(kernels.exit_radii(domain, z[None, :], u[None, :], domain.tmax)[0])


def nearest_boundary_point(domain: Domain, z, n_dirs: int = 64, refine: bool = True):
    """``(delta, p)``: Euclidean boundary distance and a nearest boundary point.

    The minimum first-exit distance over ``n_dirs`` ray directions brackets
    delta from above; Nelder-Mead over the direction then refines it.
    Model kinds use closed forms.
    """
    z = _require_inside(domain, z)
    if domain.model is not None:
        kind, c, r = domain.model
        w = z - c
        if kind == "ball":
            nw = np.linalg.norm(w)
            u = w / nw if nw > 0 else np.eye(domain.d, dtype=complex)[0]
            delta = float(r - nw)
        else:
            gaps = r - np.abs(w)
            j = int(np.argmin(gaps))
            u = np.zeros(domain.d, dtype=complex)
            # phase via angle: w / |w| overflows for subnormal w
            u[j] = np.exp(1j * np.angle(w[j])) if w[j] != 0 else 1.0
            delta = float(gaps[j])
        return delta, z + delta * u
    dirs = probe_directions(n_dirs, domain.d)
    t = kernels.exit_radii(domain, np.broadcast_to(z, dirs.shape), dirs, domain.tmax)
    k = int(np.argmin(t))
    best_t, best_u = float(t[k]), dirs[k]
    if refine and best_t > 0:
        x0 = best_u.view(float).copy()

        def f(x):
            n = np.linalg.norm(x)
            if n == 0:
                return np.inf
            u = (x / n).view(complex)
            return exit_distance(domain, z, u)

        res = optimize.minimize(
            f, x0, method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-12 * best_t, "maxfev": 600,
                     "initial_simplex": _simplex(x0, 0.3)},
        )
        if res.fun < best_t:
            best_t = float(res.fun)
            best_u = (res.x / np.linalg.norm(res.x)).view(complex)
    return best_t, z + best_t * best_u


def _simplex(x0, size):
    m = x0.size
    pts = [x0]
    for j in range(m):
        y = x0.copy()
        y[j] += size
        pts.append(y)
    return np.array(pts)


def boundary_distance(domain: Domain, z, n_dirs: int = 64, refine: bool = True) -> float:
    """Euclidean distance from an interior point to the boundary."""
    return nearest_boundary_point(domain, z, n_dirs, refine)[0]


def boundary_distances(domain: Domain, pts, n_dirs: int = 64) -> np.ndarray:
    """Unrefined batch version of :func:`boundary_distance` (upper estimates)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    if domain.model is not None:
        return _model_boundary_distance(domain, pts)
    dirs = probe_directions(n_dirs, domain.d)
    n, m = pts.shape[0], dirs.shape[0]
    origins = np.repeat(pts, m, axis=0)
    t = kernels.exit_radii(domain, origins, np.tile(dirs, (n, 1)), domain.tmax)
    return t.reshape(n, m).min(axis=1)


def line_radii(domain: Domain, pts, dirs, n_phases: int = 64, refine_iters: int = 28,
               rtol: float = 1e-10) -> np.ndarray:
    """Vectorized :func:`line_radius` over ``(N, d)`` points and directions.

    Sampled phases are followed by a golden-section search around the best
    phase, so the result is the minimum over the circle up to the phase
    resolution of the search.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    dirs = np.atleast_2d(np.asarray(dirs, dtype=complex))
    pts, dirs = np.broadcast_arrays(pts, dirs)
    n = pts.shape[0]
    u = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    theta = 2 * np.pi * np.arange(n_phases) / n_phases
    rot = np.exp(1j * theta)
    rays = (u[:, None, :] * rot[None, :, None]).reshape(-1, domain.d)
    t = kernels.exit_radii(domain, np.repeat(pts, n_phases, axis=0), rays, domain.tmax, rtol=rtol)
    t = t.reshape(n, n_phases)
    k = np.argmin(t, axis=1)
    best = t[np.arange(n), k]
    if refine_iters <= 0:
        return best

    def radius_at(th):
        return kernels.exit_radii(domain, pts, u * np.exp(1j * th)[:, None], domain.tmax, rtol=rtol)

    h = 2 * np.pi / n_phases
    a, b = theta[k] - h, theta[k] + h
    gr = (math.sqrt(5) - 1) / 2
    c1, c2 = b - gr * (b - a), a + gr * (b - a)
    f1, f2 = radius_at(c1), radius_at(c2)
    for _ in range(refine_iters):
        left = f1 < f2
        b = np.where(left, c2, b)
        a = np.where(left, a, c1)
        c2n = np.where(left, c1, a + gr * (b - a))
        c1n = np.where(left, b - gr * (b - a), c2)
        f2n = np.where(left, f1, np.nan)
        f1n = np.where(left, np.nan, f2)
        new = np.where(left, c1n, c2n)
        fn = radius_at(new)
        f1 = np.where(left, fn, f1n)
        f2 = np.where(left, f2n, fn)
        c1, c2 = c1n, c2n
        best = np.minimum(best, fn)
    return best


def line_radius(domain: Domain, z, v, n_phases: int = 64, stab_tol: float = 1e-6,
                max_phases: int = 4096) -> float:
    """Largest r with ``{z + zeta v/|v| : |zeta| < r}`` inside the domain.

    Phase sampling doubles from ``n_phases`` until the sampled minimum
    moves by less than ``stab_tol`` (relative), then the best phase is
    polished by golden-section search.
    """
    z = _require_inside(domain, z)
    v = as_direction(v, domain.d)
    prev = line_radii(domain, z, v, n_phases, refine_iters=0)[0]
    p = n_phases
    while p < max_phases:
        p *= 2
        cur = line_radii(domain, z, v, p, refine_iters=0)[0]
        if abs(cur - prev) <= stab_tol * max(cur, 1e-300):
            prev = cur
            break
        prev = cur
    return float(min(prev, line_radii(domain, z, v, p, refine_iters=40)[0]))


# ---------------------------------------------------------------------------
# sampling and probes
# ---------------------------------------------------------------------------

def sample_ball(center, radius, n, rng):
    d = center.shape[0]
    g = rng.standard_normal((n, 2 * d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(n) ** (1.0 / (2 * d))
    return center + (g * r[:, None]).view(complex)


def sample_interior(domain: Domain, n: int, rng, within=None, max_rounds: int = 200) -> np.ndarray:
    """``n`` points uniform in the domain (intersected with ball ``within``)."""
    center, radius = (domain.center, domain.radius) if within is None else within
    center = as_point(center, domain.d)
    out = []
    have = 0
    for _ in range(max_rounds):
        cand = sample_ball(center, radius, max(4 * n, 64), rng)
        if within is not None:
            cand = cand[np.linalg.norm(cand - domain.center, axis=1) < domain.radius]
        if cand.size == 0:
            continue
        keep = cand[contains_many(domain, cand)]
        out.append(keep)
        have += keep.shape[0]
        if have >= n:
            break
    if have < n:
        raise SamplingError(f"found only {have} of {n} interior samples")
    return np.concatenate(out)[:n]


def convexity_probe(domain: Domain, samples: int = 10_000, seed: int = 0):
    """Midpoint test on random interior pairs.

    Returns ``(True, None)`` or ``(False, (z, w))`` with a pair whose
    midpoint leaves the domain.
    """
    if samples < 1:
        raise InputError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    z = sample_interior(domain, samples, rng)
    w = sample_interior(domain, samples, rng)
    bad = ~contains_many(domain, 0.5 * (z + w))
    if bad.any():
        k = int(np.argmax(bad))
        return False, (z[k], w[k])
    return True, None


def validate_domain(domain: Domain, samples: int = 4096, seed: int = 0, lipschitz: float | None = None):
    """Check the Domain invariants by sampling; raises ParameterError."""
    if not rho_many(domain, domain.base_point[None, :])[0] < 0:
        raise ParameterError("base point is not inside the domain")
    rng = np.random.default_rng(seed)
    pts = sample_ball(domain.center, 1.5 * domain.radius, samples, rng)
    vals = rho_many(domain, pts)
    inside = vals < 0
    far = np.linalg.norm(pts - domain.center, axis=1) >= domain.radius
    if np.any(inside & far):
        raise ParameterError("domain is not contained in its enclosing ball")
    if lipschitz is not None:
        nbr = pts + 1e-6 * domain.radius * complex_directions(samples, domain.d)
        jump = np.abs(rho_many(domain, nbr) - vals) / (1e-6 * domain.radius)
        # only the enclosing ball matters; far away rho may grow arbitrarily fast
        if np.any(jump[~far] > lipschitz):
            raise ParameterError("defining function jumps faster than the Lipschitz bound")


# ---------------------------------------------------------------------------
# built-in constructions
# ---------------------------------------------------------------------------

def _center(params, d):
    c = params.get("center")
    if c is None:
        return np.zeros(d, dtype=complex)
    return as_point(c, d)


def _make_ball(params, kind="ball"):
    d = int(params.get("d", 1 if kind == "disk" else 2))
    R = float(params.get("R", params.get("radius", 1.0)))
    if d < 1:
        raise ParameterError("d must be >= 1")
    if not R > 0:
        raise ParameterError("radius must be positive")
    c = _center(params, d)
    packed = np.concatenate([[R], c.view(float)])
    return Domain(
        kind=kind, params={"d": d, "R": R, "center": c.tolist()},
        rho=lambda z, c=c, R=R: pk.rho_ball(np.asarray(z, dtype=complex), c, R),
        center=c, radius=R, base_point=c.copy(), convex=True,
        kernel=(pk.KIND_BALL, np.ascontiguousarray(packed)),
        model=("ball", c, R),
    )


def _make_polydisk(params):
    d = int(params.get("d", len(params["radii"]) if "radii" in params else 2))
    radii = np.asarray(params.get("radii", [1.0] * d), dtype=float)
    if radii.shape != (d,) or not np.all(radii > 0):
        raise ParameterError("polydisk radii must be d positive numbers")
    c = _center(params, d)
    packed = np.concatenate([radii, c.view(float)])
    return Domain(
        kind="polydisk", params={"d": d, "radii": radii.tolist(), "center": c.tolist()},
        rho=lambda z, c=c, r=radii: pk.rho_polydisk(np.asarray(z, dtype=complex), c, r),
        center=c, radius=float(np.linalg.norm(radii)), base_point=c.copy(), convex=True,
        kernel=(pk.KIND_POLYDISK, np.ascontiguousarray(packed)),
        model=("polydisk", c, radii),
    )


def _axis_roots(g, lo, hi, n=4000):
    """All sign changes (- to +) of g on (lo, hi], refined by brentq."""
    ts = np.linspace(lo, hi, n + 1)[1:]
    vals = np.array([g(t) for t in ts])
    roots = []
    for k in range(len(ts) - 1):
        if vals[k] < 0 <= vals[k + 1]:
            roots.append(optimize.brentq(g, ts[k], ts[k + 1], xtol=1e-15, rtol=1e-15))
    return roots


def _sup_on_axis(h, eps):
    """max over s in [0, 3 eps] of h(s) (dense grid + bounded refinement)."""
    s = np.linspace(0.0, 3 * eps, 3001)
    vals = h(s)
    k = int(np.argmax(vals))
    a, b = s[max(k - 1, 0)], s[min(k + 1, len(s) - 1)]
    res = optimize.minimize_scalar(lambda x: -float(h(np.array([x]))[0]), bounds=(a, b),
                                   method="bounded", options={"xatol": 1e-14})
    return max(float(vals[k]), -float(res.fun))


def _finish_example(kind, params, rho, R, kernel, constants):
    def on_axis(t):
        return float(rho(np.array([[0.0, 1j * t]]))[0])

    roots = _axis_roots(on_axis, 1e-9, 2 * R)
    if not roots:
        raise ParameterError(f"{kind}: no boundary crossing on the imaginary z2-axis")
    c = roots[0]
    constants = dict(constants, axis_roots=roots, p0=[0j, 1j * c])
    base = np.array([0.0, 0.5j * c])
    dom = Domain(
        kind=kind, params=params, rho=rho, center=np.zeros(2, dtype=complex),
        radius=R, base_point=base, convex=True, kernel=kernel, constants=constants,
    )
    if not on_axis(0.5 * c) < 0:
        raise ParameterError(f"{kind}: base point not interior")
    return dom


def _make_example51(params):
    eps = float(params.get("eps", 0.4))
    n = params.get("n", 8)
    if not (0 < eps < EX51_EPS_MAX):
        raise ParameterError(f"example51 needs 0 < eps < 1/sqrt(6) = {EX51_EPS_MAX:.6f}")
    if int(n) != n or n < 3:
        raise ParameterError("example51 needs an integer n >= 3")
    n = int(n)
    c0 = _sup_on_axis(lambda s: s * pk.cutoff(s, 2 * eps, 3 * eps), eps)
    c1 = (1.25 * eps * eps) ** n
    C = c0 / c1

    def rho(z):
        return pk.rho_example51(z, eps, n, C)

    R = 1.5 * eps + ENCLOSING_MARGIN
    kernel = (pk.KIND_EXAMPLE51, np.array([eps, float(n), C]))
    return _finish_example("example51", {"eps": eps, "n": n}, rho, R, kernel,
                           {"c0": c0, "c1": c1, "C": C})


def _make_example52(params):
    eps = float(params.get("eps", 0.35))
    delta = float(params.get("delta", 0.7))
    if not (0 < eps < EX52_EPS_MAX):
        raise ParameterError(f"example52 needs 0 < eps < 1/(2 sqrt 2) = {EX52_EPS_MAX:.6f}")
    if not (0 < delta <= 2 * eps):
        # the domain must sit inside B(0, 2 eps), where Phi = Phi_0
        raise ParameterError("example52 needs 0 < delta <= 2 eps")
    c0 = _sup_on_axis(
        lambda s: (s - pk._flat_exp(s * s)) * pk.cutoff(s, 2 * eps, 3 * eps), eps)
    gap = (eps + delta / 2) ** 2 - eps ** 2
    c1 = math.exp(-1.0 / gap)
    logC = math.log(c0) + 1.0 / gap

    def rho(z):
        return pk.rho_example52(z, eps, logC)

    R = eps + delta / 2 + ENCLOSING_MARGIN
    kernel = (pk.KIND_EXAMPLE52, np.array([eps, logC]))
    return _finish_example("example52", {"eps": eps, "delta": delta}, rho, R, kernel,
                           {"c0": c0, "c1": c1, "logC": logC})


def _make_custom(params):
    try:
        text = params["expr"]
        d = int(params["d"])
        R = float(params["enclosing_radius"])
    except KeyError as exc:
        raise ParameterError(f"custom domain needs {exc.args[0]!r}") from None
    if not R > 0:
        raise ParameterError("enclosing_radius must be positive")
    rho = compile_expression(text, d)
    c = as_point(params.get("enclosing_center", [0.0] * d), d)
    base = as_point(params.get("base_point", c), d)
    dom = Domain(
        kind="custom",
        params={"expr": text, "d": d, "enclosing_radius": R,
                "enclosing_center": c.tolist(), "base_point": base.tolist(),
                "convex": bool(params.get("convex", False))},
        rho=rho, center=c, radius=R, base_point=base,
        convex=bool(params.get("convex", False)),
    )
    if not rho(base[None, :])[0] < 0:
        raise ParameterError("custom domain: base point not inside {rho < 0}")
    return dom


def _make_graph(params):
    from .visibility import GraphMap

    gmap = GraphMap.from_spec(params.get("f", [{"poly": [0.0]}]))
    gmap.validate()
    poly = _make_polydisk({"d": 1 + gmap.n_components})
    return Domain(
        kind="graph", params={"f": gmap.spec()}, rho=poly.rho, center=poly.center,
        radius=poly.radius, base_point=poly.base_point, convex=True,
        kernel=poly.kernel, model=poly.model, graph_map=gmap,
    )


_BUILDERS = {
    "ball": _make_ball,
    "disk": lambda p: _make_ball(dict(p, d=1), kind="disk"),
    "polydisk": _make_polydisk,
    "bidisk": lambda p: _make_polydisk(dict(p, d=2)),
    "example51": _make_example51,
    "example52": _make_example52,
    "custom": _make_custom,
    "graph": _make_graph,
    "graph-subspace": _make_graph,
    "custom-sublevel": _make_custom,
}


def make_builtin(kind: str, params: dict | None = None) -> Domain:
    """Build a domain from a kind tag and its parameters."""
    params = dict(params or {})
    try:
        build = _BUILDERS[kind]
    except KeyError:
        raise ParameterError(f"unknown domain kind {kind!r}") from None
    try:
        return build(params)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ParameterError, InputError)):
            raise
        raise ParameterError(f"bad parameters for {kind}: {exc}") from None


def domain_from_spec(spec) -> Domain:
    """Domain from a JSON string, a dict ``{"kind", "params"}`` or a bare kind name."""
    if isinstance(spec, Domain):
        return spec
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            try:
                spec = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InputError(f"domain JSON does not parse: {exc}") from None
        else:
            return make_builtin(text, {})
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError("domain spec must be an object with a 'kind' field")
    return make_builtin(spec["kind"], spec.get("params", {}))


def model_line_radius(domain: Domain, z, v) -> float:
    """Closed-form line radius for ball/polydisk kinds (test oracle)."""
    kind, c, r = domain.model
    if kind == "ball":
        return float(r * models.ball_line_radius((z - c) / r, v))
    return float(np.min(_poly_line_radius(z - c, v, r)))


def _poly_line_radius(w, v, radii):
    u = np.abs(v) / np.linalg.norm(v)
    with np.errstate(divide="ignore"):
        return np.where(u > 0, (radii - np.abs(w)) / np.where(u > 0, u, 1.0), np.inf)
