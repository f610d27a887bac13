"""Visibility probes: Gromov products, boundary divergence, depth of geodesics.

Verdicts are evidence labels.  A probe can exhibit a family of certified
almost-geodesics whose depth tends to zero (failure of visibility along
that family), or accumulate trials whose depth stays above a threshold.

Schedules produce interior sequences ``x_n -> p`` and ``y_n -> q``.  The
default ``radial`` schedule approaches each boundary point along the ray
towards the base point with offsets ``2**-n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import Domain, as_point, boundary_distances, contains_many
from .errors import GapNotClosed, InputError, InvalidSubspaceError, ScheduleError
from .paths import (
    PathBudget, SampledPath, almost_geodesic_between, distance_lower_bound,
    estimate_distance, exact_model_geodesic, model_distance, verify_almost_geodesic,
)

SUP_SAMPLES = 4096
SUP_TOL = 1e-12


# ---------------------------------------------------------------------------
# distance sources
# ---------------------------------------------------------------------------

class DistanceSource:
    """Interval-valued distances ``(lower, upper)`` with symmetric caching."""

    def __init__(self, domain: Domain, budget: PathBudget | None = None, mode: str = "auto"):
        if mode == "auto":
            mode = "exact" if domain.model is not None else "estimate"
        if mode == "exact" and domain.model is None:
            raise InputError("exact distances need a ball or polydisk domain")
        if mode not in ("exact", "estimate", "lower"):
            raise InputError(f"unknown distance mode {mode!r}")
        self.domain, self.budget, self.mode = domain, budget, mode
        self._cache = {}

    def __call__(self, a, b):
        a = as_point(a, self.domain.d)
        b = as_point(b, self.domain.d)
        ka, kb = a.tobytes(), b.tobytes()
        if kb < ka:
            a, b, ka, kb = b, a, kb, ka
        key = ka + kb
        if key not in self._cache:
            if self.mode == "exact":
                v = float(model_distance(self.domain, a, b))
                self._cache[key] = (v, v)
            elif self.mode == "lower":
                v = distance_lower_bound(self.domain, a, b)[0]
                self._cache[key] = (v, math.inf)
            else:
                est = estimate_distance(self.domain, a, b, self.budget)
                self._cache[key] = (est.lower, est.upper)
        return self._cache[key]


def gromov_product(source, o, x, y):
    """Interval for ``(x|y)_o = (k(o,x) + k(o,y) - k(x,y)) / 2``, clamped at 0."""
    ox, oy, xy = source(o, x), source(o, y), source(x, y)
    lo = 0.5 * ((ox[0] + oy[0]) - xy[1])
    hi = 0.5 * ((ox[1] + oy[1]) - xy[0])
    return max(lo, 0.0), max(hi, 0.0)


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    """Explicit list of interior pairs ``(x_n, y_n)`` with labels ``n``."""

    pairs: tuple
    labels: tuple
    name: str = "explicit"

    def __len__(self):
        return len(self.pairs)


def radial_schedule(domain: Domain, p, q, n_max: int = 20, n_min: int = 1,
                    drift: float = 0.0) -> Schedule:
    """``x_n = p + 2**-n u_p (+ drift 2**(-n/2) tau_p)``, same for q.

    ``u_p`` is the unit vector from p towards the base point and ``tau_p``
    the complex-orthogonal direction (``i u_p`` when d = 1).
    """
    p = as_point(p, domain.d)
    q = as_point(q, domain.d)
    pairs = []
    for n in range(n_min, n_max + 1):
        s = 2.0 ** -n
        pairs.append((_approach(domain, p, s, drift), _approach(domain, q, s, drift)))
    return Schedule(tuple(pairs), tuple(range(n_min, n_max + 1)),
                    "radial" if drift == 0 else "radial-drift")


def _approach(domain, p, s, drift):
    u = domain.base_point - p
    u = u / np.linalg.norm(u)
    x = p + s * u
    if drift:
        if domain.d == 1:
            tau = 1j * u
        else:
            e = np.zeros(domain.d, dtype=complex)
            e[int(np.argmin(np.abs(u)))] = 1.0
            tau = e - np.vdot(u, e) * u
            tau /= np.linalg.norm(tau)
        x = x + drift * math.sqrt(s) * tau
    return x


def polydisk_adversarial_schedule(n_max: int = 20, n_min: int = 1) -> Schedule:
    """Bidisk pairs ``(r_n, s_n), (-r_n, s_n)`` with ``s_n = 1 - 2**-n`` and
    ``artanh s_n = 2 artanh r_n``, so ``(x|y)_0 = artanh r_n`` exactly."""
    pairs = []
    for n in range(n_min, n_max + 1):
        s = 1.0 - 2.0 ** -n
        r = math.tanh(0.5 * math.atanh(s))
        pairs.append((np.array([r, s], dtype=complex), np.array([-r, s], dtype=complex)))
    return Schedule(tuple(pairs), tuple(range(n_min, n_max + 1)), "polydisk-adversarial")


def polydisk_flat_schedule(n_max: int = 20, n_min: int = 1) -> Schedule:
    """Bidisk pairs ``(r_n, r_n), (-r_n, r_n)`` with ``r_n = 1 - 2**-n``."""
    pairs = []
    for n in range(n_min, n_max + 1):
        r = 1.0 - 2.0 ** -n
        pairs.append((np.array([r, r], dtype=complex), np.array([-r, r], dtype=complex)))
    return Schedule(tuple(pairs), tuple(range(n_min, n_max + 1)), "polydisk-flat")


def make_schedule(domain: Domain, p, q, kind: str = "radial", n_max: int = 20,
                  n_min: int = 1, drift: float = 0.0) -> Schedule:
    if kind in ("radial", "normal"):
        return radial_schedule(domain, p, q, n_max, n_min, drift)
    if kind == "adversarial":
        return polydisk_adversarial_schedule(n_max, n_min)
    if kind == "flat":
        return polydisk_flat_schedule(n_max, n_min)
    raise InputError(f"unknown schedule {kind!r}")


def _check_schedule(domain, schedule):
    for n, (x, y) in zip(schedule.labels, schedule.pairs):
        if not contains_many(domain, np.stack([x, y])).all():
            raise ScheduleError(f"schedule point {n} is outside the domain")


def _check_boundary_pair(domain, p, q):
    p = as_point(p, domain.d)
    q = as_point(q, domain.d)
    if np.allclose(p, q):
        raise InputError("boundary points must be distinct")
    for name, b in (("p", p), ("q", q)):
        if not _near_boundary(domain, b):
            raise InputError(f"{name} is not a boundary point")
    return p, q


def _near_boundary(domain, b, rtol=1e-6):
    # one short step towards the base point lands inside, one away from it outside
    u = domain.base_point - b
    nu = np.linalg.norm(u)
    if nu == 0:
        return False
    s = rtol * domain.radius * u / nu
    inside = contains_many(domain, np.stack([b + s, b - s]))
    return bool(inside[0] and not inside[1])


# ---------------------------------------------------------------------------
# trend classification
# ---------------------------------------------------------------------------

def classify_trend(values, bounded_tol: float = 1e-3, min_slope: float = 0.05) -> str:
    """``diverging``, ``bounded`` or ``inconclusive`` from the last third.

    Diverging: every value in the last third exceeds all earlier values and
    the mean increment there is at least ``min_slope``.  Bounded: the last
    third varies by at most ``bounded_tol``.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return "inconclusive"
    k = max(2, v.size // 3)
    tail = v[-k:]
    start = v.size - k
    new_max = all(v[i] > np.max(v[:i]) for i in range(start, v.size))
    slope = float(np.mean(np.diff(v[start - 1:])))
    if new_max and slope >= min_slope:
        return "diverging"
    if np.ptp(tail) <= bounded_tol:
        return "bounded"
    return "inconclusive"


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------

@dataclass
class GromovProbeReport:
    o: np.ndarray
    p: np.ndarray
    q: np.ndarray
    schedule: str
    labels: list
    pairs: list = field(repr=False)
    values: list
    widths: list
    caps: list
    trend: str

    def as_dict(self):
        return {
            "o": self.o, "p": self.p, "q": self.q, "schedule": self.schedule,
            "trend": self.trend,
            "sequence": [
                {"n": n, "x": x, "y": y, "product_lower": v[0], "product_upper": v[1],
                 "width": w, "cap": c}
                for n, (x, y), v, w, c in zip(self.labels, self.pairs, self.values,
                                              self.widths, self.caps)
            ],
        }


def gromov_limsup_probe(domain: Domain, o, p, q, schedule: Schedule | None = None,
                        source: DistanceSource | None = None, bounded_tol: float = 1e-3,
                        min_slope: float = 0.05) -> GromovProbeReport:
    """Gromov products along a schedule approaching ``(p, q)``."""
    o = as_point(o, domain.d)
    p, q = _check_boundary_pair(domain, p, q)
    schedule = schedule or radial_schedule(domain, p, q)
    _check_schedule(domain, schedule)
    source = source or DistanceSource(domain)
    values, widths, caps = [], [], []
    for x, y in schedule.pairs:
        lo, hi = gromov_product(source, o, x, y)
        values.append((lo, hi))
        widths.append(hi - lo)
        caps.append(min(source(o, x)[1], source(o, y)[1]))
    trend = classify_trend([v[0] for v in values], bounded_tol, min_slope)
    if trend == "bounded" and classify_trend([v[1] for v in values], bounded_tol) != "bounded":
        trend = "inconclusive"
    return GromovProbeReport(o, p, q, schedule.name, list(schedule.labels),
                             list(schedule.pairs), values, widths, caps, trend)


@dataclass
class DivergenceReport:
    p: np.ndarray
    q: np.ndarray
    schedule: str
    labels: list
    lower_bounds: list
    verdict: str

    def as_dict(self):
        return {"p": self.p, "q": self.q, "schedule": self.schedule, "verdict": self.verdict,
                "sequence": [{"n": n, "distance_lower": v}
                             for n, v in zip(self.labels, self.lower_bounds)]}


def boundary_pair_divergence_probe(domain: Domain, p, q, schedule: Schedule | None = None,
                                   min_slope: float = 0.05) -> DivergenceReport:
    """Distance lower bounds between ``x_n`` and ``y_n``; diverging when they
    increase throughout with increments bounded away from zero."""
    p, q = _check_boundary_pair(domain, p, q)
    schedule = schedule or radial_schedule(domain, p, q)
    _check_schedule(domain, schedule)
    lows = [distance_lower_bound(domain, x, y)[0] for x, y in schedule.pairs]
    inc = np.diff(lows)
    k = max(1, len(inc) // 3)
    if inc.size and np.all(inc > 0) and np.mean(inc[-k:]) >= min_slope:
        verdict = "diverging"
    elif inc.size and np.ptp(lows[-k - 1:]) <= 1e-3:
        verdict = "bounded"
    else:
        verdict = "inconclusive"
    return DivergenceReport(p, q, schedule.name, list(schedule.labels), lows, verdict)


@dataclass
class Trial:
    label: int
    x: np.ndarray
    y: np.ndarray
    status: str
    max_depth: float = float("nan")
    deepest_point: np.ndarray | None = None
    certificate: dict | None = None
    gap: float | None = None


@dataclass
class VisibilityReport:
    p: np.ndarray
    q: np.ndarray
    neighborhood_radii: list
    trials: list
    verdict: str
    compact_threshold: float
    family: str
    failures: int

    def depths(self):
        return [t.max_depth for t in self.trials if t.status == "ok"]

    def as_dict(self):
        return {
            "p": self.p, "q": self.q, "verdict": self.verdict, "family": self.family,
            "compact_threshold": self.compact_threshold, "failures": self.failures,
            "neighborhood_radii": self.neighborhood_radii,
            "trials": [
                {"n": t.label, "x": t.x, "y": t.y, "status": t.status,
                 "max_interior_depth": t.max_depth, "deepest_point": t.deepest_point,
                 "certificate": t.certificate, "gap": t.gap}
                for t in self.trials
            ],
        }


def _depths(domain, pts):
    return boundary_distances(domain, pts)


def visibility_probe(domain: Domain, p, q, kappa: float = 0.05,
                     schedule: Schedule | None = None, family: str = "auto",
                     budget: PathBudget | None = None,
                     compact_threshold: float | None = None) -> VisibilityReport:
    """Depth of (1, kappa)-almost-geodesics joining points near p and q.

    ``family="exact"`` uses closed-form geodesics (ball/polydisk kinds),
    ``"certified"`` builds almost-geodesics numerically; ``"auto"`` picks
    exact when available.
    """
    if not kappa > 0:
        raise InputError("kappa must be positive")
    p, q = _check_boundary_pair(domain, p, q)
    schedule = schedule or radial_schedule(domain, p, q, n_max=12)
    _check_schedule(domain, schedule)
    if family == "auto":
        family = "exact" if domain.model is not None else "certified"
    if compact_threshold is None:
        compact_threshold = 0.5 * float(_depths(domain, domain.base_point[None, :])[0])
    trials, failures = [], 0
    for n, (x, y) in zip(schedule.labels, schedule.pairs):
        if family == "exact":
            path = exact_model_geodesic(domain, x, y)
            cert = None
        else:
            try:
                path, c = almost_geodesic_between(domain, x, y, kappa, budget)
                cert = c.as_dict()
            except GapNotClosed as exc:
                failures += 1
                trials.append(Trial(n, x, y, "gap-not-closed", gap=exc.gap))
                continue
        dep = _depths(domain, path.points)
        k = int(np.argmax(dep))
        trials.append(Trial(n, x, y, "ok", float(dep[k]), path.points[k], cert))
    radii = [float(max(np.linalg.norm(t.x - p), np.linalg.norm(t.y - q))) for t in trials]
    depths = [t.max_depth for t in trials if t.status == "ok"]
    verdict = _visibility_verdict(depths, compact_threshold)
    return VisibilityReport(p, q, radii, trials, verdict, compact_threshold, family, failures)


def _visibility_verdict(depths, threshold):
    if not depths:
        return "inconclusive"
    d = np.asarray(depths)
    if np.all(d >= threshold):
        return "visible-evidence"
    k = max(2, d.size // 3)
    if (d.size >= 3 and np.all(np.diff(d) <= 0) and np.all(np.diff(d[-k:]) < 0)
            and d[-1] < 0.1 * threshold):
        return "failure-evidence"
    return "inconclusive"


# ---------------------------------------------------------------------------
# graph subspaces of the polydisk
# ---------------------------------------------------------------------------

class GraphMap:
    """Holomorphic ``f : D -> D^(n-1)`` with polynomial or Blaschke components.

    Component specs: ``{"poly": [c0, c1, ...]}`` (coefficients in increasing
    degree) or ``{"blaschke": {"zeros": [...], "phase": theta}}``.
    """

    def __init__(self, components):
        if not components:
            raise InvalidSubspaceError("graph map needs at least one component")
        self.components = components

    @classmethod
    def from_spec(cls, spec):
        if isinstance(spec, dict):
            spec = [spec]
        comps = []
        for c in spec:
            if "poly" in c:
                coef = np.array([_cplx(a) for a in c["poly"]], dtype=complex)
                if coef.size == 0:
                    raise InvalidSubspaceError("empty polynomial")
                comps.append(("poly", coef))
            elif "blaschke" in c:
                b = c["blaschke"]
                zeros = np.array([_cplx(a) for a in b.get("zeros", [])], dtype=complex)
                comps.append(("blaschke", (zeros, float(b.get("phase", 0.0)))))
            else:
                raise InvalidSubspaceError(f"unknown component spec {c!r}")
        return cls(comps)

    @property
    def n_components(self):
        return len(self.components)

    def spec(self):
        out = []
        for kind, data in self.components:
            if kind == "poly":
                out.append({"poly": [[a.real, a.imag] for a in data]})
            else:
                zeros, phase = data
                out.append({"blaschke": {"zeros": [[a.real, a.imag] for a in zeros],
                                         "phase": phase}})
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        cols = []
        for kind, data in self.components:
            if kind == "poly":
                cols.append(np.polyval(data[::-1], z))
            else:
                zeros, phase = data
                val = np.exp(1j * phase) * np.ones_like(z)
                for a in zeros:
                    val = val * (z - a) / (1 - np.conj(a) * z)
                cols.append(val)
        return np.stack(cols, axis=-1)

    def validate(self):
        """Raise unless every component maps the disk into the disk."""
        circle = np.exp(2j * np.pi * np.arange(SUP_SAMPLES) / SUP_SAMPLES)
        for j, (kind, data) in enumerate(self.components):
            if kind == "blaschke":
                if np.any(np.abs(data[0]) >= 1):
                    raise InvalidSubspaceError(f"component {j}: Blaschke zeros must lie in the disk")
                continue
            if data.size == 1 or not np.any(data[1:]):
                if abs(data[0]) >= 1:
                    raise InvalidSubspaceError(f"component {j}: constant of modulus >= 1")
                continue
            sup = float(np.max(np.abs(np.polyval(data[::-1], circle))))
            if sup > 1 + SUP_TOL:
                raise InvalidSubspaceError(f"component {j}: sampled sup-norm {sup:.6g} > 1")
        return True


def _cplx(a):
    if isinstance(a, (list, tuple)):
        return complex(float(a[0]), float(a[1]))
    if isinstance(a, str):
        return complex(a.replace(" ", ""))
    return complex(a)


def graph_subspace_geodesic(f, z, w, n: int = 257, kappa: float = 1e-6):
    """Lift of the disk geodesic from z to w to the graph of ``f``.

    Returns the path in the polydisk and its (1, kappa) certificate
    computed with exact polydisk distances.
    """
    from .domain import make_builtin

    gmap = f if isinstance(f, GraphMap) else GraphMap.from_spec(f)
    gmap.validate()
    z = complex(as_point(z, 1)[0])
    w = complex(as_point(w, 1)[0])
    if abs(z) >= 1 or abs(w) >= 1:
        raise InputError("graph endpoints must lie in the unit disk")
    if z == w:
        raise InputError("graph geodesic needs distinct endpoints")
    base = exact_model_geodesic("disk", [z], [w], n)
    s1 = base.points[:, 0]
    pts = np.concatenate([s1[:, None], gmap(s1)], axis=1)
    dom = make_builtin("graph", {"f": gmap.spec()})
    path = SampledPath(base.grid, pts, dom)
    return path, verify_almost_geodesic(dom, path, 1.0, kappa)
