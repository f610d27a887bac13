"""Numerical checks of the Goldilocks and extended-visibility conditions,
and of the quantitative claims about the two flat-boundary examples.

Condition 1 of the Goldilocks definition asks that
``int_0^eps M(r)/r dr`` be finite; condition 2 that
``k(z0, z) <= C + alpha log(1/delta(z))``.  Divergence of the integral is
detected by trend: the lower-variant partials must grow by at least
``div_increment`` per decade of ``r_min`` over ``div_decades`` consecutive
decades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    Domain, as_point, convexity_probe, line_radius, make_builtin, nearest_boundary_point,
)
from .errors import InputError, LocalizerError, NumericalError, SamplingError
from .metric import estimate_M_shell, metric_bounds, shell_points
from .paths import PathBudget, distance_lower_bound, estimate_distance

FIT_BUDGET = PathBudget(levels=(4, 8), maxiter=60)
GENERIC_FIT_BUDGET = PathBudget(levels=(4,), maxiter=30)


def log_grid(r_max: float, r_min: float, per_decade: int) -> np.ndarray:
    """Decreasing grid from r_max to r_min with ``per_decade`` steps per decade."""
    n = int(round(math.log10(r_max / r_min) * per_decade))
    return np.geomspace(r_max, r_min, max(n, 1) + 1)


def _partials(r, g):
    """Cumulative trapezoid of ``g`` in ``log r`` from r[0] down to r[i]."""
    r = np.asarray(r, dtype=float)
    g = np.asarray(g, dtype=float)
    steps = 0.5 * (g[1:] + g[:-1]) * np.log(r[:-1] / r[1:])
    return np.concatenate([[0.0], np.cumsum(steps)])


def _decade_increments(r, partial):
    """Increments of the partial integral over each decade below r[0]."""
    lr = np.log10(r)
    k = int(math.floor(lr[0] - lr[-1] + 1e-9))
    marks = lr[0] - np.arange(k + 1)
    vals = np.interp(-marks, -lr, partial)
    return np.diff(vals)


def _divergence_verdict(inc_lower, inc_upper, div_increment, div_decades, conv_tol):
    if inc_lower.size >= div_decades and np.all(inc_lower[-div_decades:] >= div_increment):
        return "divergent"
    if inc_upper.size and np.isfinite(inc_upper[-1]) and inc_upper[-1] <= conv_tol:
        return "convergent"
    return "inconclusive"


@dataclass
class GoldilocksReport:
    eps0: float
    r_grid: np.ndarray
    M_lower: np.ndarray
    M_upper: np.ndarray
    sample_counts: list
    partial_lower: np.ndarray
    partial_upper: np.ndarray
    decade_increments: list
    fit: dict
    verdict_cond1: str
    verdict_cond2: str
    flags: list = field(default_factory=list)

    def as_dict(self):
        return {
            "eps0": self.eps0, "verdict_cond1": self.verdict_cond1,
            "verdict_cond2": self.verdict_cond2, "log_bound_fit": self.fit,
            "decade_increments_lower": self.decade_increments, "flags": self.flags,
            "table": [
                {"r": r, "M_lower": a, "M_upper": b, "samples": n,
                 "partial_lower": pl, "partial_upper": pu}
                for r, a, b, n, pl, pu in zip(self.r_grid, self.M_lower, self.M_upper,
                                              self.sample_counts, self.partial_lower,
                                              self.partial_upper)
            ],
        }


def _shells(domain, r_grid, localizer, n_points, n_dirs, seed, flags):
    lo, up, counts = [], [], []
    for i, r in enumerate(r_grid):
        try:
            m = estimate_M_shell(domain, float(r), localizer, n_points, n_dirs, seed + i)
            lo.append(m.M_lower)
            up.append(m.M_upper)
            counts.append(m.sample_count)
        except SamplingError as exc:
            flags.append(f"r={r:.3g}: {exc}")
            lo.append(np.nan)
            up.append(np.nan)
            counts.append(0)
    return np.array(lo), np.array(up), counts


def _fit_samples(domain, levels, per_level, seed, localizer=None):
    pts, dists = [], []
    for i, r in enumerate(levels):
        p, dd = shell_points(domain, float(r), per_level, seed + 1000 + i, localizer,
                             axis_rays=False)
        pts.extend(p)
        dists.extend(dd)
    return np.array(pts), np.array(dists)


def log_bound_fit(domain: Domain, levels, per_level: int = 2, seed: int = 0,
                  budget: PathBudget | None = None):
    """Least-squares ``k+(z0, z) ~ C + alpha log(1/delta(z))`` on shell samples."""
    if budget is None:
        budget = FIT_BUDGET if domain.model is not None else GENERIC_FIT_BUDGET
    pts, dists = _fit_samples(domain, levels, per_level, seed)
    if pts.shape[0] < 4:
        return {"C": None, "alpha": None, "n": int(pts.shape[0])}, "inconclusive"
    x = np.log(1.0 / dists)
    k = np.array([estimate_distance(domain, domain.base_point, z, budget).upper for z in pts])
    A = np.stack([np.ones_like(x), x], axis=1)
    (C, alpha), *_ = np.linalg.lstsq(A, k, rcond=None)
    resid = k - (C + alpha * x)
    # slope over the most boundary-proximal half
    order = np.argsort(x)
    tail = order[len(order) // 2:]
    if np.ptp(x[tail]) > 0:
        alpha_tail = float(np.polyfit(x[tail], k[tail], 1)[0])
    else:
        alpha_tail = float(alpha)
    fit = {"C": float(C), "alpha": float(alpha), "alpha_tail": alpha_tail,
           "residual_rms": float(np.sqrt(np.mean(resid ** 2))),
           "residual_max": float(np.max(np.abs(resid))), "n": int(len(k))}
    if alpha >= 0 and alpha_tail <= 1.5 * alpha + 0.1:
        verdict = "holds"
    elif alpha_tail > 2 * alpha + 0.5:
        verdict = "violated"
    else:
        verdict = "inconclusive"
    return fit, verdict


def goldilocks_check(domain: Domain, eps0: float | None = None, r_grid=None,
                     r_min: float = 1e-6, per_decade: int = 4, n_points: int = 48,
                     n_dirs: int = 24, seed: int = 0, fit_levels: int = 6,
                     fit_per_level: int = 2, budget: PathBudget | None = None,
                     div_increment: float = 0.5, div_decades: int = 3,
                     conv_tol: float = 0.05, fit: bool = True) -> GoldilocksReport:
    """Estimate M on a log grid, integrate, and fit the log growth bound."""
    if eps0 is None:
        eps0 = 0.1 * domain.radius
    if not (0 < eps0 < domain.radius):
        raise InputError("eps0 must lie in (0, enclosing radius)")
    if r_grid is None:
        r_grid = log_grid(eps0, r_min, per_decade)
    else:
        r_grid = np.sort(np.asarray(r_grid, dtype=float))[::-1]
        if r_grid[-1] <= 0 or r_grid[0] > eps0:
            raise InputError("r_grid must lie in (0, eps0]")
        if r_grid[0] < eps0:
            r_grid = np.concatenate([[eps0], r_grid])
    flags = []
    lo, up, counts = _shells(domain, r_grid, None, n_points, n_dirs, seed, flags)
    ok = np.isfinite(lo)
    pl = np.full(len(r_grid), np.nan)
    pu = np.full(len(r_grid), np.nan)
    if ok.all():
        pl = _partials(r_grid, lo)
        pu = _partials(r_grid, up)
        inc_l = _decade_increments(r_grid, pl)
        inc_u = _decade_increments(r_grid, pu)
        v1 = _divergence_verdict(inc_l, inc_u, div_increment, div_decades, conv_tol)
    else:
        inc_l = np.array([])
        v1 = "inconclusive"
    if fit:
        levels = r_grid[np.unique(np.linspace(0, len(r_grid) - 1, fit_levels).astype(int))]
        try:
            fit_res, v2 = log_bound_fit(domain, levels, fit_per_level, seed, budget)
        except NumericalError as exc:
            flags.append(f"fit: {exc}")
            fit_res, v2 = {}, "inconclusive"
    else:
        fit_res, v2 = {}, "inconclusive"
    return GoldilocksReport(float(eps0), r_grid, lo, up, counts, pl, pu,
                            [float(v) for v in inc_l], fit_res, v1, v2, flags)


# ---------------------------------------------------------------------------
# extended visibility conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFunction:
    """``A + alpha log x`` (form ``log``) or ``A + alpha x**beta`` (form ``power``)."""

    form: str = "log"
    A: float = 1.0
    alpha: float = 0.5
    beta: float = 1.0

    def __post_init__(self):
        if self.form not in ("log", "power"):
            raise InputError(f"unknown growth form {self.form!r}")
        if not self.alpha > 0 or (self.form == "power" and not self.beta > 0):
            raise InputError("growth function must be strictly increasing")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.form == "log":
            return self.A + self.alpha * np.log(x)
        return self.A + self.alpha * x ** self.beta

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.form == "log":
            return self.alpha / x
        return self.alpha * self.beta * x ** (self.beta - 1)


@dataclass
class EvlReport:
    localizer: tuple
    f: GrowthFunction
    cond1_margin: float
    cond1_samples: list
    r_grid: np.ndarray
    M_upper: np.ndarray
    M_lower: np.ndarray
    cond3_partial: np.ndarray
    verdict_cond1: str
    verdict_cond2: str
    verdict_cond3: str
    flags: list = field(default_factory=list)

    def as_dict(self):
        return {
            "localizer": {"center": self.localizer[0], "radius": self.localizer[1]},
            "f": {"form": self.f.form, "A": self.f.A, "alpha": self.f.alpha, "beta": self.f.beta},
            "cond1_margin": self.cond1_margin, "verdict_cond1": self.verdict_cond1,
            "verdict_cond2": self.verdict_cond2, "verdict_cond3": self.verdict_cond3,
            "cond1_samples": self.cond1_samples, "flags": self.flags,
            "table": [{"r": r, "M_lower": a, "M_upper": b, "cond3_partial": c}
                      for r, a, b, c in zip(self.r_grid, self.M_lower, self.M_upper,
                                            self.cond3_partial)],
        }


def evl_check(domain: Domain, U, f: GrowthFunction | None = None, r0: float | None = None,
              r_min: float = 1e-6, per_decade: int = 2, n_points: int = 48, n_dirs: int = 24,
              seed: int = 0, cond1_levels: int = 4, cond1_per_level: int = 2,
              budget: PathBudget | None = None, conv_tol: float = 0.05) -> EvlReport:
    """Check the three growth conditions of the extended visibility lemma on U."""
    f = f or GrowthFunction()
    c = as_point(U[0], domain.d)
    rad = float(U[1])
    if not rad > 0:
        raise InputError("localizer radius must be positive")
    U = (c, rad)
    if r0 is None:
        r0 = min(0.5 * rad, 0.1 * domain.radius)
    if not (r_min < r0 < domain.radius):
        raise InputError("need r_min < r0 < enclosing radius")
    if budget is None:
        budget = FIT_BUDGET if domain.model is not None else GENERIC_FIT_BUDGET
    flags = []
    r_grid = log_grid(r0, r_min, per_decade)

    # condition 1 on boundary-proximal samples in U
    levels = r_grid[np.unique(np.linspace(0, len(r_grid) - 1, cond1_levels).astype(int))]
    try:
        pts, dhat = _fit_samples(domain, levels, cond1_per_level, seed, U)
    except SamplingError as exc:
        raise LocalizerError(f"no interior points found in the localizer: {exc}") from None
    if pts.shape[0] == 0:
        raise LocalizerError("localizer does not reach the boundary shells")
    samples, margin, holds = [], -math.inf, True
    for z, dh in zip(pts, dhat):
        dref = nearest_boundary_point(domain, z)[0]
        kl = distance_lower_bound(domain, domain.base_point, z)[0]
        ku = estimate_distance(domain, domain.base_point, z, budget).upper
        fz_hold = float(f(1.0 / dh))
        fz_ref = float(f(1.0 / dref))
        margin = max(margin, kl - fz_ref)
        holds &= ku <= fz_hold
        samples.append({"z": z, "delta": dref, "k_lower": kl, "k_upper": ku, "f": fz_ref})
    v1 = "holds" if holds else ("violated" if margin > 0 else "inconclusive")

    # conditions 2 and 3 from localized shells
    lo, up, _ = _shells(domain, r_grid, U, n_points, n_dirs, seed, flags)
    if np.all(np.isfinite(up)):
        v2 = ("holds" if up[-1] <= 0.1 * up[0] and np.all(np.diff(up) <= 1e-9 + 0.25 * up[:-1])
              else "violated" if up[-1] >= up[0] else "inconclusive")
        g = up / r_grid * f.derivative(1.0 / r_grid)
        p3 = _partials(r_grid, g)
        inc = _decade_increments(r_grid, p3)
        v3 = "holds" if inc.size and inc[-1] <= conv_tol else "inconclusive"
        if inc.size >= 3 and np.all(inc[-3:] >= 0.5):
            v3 = "violated"
    else:
        p3 = np.full(len(r_grid), np.nan)
        v2 = v3 = "inconclusive"
    return EvlReport((c, rad), f, float(margin), samples, r_grid, up, lo, p3, v1, v2, v3, flags)


# ---------------------------------------------------------------------------
# claims about the flat-boundary examples
# ---------------------------------------------------------------------------

EXAMPLE_DEFAULTS = {51: {"eps": 0.4, "n": 8}, 52: {"eps": 0.35, "delta": 0.7}}


@dataclass
class ClaimItem:
    name: str
    passed: bool
    value: float | None = None
    bound: float | None = None
    detail: str = ""


@dataclass
class ClaimsReport:
    which: int
    params: dict
    items: list
    p0_roots: list
    goldilocks: GoldilocksReport | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def failing(self):
        return [i.name for i in self.items if not i.passed]

    def as_dict(self):
        out = {"which": self.which, "params": self.params, "passed": self.passed,
               "failing": self.failing(), "p0_roots": self.p0_roots,
               "items": [vars(i) for i in self.items]}
        if self.goldilocks is not None:
            out["goldilocks"] = self.goldilocks.as_dict()
        return out


def _room_note(domain, bound):
    if bound >= domain.radius:
        return f"bound {bound:.4g} exceeds the domain's enclosing radius {domain.radius:.4g}"
    return ""


def in_local_model(eps: float, r: float) -> bool:
    """Whether the comparison disk at ``(0, i r)`` of radius ``1/sqrt(log(1/r))``
    lies where the flat local model of the example is exact (``|z1| < eps``)."""
    return 1.0 / math.log(1.0 / r) < eps * eps


def example_claims_check(which: int, params: dict | None = None, seed: int = 0,
                         shell_exponents=(4, 9, 16), tol_M: float = 0.1,
                         line_exponent: float = 4.0, tol_line: float = 0.02,
                         eps0: float = 0.1, r_min: float = 1e-6, integral_tol: float = 0.15,
                         convexity_samples: int = 10_000, n_points: int = 48,
                         n_dirs: int = 24, root_tol: float = 1e-12) -> ClaimsReport:
    """Verify the quantitative claims for example 51 or 52."""
    which = int(which)
    if which not in EXAMPLE_DEFAULTS:
        raise InputError("which must be 51 or 52")
    params = dict(EXAMPLE_DEFAULTS[which], **(params or {}))
    domain = make_builtin(f"example{which}", params)
    items = []

    roots = domain.constants["axis_roots"]
    p0 = np.array(domain.constants["p0"])
    rho_p0 = float(domain.rho(p0[None, :])[0])
    items.append(ClaimItem("p0_on_boundary", abs(rho_p0) <= root_tol, abs(rho_p0), root_tol,
                           f"{len(roots)} root(s) on the imaginary z2-axis"))

    conv, witness = convexity_probe(domain, convexity_samples, seed)
    items.append(ClaimItem("convexity_probe", bool(conv), detail="" if conv else
                           f"midpoint of {witness[0]} and {witness[1]} leaves the domain"))

    if which == 51:
        for k in shell_exponents:
            r = math.exp(-k)
            bound = 1.0 / math.sqrt(k)
            m = estimate_M_shell(domain, r, None, n_points, n_dirs, seed + k)
            note = _room_note(domain, bound)
            if not in_local_model(params["eps"], r):
                note = (note + "; " if note else "") + "outside the local flat model"
            items.append(ClaimItem(f"M_lower(e^-{k})", m.M_lower >= (1 - tol_M) * bound,
                                   m.M_lower, (1 - tol_M) * bound, note))
    else:
        r = math.exp(-line_exponent)
        rho_r = math.sqrt(1.0 / line_exponent - r * r)
        z = np.array([0.0, 1j * r])
        v = np.array([1.0, 0.0])
        lr = line_radius(domain, z, v)
        items.append(ClaimItem(f"line_radius(e^-{line_exponent:g})", lr >= (1 - tol_line) * rho_r,
                               lr, (1 - tol_line) * rho_r, _room_note(domain, rho_r)))
        up = metric_bounds(domain, z, v).upper
        items.append(ClaimItem(f"metric_upper(e^-{line_exponent:g})",
                               up <= (1 + tol_line) / rho_r, up, (1 + tol_line) / rho_r))

    gl = goldilocks_check(domain, eps0=eps0, r_min=r_min, n_points=n_points, n_dirs=n_dirs,
                          seed=seed, fit=False)
    items.append(ClaimItem("goldilocks_cond1_divergent", gl.verdict_cond1 == "divergent",
                           detail=gl.verdict_cond1))
    if which == 51:
        expected = 2 * (math.sqrt(math.log(1 / r_min)) - math.sqrt(math.log(1 / eps0)))
        got = float(gl.partial_lower[-1])
        items.append(ClaimItem("partial_integral", abs(got - expected) <= integral_tol * expected,
                               got, expected, f"relative tolerance {integral_tol}"))
    else:
        low = np.array([math.sqrt(max(1 / math.log(1 / r) - r * r, 0.0)) for r in gl.r_grid])
        local = np.array([in_local_model(params["eps"], r) for r in gl.r_grid])
        ratio = gl.M_lower / low
        ok = bool(local.any() and np.all(ratio[local] >= 1 - tol_M))
        items.append(ClaimItem(
            "M_lower_vs_line_bound", ok,
            float(np.min(ratio[local])) if local.any() else None, 1 - tol_M,
            f"minimum ratio over {int(local.sum())} grid radii inside the local flat model; "
            f"over all {len(ratio)} radii: {float(np.min(ratio)):.4f}"))
    return ClaimsReport(which, domain.params, items, [float(t) for t in roots], gl)
