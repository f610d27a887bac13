"""Iteration of holomorphic self-maps and the Wolff-Denjoy dichotomy.

Only built-in families are accepted so that ``F(Omega) ⊂ Omega`` can be
checked: Möbius maps of the disk, coordinatewise products of them on the
polydisk, affine contractions toward an anchor in the closure of a convex
domain, and compositions of these.

An orbit is either relatively compact (its depths stay bounded below) or
converges to a boundary point.  Floating point can round an iterate that
approaches the boundary onto it; such an orbit is truncated at the last
interior iterate and flagged, while an iterate that lands clearly outside
raises :class:`MapValidityError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    Domain, as_point, boundary_distances, contains, contains_many, exit_distance,
    nearest_boundary_point, rho_many, sample_interior,
)
from .errors import InputError, MapValidityError, ParameterError
from .paths import (
    _strip_coordinate, _uhp_distance, enclosing_ball_distance, model_distance, supporting_strips,
)

FAMILIES = ("disk-moebius", "polydisk-product", "affine-contraction", "composition")

# an iterate past the boundary by at most this fraction of R counts as rounding
SATURATION_RTOL = 1e-10


def _cplx(x) -> complex:
    if isinstance(x, str):
        try:
            return complex(x.replace(" ", "").replace("i", "j"))
        except ValueError as exc:
            raise ParameterError(f"not a complex number: {x!r}") from exc
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def _moebius_ok(coeffs, n: int = 4096) -> tuple[bool, str]:
    a, b, c, d = coeffs
    if abs(a * d - b * c) == 0:
        return False, "degenerate Möbius coefficients (ad - bc = 0)"
    if c != 0 and abs(d / c) <= 1:
        return False, "pole in the closed unit disk"
    f0 = b / d
    if abs(f0) >= 1:
        return False, "F(0) is not in the unit disk"
    # the image of the unit circle is a circle: sampling it is enough
    t = np.exp(2j * np.pi * np.arange(n) / n)
    img = (a * t + b) / (c * t + d)
    if np.max(np.abs(img)) > 1 + 1e-12:
        return False, "image of the unit circle leaves the closed disk"
    return True, ""


@dataclass(frozen=True)
class HoloMap:
    """A built-in holomorphic map; ``params`` depends on ``family``.

    * ``disk-moebius``: ``coeffs = (a, b, c, d)``, ``z -> (a z + b)/(c z + d)``
    * ``polydisk-product``: ``factors``, one Möbius coefficient tuple per coordinate
    * ``affine-contraction``: ``s`` in (0, 1) and ``anchor``; ``z -> b + s (z - b)``
    * ``composition``: ``maps``, applied first to last
    """

    family: str
    params: dict = field(hash=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown map family {self.family!r}")
        p = self.params
        if self.family == "disk-moebius":
            coeffs = tuple(_cplx(x) for x in p["coeffs"])
            if len(coeffs) != 4:
                raise ParameterError("a Möbius map needs four coefficients")
            ok, why = _moebius_ok(coeffs)
            if not ok:
                raise MapValidityError(f"not a self-map of the disk: {why}")
            object.__setattr__(self, "params", {"coeffs": coeffs})
        elif self.family == "polydisk-product":
            factors = [tuple(_cplx(x) for x in f) for f in p["factors"]]
            for f in factors:
                if len(f) != 4:
                    raise ParameterError("every factor needs four coefficients")
                ok, why = _moebius_ok(f)
                if not ok:
                    raise MapValidityError(f"factor {f} is not a self-map of the disk: {why}")
            object.__setattr__(self, "params", {"factors": factors})
        elif self.family == "affine-contraction":
            s = float(p["s"])
            if not 0 < s < 1:
                raise ParameterError("contraction factor s must lie in (0, 1)")
            raw = p["anchor"]
            if np.isscalar(raw) or isinstance(raw, str):
                raw = [raw]
            anchor = np.array([_cplx(x) for x in raw], dtype=complex)
            object.__setattr__(self, "params", {"s": s, "anchor": anchor})
        else:
            maps = [m if isinstance(m, HoloMap) else HoloMap.from_spec(m) for m in p["maps"]]
            if not maps:
                raise ParameterError("empty composition")
            object.__setattr__(self, "params", {"maps": maps})

    # -- construction -----------------------------------------------------
    @classmethod
    def moebius(cls, a, b, c, d) -> "HoloMap":
        return cls("disk-moebius", {"coeffs": (a, b, c, d)})

    @classmethod
    def product(cls, *factors) -> "HoloMap":
        return cls("polydisk-product", {"factors": factors})

    @classmethod
    def affine(cls, s, anchor) -> "HoloMap":
        return cls("affine-contraction", {"s": s, "anchor": anchor})

    @classmethod
    def compose(cls, *maps) -> "HoloMap":
        return cls("composition", {"maps": list(maps)})

    @classmethod
    def from_spec(cls, spec) -> "HoloMap":
        """From a dict ``{"family": ..., "params": ...}`` or a short string.

        Strings: ``moebius:a,b,c,d``, ``product:a,b,c,d;a,b,c,d``,
        ``affine:s;b1,b2,...`` and ``compose:<spec>|<spec>``.
        """
        if isinstance(spec, HoloMap):
            return spec
        if isinstance(spec, dict):
            try:
                return cls(spec["family"], dict(spec.get("params", {})))
            except KeyError as exc:
                raise ParameterError(f"map spec is missing {exc}") from exc
        if not isinstance(spec, str) or ":" not in spec:
            raise ParameterError(f"cannot parse map spec {spec!r}")
        tag, body = spec.split(":", 1)
        tag = tag.strip().lower()
        try:
            if tag == "compose":
                return cls.compose(*[cls.from_spec(s) for s in body.split("|")])
            if tag == "moebius":
                return cls.moebius(*body.split(","))
            if tag == "product":
                return cls.product(*[f.split(",") for f in body.split(";")])
            if tag == "affine":
                s, _, anchor = body.partition(";")
                if not anchor:
                    raise ParameterError("affine map needs an anchor: affine:s;b1,b2")
                return cls.affine(float(s), anchor.split(","))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"cannot parse map spec {spec!r}: {exc}") from exc
        raise ParameterError(f"unknown map tag {tag!r}")

    def spec(self) -> dict:
        p = self.params
        if self.family == "disk-moebius":
            params = {"coeffs": [[c.real, c.imag] for c in p["coeffs"]]}
        elif self.family == "polydisk-product":
            params = {"factors": [[[c.real, c.imag] for c in f] for f in p["factors"]]}
        elif self.family == "affine-contraction":
            params = {"s": p["s"], "anchor": [[c.real, c.imag] for c in p["anchor"]]}
        else:
            params = {"maps": [m.spec() for m in p["maps"]]}
        return {"family": self.family, "params": params}

    # -- evaluation ---------------------------------------------------------
    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        p = self.params
        if self.family == "disk-moebius":
            a, b, c, d = p["coeffs"]
            return (a * z + b) / (c * z + d)
        if self.family == "polydisk-product":
            f = p["factors"]
            if z.shape[-1] != len(f):
                raise InputError(f"product map has {len(f)} factors, point has {z.shape[-1]}")
            out = np.empty_like(z)
            for j, (a, b, c, d) in enumerate(f):
                out[..., j] = (a * z[..., j] + b) / (c * z[..., j] + d)
            return out
        if self.family == "affine-contraction":
            b = p["anchor"]
            if z.shape[-1] != b.shape[0]:
                raise InputError("anchor and point dimensions differ")
            return b + p["s"] * (z - b)
        for m in p["maps"]:
            z = m(z)
        return z

    @property
    def dim(self) -> int | None:
        p = self.params
        if self.family == "disk-moebius":
            return None
        if self.family == "polydisk-product":
            return len(p["factors"])
        if self.family == "affine-contraction":
            return int(p["anchor"].shape[0])
        dims = {m.dim for m in p["maps"]} - {None}
        if len(dims) > 1:
            raise ParameterError("composed maps have different dimensions")
        return dims.pop() if dims else None

    # -- validity -------------------------------------------------------------
    def _exact_on(self, domain: Domain) -> bool:
        """Whether ``F(Omega) ⊂ Omega`` holds by construction on ``domain``."""
        model = domain.model
        unit = (model is not None and bool(np.all(np.asarray(model[2]) == 1.0))
                and bool(np.all(np.asarray(model[1]) == 0)))
        if self.family == "disk-moebius":
            return unit and domain.d == 1
        if self.family == "polydisk-product":
            return unit and (model[0] == "polydisk" or domain.d == 1)
        if self.family == "affine-contraction":
            b = self.params["anchor"]
            return domain.convex and float(rho_many(domain, b[None, :])[0]) <= 1e-12
        return all(m._exact_on(domain) for m in self.params["maps"])

    def validate(self, domain: Domain, samples: int = 512, seed: int = 0) -> str:
        """Check ``F(Omega) ⊂ Omega``; returns how it was established.

        Raises :class:`MapValidityError` when a sample is mapped outside.
        """
        dim = self.dim
        if dim is not None and dim != domain.d:
            raise MapValidityError(f"map acts on C^{dim}, domain lives in C^{domain.d}")
        if self.family == "disk-moebius" and domain.d != 1:
            raise MapValidityError("a Möbius map needs a one-dimensional domain")
        if self.family == "affine-contraction":
            b = self.params["anchor"]
            if float(rho_many(domain, b[None, :])[0]) > 1e-12:
                raise MapValidityError(f"anchor {b} is outside the closed domain")
        if self._exact_on(domain):
            return "exact"
        rng = np.random.default_rng(seed)
        pts = sample_interior(domain, samples, rng)
        img = self(pts)
        bad = ~contains_many(domain, img)
        if bad.any():
            k = int(np.argmax(bad))
            raise MapValidityError(f"F({pts[k]}) = {img[k]} leaves the domain")
        return f"sampled ({samples} points)"


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

@dataclass
class OrbitRecord:
    seed: np.ndarray
    iterates: np.ndarray
    depths: np.ndarray
    displacement: np.ndarray | None
    truncated: bool = False
    flags: list = field(default_factory=list)

    @property
    def terminal(self) -> np.ndarray:
        return self.iterates[-1]

    def to_csv(self) -> str:
        d = self.iterates.shape[1]
        cols = ["nu"] + [f"{p}_z{j + 1}" for j in range(d) for p in ("re", "im")]
        cols += ["depth", "displacement"]
        lines = [",".join(cols)]
        disp = self.displacement if self.displacement is not None else np.full(len(self.depths), np.nan)
        for nu, (z, dep, k) in enumerate(zip(self.iterates, self.depths, disp)):
            vals = [str(nu)] + [f"{x:.17g}" for c in z for x in (c.real, c.imag)]
            vals += [f"{dep:.17g}", f"{k:.17g}"]
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"


def displacements(domain: Domain, pts, z0=None) -> np.ndarray:
    """Lower bounds on ``k(x, z0)`` for every row ``x`` of ``pts``."""
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    z0 = domain.base_point if z0 is None else as_point(z0, domain.d)
    if domain.model is not None:
        return np.maximum(model_distance(domain, pts, z0[None, :]), 0.0)
    if not domain.convex:
        return np.maximum(enclosing_ball_distance(domain, pts, z0[None, :]), 0.0)
    P, Nn, W = supporting_strips(domain, np.concatenate([pts, z0[None, :]]))
    # strip of the base point, applied to every pair
    e_pts = _strip_coordinate(pts, P[-1], Nn[-1], W[-1])
    e_0 = _strip_coordinate(z0[None, :], P[-1], Nn[-1], W[-1])
    best = _uhp_distance(e_pts, e_0)
    # strip of each iterate, applied to its own pair
    a = np.exp(1j * np.pi * (np.sum((pts - P[:-1]) * np.conj(Nn[:-1]), axis=1) + W[:-1]) / W[:-1])
    b = np.exp(1j * np.pi * (np.sum((z0 - P[:-1]) * np.conj(Nn[:-1]), axis=1) + W[:-1]) / W[:-1])
    best = np.maximum(best, _uhp_distance(a, b))
    best = np.maximum(best, enclosing_ball_distance(domain, pts, z0[None, :]))
    return np.maximum(best, 0.0)


def _overshoot(domain, prev, x):
    step = x - prev
    n = float(np.linalg.norm(step))
    if n == 0:
        return 0.0
    return n - exit_distance(domain, prev, step / n)


def iterate_orbit(domain: Domain, F: HoloMap, z, N: int, displacement: bool = True,
                  check: bool = True) -> OrbitRecord:
    """Forward orbit ``z, F(z), ..., F^N(z)`` with depth and displacement."""
    z = as_point(z, domain.d)
    if not contains(domain, z):
        raise InputError(f"seed {z} is not in the domain")
    if int(N) < 1:
        raise InputError("N must be at least 1")
    if check:
        F.validate(domain)
    N = int(N)
    out = np.empty((N + 1, domain.d), dtype=complex)
    out[0] = z
    flags = []
    truncated = False
    n = N
    for nu in range(1, N + 1):
        x = F(out[nu - 1])
        if not np.all(np.isfinite(x)):
            raise MapValidityError(f"iterate {nu} is not finite")
        if not contains(domain, x):
            over = _overshoot(domain, out[nu - 1], x)
            if over <= SATURATION_RTOL * domain.radius:
                flags.append(f"iterate {nu} rounds onto the boundary; orbit truncated at {nu - 1}")
                truncated = True
                n = nu - 1
                break
            raise MapValidityError(f"iterate {nu} = {x} leaves the domain (overshoot {over:.3g})")
        out[nu] = x
    it = out[:n + 1]
    depths = boundary_distances(domain, it)
    disp = displacements(domain, it) if displacement else None
    return OrbitRecord(z, it, depths, disp, truncated, flags)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class WDVerdict:
    classification: str
    limit_point: np.ndarray | None
    agreement: float
    orbits: list = field(repr=False)
    depth_floor: float = 0.0
    agreement_tol: float = 1e-5
    tail: float = 0.25
    reasons: list = field(default_factory=list)

    def as_dict(self):
        lp = None if self.limit_point is None else [[c.real, c.imag] for c in self.limit_point]
        return {
            "classification": self.classification, "limit_point": lp,
            "agreement": self.agreement, "depth_floor": self.depth_floor,
            "agreement_tol": self.agreement_tol, "tail": self.tail, "reasons": self.reasons,
            "seeds": [
                {"seed": [[c.real, c.imag] for c in o.seed], "length": len(o.depths) - 1,
                 "terminal": [[c.real, c.imag] for c in o.terminal],
                 "terminal_depth": float(o.depths[-1]),
                 "min_tail_depth": float(np.min(_tail(o.depths, self.tail))),
                 "truncated": o.truncated, "flags": o.flags}
                for o in self.orbits
            ],
        }


def _tail(seq, frac):
    k = max(2, int(math.ceil(frac * len(seq))))
    return seq[-k:]


def _spread(pts) -> float:
    pts = np.asarray(pts)
    if len(pts) < 2:
        return 0.0
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.max(np.linalg.norm(diff, axis=-1)))


def _fold(domain, orbits, depth_floor, agreement_tol, tail):
    """Deterministic classification of completed orbit records."""
    reasons = []
    terminals = np.array([o.terminal for o in orbits])
    agreement = _spread(terminals)
    tails = [_tail(o.depths, tail) for o in orbits]
    if all(np.min(t) >= depth_floor for t in tails):
        return "compact-orbits", None, agreement, reasons
    monotone = all(np.all(np.diff(t) <= 1e-12 * domain.radius) for t in tails)
    to_zero = all(t[-1] <= agreement_tol for t in tails)
    if not monotone:
        reasons.append("depths are not monotone over the tail window")
    if not to_zero:
        reasons.append("terminal depths exceed agreement_tol")
    if agreement > agreement_tol:
        reasons.append(f"terminal iterates spread {agreement:.3g} > {agreement_tol:.3g}")
    if not (monotone and to_zero and agreement <= agreement_tol):
        return "inconclusive", None, agreement, reasons
    centroid = terminals.mean(axis=0)
    if contains(domain, centroid):
        xi = nearest_boundary_point(domain, centroid)[1]
    else:
        xi = centroid
    gap = float(np.max(np.linalg.norm(terminals - xi, axis=1)))
    if gap > agreement_tol:
        reasons.append(f"terminal iterates lie {gap:.3g} from the boundary cluster")
        return "inconclusive", None, agreement, reasons
    return "boundary-convergent", xi, agreement, reasons


def classify_wolff_denjoy(domain: Domain, F: HoloMap, seeds, N: int = 500,
                          tail: float = 0.25, depth_floor: float | None = None,
                          agreement_tol: float = 1e-5, displacement: bool = True) -> WDVerdict:
    """Classify the orbits of ``F`` from at least three seeds.

    compact-orbits: every tail depth stays above ``depth_floor``.
    boundary-convergent: every tail depth decreases to below
    ``agreement_tol`` and all terminal iterates lie within
    ``agreement_tol`` of a common boundary point.
    """
    seeds = np.atleast_2d(np.asarray([as_point(s, domain.d) for s in seeds]))
    if seeds.shape[0] < 3:
        raise InputError("classification needs at least three seeds")
    if not 0 < tail <= 1:
        raise InputError("tail must lie in (0, 1]")
    F.validate(domain)
    if depth_floor is None:
        depth_floor = 0.1 * float(boundary_distances(domain, domain.base_point[None, :])[0])
    orbits = [iterate_orbit(domain, F, s, N, displacement, check=False) for s in seeds]
    cls, xi, agreement, reasons = _fold(domain, orbits, depth_floor, agreement_tol, tail)
    return WDVerdict(cls, xi, agreement, orbits, float(depth_floor), agreement_tol, tail, reasons)


@dataclass
class ConstancyReport:
    status: str
    verdict: WDVerdict = field(repr=False)
    spread: float | None = None
    interleave_gap: float | None = None
    limit: np.ndarray | None = None
    agreement_tol: float = 1e-5

    @property
    def constant(self) -> bool:
        return self.status == "constant"

    def as_dict(self):
        return {
            "status": self.status, "spread": self.spread, "interleave_gap": self.interleave_gap,
            "limit": None if self.limit is None else [[c.real, c.imag] for c in self.limit],
            "agreement_tol": self.agreement_tol, "verdict": self.verdict.as_dict(),
        }


def _parity_limits(orbit):
    it = orbit.iterates
    n = len(it) - 1
    even = it[n if n % 2 == 0 else n - 1]
    odd = it[n if n % 2 == 1 else n - 1]
    return even, odd


def limit_constancy_probe(domain: Domain, F: HoloMap, grid, N: int = 500,
                          agreement_tol: float = 1e-5, tail: float = 0.25,
                          depth_floor: float | None = None) -> ConstancyReport:
    """Check that the limit map of the iterates is constant on ``grid``.

    Also compares the limits along the even and odd subsequences.
    """
    grid = np.atleast_2d(np.asarray([as_point(g, domain.d) for g in grid]))
    if grid.shape[0] < 10:
        raise InputError("the constancy probe needs at least ten grid points")
    v = classify_wolff_denjoy(domain, F, grid, N, tail, depth_floor, agreement_tol,
                              displacement=False)
    if v.classification != "boundary-convergent":
        return ConstancyReport("not-applicable", v, agreement_tol=agreement_tol)
    spread = _spread([o.terminal for o in v.orbits])
    gap = max(float(np.linalg.norm(e - o)) for e, o in map(_parity_limits, v.orbits))
    ok = spread <= agreement_tol and gap <= agreement_tol
    return ConstancyReport("constant" if ok else "not-constant", v, spread, gap,
                           v.limit_point, agreement_tol)


def grid_points(domain: Domain, n: int, seed: int = 0) -> np.ndarray:
    """Deterministic interior grid for the constancy probe."""
    return sample_interior(domain, n, np.random.default_rng(seed))
