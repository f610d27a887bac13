"""Command-line front end.

Every subcommand prints a JSON report (or writes it to ``--out-json``) and
can write a CSV table to ``--out-csv``.  Exit status: 0 success, 2 invalid
input, 3 numerical failure, 64 unknown command.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .criteria import GrowthFunction, evl_check, example_claims_check, goldilocks_check
from .domain import domain_from_spec, sample_interior
from .dynamics import HoloMap, classify_wolff_denjoy, limit_constancy_probe
from .errors import NumericalError, ValidationError, InputError
from .metric import estimate_M_shell, metric_bounds
from .paths import (
    PathBudget, almost_geodesic_between, estimate_distance, exact_model_geodesic, path_to_csv,
    verify_almost_geodesic,
)
from .visibility import gromov_limsup_probe, make_schedule, visibility_probe

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_USAGE = 0, 2, 3, 64
COMMANDS = ("metric", "distance", "geodesic", "visibility", "gromov", "goldilocks", "evl",
            "examples", "iterate", "constancy")


# ---------------------------------------------------------------------------
# parsing and serialization helpers
# ---------------------------------------------------------------------------

def parse_complex(token: str) -> complex:
    t = token.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    try:
        return complex(t)
    except ValueError:
        raise InputError(f"not a number: {token!r}") from None


def parse_point(text: str) -> np.ndarray:
    """``"0.5,0.3"`` or ``"0.5+0.1j,-0.2j"``: one entry per coordinate."""
    if text is None or not text.strip():
        raise InputError("empty point")
    return np.array([parse_complex(t) for t in text.split(",")], dtype=complex)


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return "" if v is None else str(v)


def table_csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        wr.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _point_cols(prefix, d):
    return [f"{prefix}{p}_z{j + 1}" for j in range(d) for p in ("re", "im")]


def _point_vals(z):
    return [x for c in np.asarray(z) for x in (float(c.real), float(c.imag))]


def _budget(args):
    levels = tuple(int(x) for x in args.levels.split(",")) if args.levels else None
    return PathBudget(levels=levels, maxiter=args.maxiter)


# ---------------------------------------------------------------------------
# commands: each returns (result dict, csv text or None)
# ---------------------------------------------------------------------------

def cmd_metric(args, domain):
    z = parse_point(args.point)
    v = parse_point(args.direction)
    est = metric_bounds(domain, z, v)
    res = {"point": z, "direction": v, "lower": est.lower, "upper": est.upper,
           "lower_method": est.lower_method, "upper_method": est.upper_method}
    rows = [_point_vals(z) + _point_vals(v) + [est.lower, est.upper]]
    header = _point_cols("", domain.d) + _point_cols("v_", domain.d) + ["lower", "upper"]
    if args.shell is not None:
        m = estimate_M_shell(domain, args.shell, None, args.n_points, args.n_dirs, args.seed)
        res["M_shell"] = {"r": m.r, "M_lower": m.M_lower, "M_upper": m.M_upper,
                          "samples": m.sample_count, "witness": m.witness,
                          "witness_direction": m.witness_direction}
    return res, table_csv(header, rows)


def cmd_distance(args, domain):
    z = parse_point(args.from_)
    w = parse_point(args.to)
    est = estimate_distance(domain, z, w, _budget(args))
    res = {"from": z, "to": w, "lower": est.lower, "upper": est.upper,
           "lower_method": est.lower_method, "gap": est.upper - est.lower, "info": est.info}
    return res, path_to_csv(est.witness_path)


def cmd_geodesic(args, domain):
    z = parse_point(args.from_)
    w = parse_point(args.to)
    if args.exact:
        path = exact_model_geodesic(domain, z, w, n=args.n_out)
        cert = verify_almost_geodesic(domain, path, 1.0, args.kappa)
    else:
        path, cert = almost_geodesic_between(domain, z, w, args.kappa, _budget(args),
                                             n_out=args.n_out)
    res = {"from": z, "to": w, "kappa": args.kappa, "exact": bool(args.exact),
           "certificate": cert.as_dict(), "passes": cert.passes()}
    return res, path_to_csv(path)


def cmd_visibility(args, domain):
    p, q = parse_point(args.p), parse_point(args.q)
    sched = make_schedule(domain, p, q, args.schedule, args.n_max, args.n_min)
    rep = visibility_probe(domain, p, q, args.kappa, sched, args.family, _budget(args))
    rows = [[t.label, t.status, t.max_depth] + _point_vals(t.x) + _point_vals(t.y)
            for t in rep.trials]
    header = ["n", "status", "max_depth"] + _point_cols("x_", domain.d) + _point_cols("y_", domain.d)
    return rep.as_dict(), table_csv(header, rows)


def cmd_gromov(args, domain):
    p, q = parse_point(args.p), parse_point(args.q)
    o = domain.base_point if args.o is None else parse_point(args.o)
    sched = make_schedule(domain, p, q, args.schedule, args.n_max, args.n_min)
    rep = gromov_limsup_probe(domain, o, p, q, sched)
    rows = [[n, v[0], v[1], w, c] for n, v, w, c in
            zip(rep.labels, rep.values, rep.widths, rep.caps)]
    return rep.as_dict(), table_csv(["n", "product_lower", "product_upper", "width", "cap"], rows)


def cmd_goldilocks(args, domain):
    rep = goldilocks_check(domain, eps0=args.eps0, r_min=args.r_min, per_decade=args.per_decade,
                           n_points=args.n_points, n_dirs=args.n_dirs, seed=args.seed,
                           fit=not args.no_fit)
    rows = list(zip(rep.r_grid, rep.M_lower, rep.M_upper, rep.sample_counts,
                    rep.partial_lower, rep.partial_upper))
    header = ["r", "M_lower", "M_upper", "samples", "partial_lower", "partial_upper"]
    return rep.as_dict(), table_csv(header, rows)


def cmd_evl(args, domain):
    f = GrowthFunction(args.f_form, args.A, args.alpha, args.beta)
    rep = evl_check(domain, (parse_point(args.center), args.radius), f, r0=args.r0,
                    r_min=args.r_min, per_decade=args.per_decade, n_points=args.n_points,
                    n_dirs=args.n_dirs, seed=args.seed)
    rows = list(zip(rep.r_grid, rep.M_lower, rep.M_upper, rep.cond3_partial))
    return rep.as_dict(), table_csv(["r", "M_lower", "M_upper", "cond3_partial"], rows)


def cmd_examples(args, domain):
    params = {}
    if args.eps is not None:
        params["eps"] = args.eps
    if args.which == 51 and args.n is not None:
        params["n"] = args.n
    if args.which == 52 and args.delta is not None:
        params["delta"] = args.delta
    rep = example_claims_check(args.which, params, seed=args.seed, n_points=args.n_points,
                               n_dirs=args.n_dirs)
    rows = [[i.name, i.passed, i.value, i.bound, i.detail] for i in rep.items]
    args.example_domain = {"kind": f"example{args.which}", "params": rep.params}
    return rep.as_dict(), table_csv(["item", "passed", "value", "bound", "detail"], rows)


def _seed_points(args, domain):
    if args.seed_point:
        return np.array([parse_point(s) for s in args.seed_point])
    return sample_interior(domain, args.seeds, np.random.default_rng(args.seed))


def _orbits_csv(orbits, d):
    header = ["seed_index", "nu"] + _point_cols("", d) + ["depth", "displacement"]
    rows = []
    for k, o in enumerate(orbits):
        disp = o.displacement if o.displacement is not None else [None] * len(o.depths)
        for nu, (z, dep, kk) in enumerate(zip(o.iterates, o.depths, disp)):
            rows.append([k, nu] + _point_vals(z) + [float(dep), None if kk is None else float(kk)])
    return table_csv(header, rows)


def cmd_iterate(args, domain):
    F = HoloMap.from_spec(args.map)
    seeds = _seed_points(args, domain)
    v = classify_wolff_denjoy(domain, F, seeds, args.N, args.tail, args.depth_floor,
                              args.agreement_tol, displacement=not args.no_displacement)
    res = {"map": F.spec(), **v.as_dict()}
    return res, _orbits_csv(v.orbits, domain.d)


def cmd_constancy(args, domain):
    F = HoloMap.from_spec(args.map)
    grid = sample_interior(domain, args.grid, np.random.default_rng(args.seed))
    rep = limit_constancy_probe(domain, F, grid, args.N, args.agreement_tol, args.tail)
    rows = []
    for k, o in enumerate(rep.verdict.orbits):
        rows.append([k] + _point_vals(o.seed) + _point_vals(o.terminal) + [float(o.depths[-1])])
    header = ["index"] + _point_cols("seed_", domain.d) + _point_cols("limit_", domain.d)
    header += ["terminal_depth"]
    return {"map": F.spec(), **rep.as_dict()}, table_csv(header, rows)


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# ---------------------------------------------------------------------------
# argument parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="kobageo", description="Kobayashi-geometry numerical laboratory")
    ap.add_argument("--version", action="version", version=f"kobageo {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, domain="disk"):
        p.add_argument("--domain", default=domain,
                       help='JSON spec {"kind":..., "params":{...}}, a bare kind, or @file')
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out-json", default=None)
        p.add_argument("--out-csv", default=None)

    def budget(p):
        p.add_argument("--levels", default=None, help="comma-separated polyline sizes")
        p.add_argument("--maxiter", type=int, default=400)

    def sampling(p, n_points=48, n_dirs=24):
        p.add_argument("--n-points", type=int, default=n_points)
        p.add_argument("--n-dirs", type=int, default=n_dirs)

    p = sub.add_parser("metric", help="two-sided metric bounds")
    common(p)
    p.add_argument("--point", required=True)
    p.add_argument("--direction", required=True)
    p.add_argument("--shell", type=float, default=None, help="also estimate M(r) at this r")
    sampling(p)

    for name, hlp in (("distance", "two-sided distance bracket"),
                      ("geodesic", "certified (1, kappa)-almost-geodesic")):
        p = sub.add_parser(name, help=hlp)
        common(p)
        p.add_argument("--from", dest="from_", required=True)
        p.add_argument("--to", required=True)
        budget(p)
        if name == "geodesic":
            p.add_argument("--kappa", type=float, default=0.01)
            p.add_argument("--n-out", type=int, default=257)
            p.add_argument("--exact", action="store_true", help="closed-form model geodesic")

    for name in ("visibility", "gromov"):
        p = sub.add_parser(name, help=f"{name} probe for a boundary pair")
        common(p)
        p.add_argument("--p", required=True)
        p.add_argument("--q", required=True)
        p.add_argument("--schedule", default="radial",
                       choices=("radial", "normal", "adversarial", "flat"))
        p.add_argument("--n-max", type=int, default=12 if name == "visibility" else 20)
        p.add_argument("--n-min", type=int, default=1)
        if name == "visibility":
            p.add_argument("--kappa", type=float, default=0.05)
            p.add_argument("--family", default="auto", choices=("auto", "exact", "certified"))
            budget(p)
        else:
            p.add_argument("--o", default=None, help="base point (default: domain base point)")

    p = sub.add_parser("goldilocks", help="Goldilocks conditions")
    common(p)
    p.add_argument("--eps0", type=float, default=None)
    p.add_argument("--r-min", type=float, default=1e-6)
    p.add_argument("--per-decade", type=int, default=4)
    p.add_argument("--no-fit", action="store_true")
    sampling(p)

    p = sub.add_parser("evl", help="extended visibility conditions on a localizer")
    common(p)
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--f-form", default="log", choices=("log", "power"))
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--r0", type=float, default=None)
    p.add_argument("--r-min", type=float, default=1e-6)
    p.add_argument("--per-decade", type=int, default=2)
    sampling(p)

    p = sub.add_parser("examples", help="claims about the flat-boundary examples")
    common(p)
    p.add_argument("--which", type=int, required=True, choices=(51, 52))
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    sampling(p)

    for name in ("iterate", "constancy"):
        p = sub.add_parser(name, help="Wolff-Denjoy iteration" if name == "iterate"
                           else "constancy of the limit map")
        common(p)
        p.add_argument("--map", required=True,
                       help='e.g. "moebius:2,1,1,2", "product:2,1,1,2;2,1,1,2", "affine:0.5;0,0"')
        p.add_argument("--N", type=int, default=500)
        p.add_argument("--tail", type=float, default=0.25)
        p.add_argument("--agreement-tol", type=float, default=1e-5)
        if name == "iterate":
            p.add_argument("--seeds", type=int, default=3, help="number of random seeds")
            p.add_argument("--seed-point", action="append", default=None,
                           help="explicit seed point (repeatable)")
            p.add_argument("--depth-floor", type=float, default=None)
            p.add_argument("--no-displacement", action="store_true")
        else:
            p.add_argument("--grid", type=int, default=20)
    return ap


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _load_domain(text):
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read domain file: {exc}") from None
    return domain_from_spec(text)


def _emit(report, args):
    text = json.dumps(jsonable(report), indent=2, allow_nan=False) + "\n"
    if args.out_json:
        with open(args.out_json, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is None:
        if any(a in ("-h", "--help", "--version") for a in argv):
            try:
                ap.parse_args(argv)
            except SystemExit as exc:
                return int(exc.code or 0)
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    if first not in COMMANDS:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"kobageo: unknown command {first!r}\n")
        return EXIT_USAGE
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "seed": args.seed}
    try:
        if args.command == "examples":
            domain = None
        else:
            domain = _load_domain(args.domain)
            report["domain"] = domain.spec()
        result, table = HANDLERS[args.command](args, domain)
    except ValidationError as exc:
        report.update(status="invalid", error=str(exc))
        _emit(report, args)
        sys.stderr.write(f"kobageo: {exc}\n")
        return EXIT_INVALID
    except NumericalError as exc:
        report.update(status="numerical-failure", error=str(exc))
        gap = getattr(exc, "gap", None)
        if gap is not None:
            report["gap"] = gap
        _emit(report, args)
        sys.stderr.write(f"kobageo: {exc}\n")
        return EXIT_NUMERICAL
    if domain is None:
        report["domain"] = args.example_domain
    report.update(status="ok", result=result)
    _emit(report, args)
    if args.out_csv and table is not None:
        with open(args.out_csv, "w", newline="") as fh:
            fh.write(table)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
