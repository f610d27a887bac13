import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kobageo.domain import make_builtin

settings.register_profile(
    "default", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def disk():
    return make_builtin("disk")


@pytest.fixture(scope="session")
def bidisk():
    return make_builtin("bidisk")


@pytest.fixture(scope="session")
def ball2():
    return make_builtin("ball", {"d": 2})


@pytest.fixture(scope="session")
def custom_disk():
    return make_builtin("custom", {"expr": "x1**2 + y1**2 - 1", "d": 1,
                                   "enclosing_radius": 1.0, "convex": True})


@pytest.fixture(scope="session")
def ex51():
    return make_builtin("example51", {"eps": 0.4, "n": 8})


@pytest.fixture(scope="session")
def ex52():
    return make_builtin("example52", {"eps": 0.35, "delta": 0.7})


def disk_pairs(rng, n, dim, kind, max_dist=3.0):
    """Random interior pairs of a unit model with exact distance <= max_dist."""
    from mpmath import mp
    out = []
    while len(out) < n:
        z = rng.standard_normal((2, dim)) + 1j * rng.standard_normal((2, dim))
        if kind == "ball":
            z = z / np.linalg.norm(z, axis=1, keepdims=True) * rng.random((2, 1)) ** (1 / (2 * dim))
        else:
            z = z / np.abs(z) * np.sqrt(rng.random((2, dim)))
        d = oracle_distance(kind, z[0], z[1])
        if 0 < d <= max_dist:
            out.append((z[0], z[1], d))
    return out


def oracle_distance(kind, z, w):
    """Closed-form distances evaluated in mpmath (independent of the package)."""
    from mpmath import mp, mpc, atanh, sqrt
    mp.dps = 30
    z = [mpc(complex(c)) for c in np.atleast_1d(z)]
    w = [mpc(complex(c)) for c in np.atleast_1d(w)]
    if kind == "polydisk":
        return float(max(atanh(abs((a - b) / (1 - a.conjugate() * b))) for a, b in zip(z, w)))
    # ball: 1 - |phi_z(w)|^2 = (1-|z|^2)(1-|w|^2)/|1-<w,z>|^2
    nz = sum(abs(a) ** 2 for a in z)
    nw = sum(abs(b) ** 2 for b in w)
    ip = sum(b * a.conjugate() for a, b in zip(z, w))
    s = 1 - (1 - nz) * (1 - nw) / abs(1 - ip) ** 2
    return float(atanh(sqrt(max(s, 0))))


ACCEPTANCE_KEY = "kobageo_acceptance"


@pytest.fixture
def acceptance_log(request):
    """Record one PASS/FAIL line per acceptance criterion for the summary."""
    lines = request.config.__dict__.setdefault(ACCEPTANCE_KEY, {})

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get(ACCEPTANCE_KEY)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
