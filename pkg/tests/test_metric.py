import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kobageo.domain import make_builtin
from kobageo.errors import DomainError, InputError, SamplingError
from kobageo.metric import (
    estimate_M_shell, exact_model_metric, metric_bounds, metric_bounds_many, metric_floor,
)

CUSTOM_BALL = make_builtin("custom", {"expr": "x1**2+y1**2+x2**2+y2**2-1", "d": 2,
                                      "enclosing_radius": 1.0, "convex": True})


def test_exact_model_metric_values():
    assert exact_model_metric("disk", [0], [1]) == pytest.approx(1.0)
    assert exact_model_metric("disk", [0.5], [1]) == pytest.approx(4 / 3)
    assert exact_model_metric("polydisk", [0.5, 0], [1, 1]) == pytest.approx(4 / 3)
    with pytest.raises(DomainError):
        exact_model_metric("ball", [0.8, 0.8], [1, 0])


def test_metric_bounds_custom_disk(custom_disk):
    est = metric_bounds(custom_disk, [0], [1])
    assert est.lower >= 0.5
    assert est.upper == pytest.approx(1.0, rel=1e-9)
    assert est.contains(1.0, tol=1e-9)
    assert est.upper_method == "line-radius"


def test_metric_bounds_example52_flat(ex52):
    r = math.exp(-4)
    bound = 1 / math.sqrt(1 / math.log(1 / r) - r * r)
    assert bound == pytest.approx(2.0013, abs=1e-4)
    assert metric_bounds(ex52, [0, 1j * r], [1, 0]).upper <= (1 + 0.02) * bound


def test_metric_bounds_ball_radius_two():
    est = metric_bounds(make_builtin("ball", {"d": 2, "R": 2.0}), [0, 0], [1, 0])
    assert est.lower == pytest.approx(0.5) and est.upper == pytest.approx(0.5)
    assert est.lower_method == "exact-model"


def test_metric_bounds_errors(disk):
    with pytest.raises(InputError):
        metric_bounds(disk, [0.1], [0])
    with pytest.raises(DomainError):
        metric_bounds(disk, [1.5], [1])


def test_shell_disk():
    m = estimate_M_shell(make_builtin("disk"), 0.1, n_points=32, n_dirs=8)
    # 1/kappa = 1 - |z|^2 = 2 delta - delta^2 at delta = r
    assert m.M_lower >= (1 - 1e-6) * (2 * 0.1 - 0.01)
    assert m.M_lower <= m.M_upper <= 0.19 + 1e-9
    assert m.sample_count > 0


def test_shell_monotone_in_r(disk):
    a = estimate_M_shell(disk, 0.05, n_points=32, n_dirs=8)
    b = estimate_M_shell(disk, 0.1, n_points=32, n_dirs=8)
    assert a.M_upper <= b.M_upper + 1e-12


def test_shell_ball_upper():
    m = estimate_M_shell(make_builtin("ball", {"d": 2}), 0.5, n_points=32, n_dirs=16)
    assert m.M_upper <= 1.0 + 1e-9


def test_shell_example51_claim(ex51):
    r = math.exp(-16)
    m = estimate_M_shell(ex51, r, n_points=48, n_dirs=24)
    assert m.M_lower >= 0.9 * 0.25


def test_shell_errors(disk):
    with pytest.raises(InputError):
        estimate_M_shell(disk, 1.5)
    with pytest.raises(SamplingError, match="shell"):
        estimate_M_shell(disk, 0.01, localizer=([0], 0.2), n_points=8, n_dirs=4)


# -- properties ---------------------------------------------------------------------

pt = st.tuples(st.floats(0, 0.95), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi),
               st.floats(0, 2 * math.pi))


def _zv(s, a, b, c):
    z = s * np.array([math.cos(a), math.sin(a) * np.exp(1j * b)])
    v = np.array([np.exp(1j * c), 0.3 - 0.2j])
    return z, v


@given(pt)
def test_sandwich_on_wrapped_ball(args):
    z, v = _zv(*args)
    est = metric_bounds(CUSTOM_BALL, z, v)
    exact = exact_model_metric("ball", z, v)
    assert est.lower <= exact * (1 + 1e-9)
    assert exact <= est.upper * (1 + 1e-9)
    # convex domains: upper <= 2 lower
    assert est.upper <= 2 * est.lower * (1 + 1e-9)
    # lower bound constant from the enclosing ball
    assert est.lower >= metric_floor(CUSTOM_BALL) * np.linalg.norm(v) * (1 - 1e-12)


@given(pt, st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False,
                              allow_infinity=False))
def test_homogeneity(args, lam):
    z, v = _zv(*args)
    a = metric_bounds(CUSTOM_BALL, z, v)
    b = metric_bounds(CUSTOM_BALL, z, lam * v)
    assert b.lower == pytest.approx(abs(lam) * a.lower, rel=1e-6)
    assert b.upper == pytest.approx(abs(lam) * a.upper, rel=1e-6)


@given(pt)
def test_inclusion_monotonicity_of_exact_models(args):
    z, v = _zv(*args)
    # the unit ball lies in the unit bidisk
    assert exact_model_metric("polydisk", z, v) <= exact_model_metric("ball", z, v) * (1 + 1e-12)


def test_batch_matches_single(ex52):
    pts = np.array([[0.01, 0.2j], [0.05j, 0.3j]])
    dirs = np.array([[1, 0], [1j, 1]], dtype=complex)
    lo, up = metric_bounds_many(ex52, pts, dirs)
    for k in range(2):
        est = metric_bounds(ex52, pts[k], dirs[k])
        assert lo[k] == pytest.approx(est.lower) and up[k] == pytest.approx(est.upper)
