import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kobageo.criteria import (
    GrowthFunction, evl_check, example_claims_check, goldilocks_check, in_local_model,
    log_grid,
)
from kobageo.domain import contains, make_builtin
from kobageo.errors import ValidationError


@pytest.fixture(scope="module")
def disk_goldilocks(disk):
    return goldilocks_check(disk, 0.1)


@pytest.fixture(scope="module")
def claims51():
    return example_claims_check(51)


@pytest.fixture(scope="module")
def claims52():
    return example_claims_check(52)


def _item(rep, name):
    return next(i for i in rep.items if i.name == name)


def test_log_grid():
    g = log_grid(0.1, 1e-6, 4)
    assert g[0] == pytest.approx(0.1) and g[-1] == pytest.approx(1e-6)
    assert np.all(np.diff(g) < 0)
    assert len(g) == 21


def test_disk_goldilocks(disk_goldilocks):
    rep = disk_goldilocks
    assert rep.verdict_cond1 == "convergent"
    assert rep.verdict_cond2 == "holds"
    assert rep.fit["alpha"] == pytest.approx(0.5, abs=0.02)
    # M(r) = 2r - r^2 on the disk, so M/r ~ 2
    assert np.allclose(rep.M_upper / rep.r_grid, 2.0, rtol=0.05)


def test_disk_partials_monotone_and_ordered(disk_goldilocks):
    rep = disk_goldilocks
    assert np.all(np.diff(rep.partial_lower) >= 0)
    assert np.all(np.diff(rep.partial_upper) >= 0)
    assert np.all(rep.partial_lower <= rep.partial_upper + 1e-15)
    # closed form: integral of 2 - r from r_min to 0.1
    exact = 2 * (0.1 - 1e-6) - 0.5 * (0.1 ** 2 - 1e-12)
    assert rep.partial_upper[-1] == pytest.approx(exact, rel=0.05)


def test_goldilocks_rejects_bad_eps(disk):
    with pytest.raises(ValidationError):
        goldilocks_check(disk, eps0=1.5)


def test_growth_function():
    f = GrowthFunction("log", 1.0, 0.5)
    assert f(math.e ** 2) == pytest.approx(2.0)
    assert f.derivative(4.0) == pytest.approx(0.125)
    g = GrowthFunction("power", 0.0, 2.0, 0.5)
    assert g(9.0) == pytest.approx(6.0)
    with pytest.raises(ValidationError):
        GrowthFunction("exp")
    with pytest.raises(ValidationError):
        GrowthFunction("log", alpha=-1.0)


def test_evl_disk():
    dk = make_builtin("disk")
    rep = evl_check(dk, ([1], 0.5), GrowthFunction("log", 1.0, 0.5))
    assert (rep.verdict_cond1, rep.verdict_cond2, rep.verdict_cond3) == ("holds",) * 3
    assert rep.cond1_margin <= 0
    # M(r)/r^2 f'(1/r) ~ 2r / r^2 * r / 2 = 1, integral ~ r0 - r_min
    r0 = rep.r_grid[0]
    assert rep.cond3_partial[-1] == pytest.approx(r0 - rep.r_grid[-1], rel=0.1)
    assert np.all(np.diff(rep.cond3_partial) >= 0)


def test_evl_ball(ball2):
    rep = evl_check(ball2, ([1, 0], 0.5), GrowthFunction("log", 1.0, 0.5))
    assert (rep.verdict_cond1, rep.verdict_cond2, rep.verdict_cond3) == ("holds",) * 3
    assert rep.cond1_margin <= 0


def test_evl_example51(ex51):
    b = ex51.base_point
    lo, hi = 0.0, 1.0
    for _ in range(60):
        m = 0.5 * (lo + hi)
        lo, hi = (m, hi) if contains(ex51, b + [m, 0]) else (lo, m)
    p = b + [lo, 0]
    rep = evl_check(ex51, (p, 0.1), GrowthFunction("log", 1.0, 1.0))
    assert (rep.verdict_cond1, rep.verdict_cond2, rep.verdict_cond3) == ("holds",) * 3
    assert rep.cond1_margin <= 0


def test_evl_rejects_empty_localizer(disk):
    with pytest.raises(ValidationError):
        evl_check(disk, ([3], 0.5))


def test_in_local_model():
    assert in_local_model(0.4, math.exp(-16))
    assert not in_local_model(0.4, math.exp(-4))


@given(st.floats(2.0, 30.0))
def test_line_bound_formula_positive(a):
    # the comparison radius sqrt(1/log(1/r) - r^2) is real on the whole grid
    r = math.exp(-a)
    assert 1 / math.log(1 / r) - r * r > 0


def test_claims51(claims51):
    rep = claims51
    assert rep.passed, rep.failing()
    assert _item(rep, "M_lower(e^-16)").value >= 0.25 * 0.9
    assert _item(rep, "M_lower(e^-9)").value >= (1 / 3) * 0.9
    assert _item(rep, "convexity_probe").passed
    assert rep.goldilocks.verdict_cond1 == "divergent"
    expected = 2 * (math.sqrt(math.log(1e6)) - math.sqrt(math.log(10)))
    assert expected == pytest.approx(4.39, abs=0.01)
    assert rep.goldilocks.partial_lower[-1] >= expected * 0.85


def test_claims51_partials_ordered(claims51):
    g = claims51.goldilocks
    assert np.all(np.diff(g.partial_lower) >= 0)
    assert np.all(g.partial_lower <= g.partial_upper + 1e-12)


def test_claims52(claims52):
    rep = claims52
    assert rep.passed, rep.failing()
    rho = math.sqrt(1 / 4 - math.exp(-8))
    assert rho == pytest.approx(0.499665, abs=1e-6)
    assert _item(rep, "line_radius(e^-4)").value >= 0.4996 * 0.98
    assert _item(rep, "metric_upper(e^-4)").value <= 2.0013 * 1.02
    assert rep.goldilocks.verdict_cond1 == "divergent"


def test_claims_reject_bad_which():
    with pytest.raises(ValidationError):
        example_claims_check(53)
