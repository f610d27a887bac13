import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, quad

from kobageo.domain import boundary_distances, make_builtin
from kobageo.errors import DegeneratePathError, InputError, ReparametrizationError
from kobageo.paths import (
    PathBudget, SampledPath, almost_geodesic_between, distance_lower_bound, estimate_distance,
    exact_model_geodesic, kobayashi_length, path_from_csv, path_to_csv, reparametrize_unit_speed,
    verify_almost_geodesic,
)

from conftest import oracle_distance


def _line(a, b, n=512):
    t = np.linspace(0, 1, n)
    a, b = np.atleast_1d(np.asarray(a, complex)), np.atleast_1d(np.asarray(b, complex))
    return SampledPath(t, a + t[:, None] * (b - a))


def _poincare_integral(x):
    mp.dps = 20
    return float(quad(lambda s: 1 / (1 - s * s), [0, x]))


# -- lengths ---------------------------------------------------------------------

def test_length_disk_radial(disk):
    lo, up = kobayashi_length(disk, _line(0, 0.8))
    want = _poincare_integral(0.8)
    assert want == pytest.approx(1.098612, abs=1e-6)
    assert up == pytest.approx(want, rel=1e-2)
    assert lo <= up


def test_length_bidisk_slice(bidisk):
    _, up = kobayashi_length(bidisk, _line([0, 0], [0.5, 0]))
    assert up == pytest.approx(_poincare_integral(0.5), rel=1e-2)


def test_length_constant_path(ex51):
    z = ex51.base_point
    p = SampledPath(np.linspace(0, 1, 5), np.repeat(z[None, :], 5, axis=0))
    assert kobayashi_length(ex51, p) == (0.0, 0.0)


def test_length_refinement_does_not_grow(custom_disk):
    coarse = kobayashi_length(custom_disk, _line(-0.3j, 0.7, 16))[1]
    fine = kobayashi_length(custom_disk, _line(-0.3j, 0.7, 256))[1]
    assert fine <= coarse * (1 + 1e-3)


def test_length_rejects_boundary_paths(disk):
    with pytest.raises(DegeneratePathError):
        kobayashi_length(disk, _line(0, 1.0))
    with pytest.raises(DegeneratePathError):
        kobayashi_length(disk, _line(0, 0.99), delta_min=0.05)


# -- distance estimates ---------------------------------------------------------

def test_distance_disk(disk):
    est = estimate_distance(disk, [0], [0.5])
    exact = math.atanh(0.5)
    assert est.upper == pytest.approx(exact, rel=0.02)
    assert est.lower <= exact + 1e-12


def test_distance_bidisk(bidisk):
    est = estimate_distance(bidisk, [0, 0], [0.5, 0.3])
    exact = max(math.atanh(0.5), math.atanh(0.3))
    assert exact == pytest.approx(0.549306, abs=1e-6)
    assert est.upper == pytest.approx(exact, rel=0.02)
    assert est.lower <= exact + 1e-12 <= est.upper + 2e-12


def test_distance_identical_points(ex52):
    z = ex52.base_point
    est = estimate_distance(ex52, z, z)
    assert (est.lower, est.upper) == (0.0, 0.0)


def test_distance_generic_brackets_oracle(custom_disk):
    z, w = [0.2 + 0.1j], [-0.5 + 0.3j]
    est = estimate_distance(custom_disk, z, w, PathBudget(levels=(4, 8)))
    exact = oracle_distance("polydisk", z, w)
    # without a model shortcut the bracket is only certified, not tight:
    # the line-radius metric bound can exceed the true metric by a factor 2
    assert est.lower <= exact <= est.upper <= 2 * exact


def test_lower_bound_methods(ex52):
    assert distance_lower_bound(make_builtin("disk"), [0], [0.5])[1] == "exact-model"
    assert distance_lower_bound(ex52, ex52.base_point, [0, 1e-4j])[1] == "supporting-strip"


pts2 = st.tuples(st.floats(0, 0.9), st.floats(0, 2 * math.pi))


def _c(p):
    return np.array([p[0] * np.exp(1j * p[1])])


@settings(max_examples=10)
@given(pts2, pts2, pts2)
def test_triangle_inequality_and_symmetry(bidisk, a, b, c):
    z, y, w = (np.array([_c(p)[0], 0.5 * _c(p)[0] ** 2]) for p in (a, b, c))
    zw = estimate_distance(bidisk, z, w)
    wz = estimate_distance(bidisk, w, z)
    zy = estimate_distance(bidisk, z, y)
    yw = estimate_distance(bidisk, y, w)
    tol = 0.02 * max(zw.upper, 1e-3)
    assert zw.upper <= zy.upper + yw.upper + 2 * tol
    assert abs(zw.upper - wz.upper) <= tol
    assert zw.lower == pytest.approx(wz.lower, rel=1e-9, abs=1e-12)


# -- exact geodesics --------------------------------------------------------------

def test_exact_disk_geodesic_radial():
    g = exact_model_geodesic("disk", [0], [0.8])
    np.testing.assert_allclose(g.points[:, 0], np.tanh(g.grid), atol=1e-12)
    assert g.grid[-1] == pytest.approx(math.atanh(0.8))


def test_exact_disk_geodesic_through_center():
    g = exact_model_geodesic("disk", [-0.9], [0.9])
    assert g.grid[-1] == pytest.approx(2.944439, abs=1e-6)
    assert np.min(np.abs(g.points)) < 1e-12


def test_exact_bidisk_flat_geodesic(bidisk):
    g = exact_model_geodesic(bidisk, [0.9, 0.9], [-0.9, 0.9])
    np.testing.assert_allclose(g.points[:, 1], 0.9)
    mid = g.points[len(g) // 2]
    assert abs(mid[0]) < 1e-12
    assert boundary_distances(bidisk, mid[None, :])[0] == pytest.approx(0.1)


def test_exact_geodesic_same_point():
    with pytest.raises(InputError):
        exact_model_geodesic("disk", [0.1], [0.1])


# -- certificates ------------------------------------------------------------------

def test_verify_exact_geodesics(disk, bidisk):
    g = exact_model_geodesic(disk, [-0.3j], [0.7])
    assert verify_almost_geodesic(disk, g, 1.0, 1e-6).passes(1e-6)
    f = exact_model_geodesic(bidisk, [0.9, 0.9], [-0.9, 0.9])
    cert = verify_almost_geodesic(bidisk, f, 1.0, 1e-3)
    assert cert.worst_pair_margin >= -1e-6 and cert.lemma_margin >= -1e-6


def test_verify_rejects_folded_path(disk):
    g = exact_model_geodesic(disk, [0], [0.8])
    n = len(g)
    back = g.points[::-1][1:n // 2]
    pts = np.concatenate([g.points, back])
    t = np.concatenate([g.grid, g.grid[-1] + np.cumsum(np.diff(g.grid)[:len(back)])])
    cert = verify_almost_geodesic(disk, SampledPath(t, pts), 1.0, 0.01)
    assert cert.worst_pair_margin < 0


def test_reparametrize_radial_segment(disk):
    path, cert = reparametrize_unit_speed(disk, _line(0, 0.8, 64), 1e-3)
    np.testing.assert_allclose(path.points[:, 0].real, np.tanh(path.grid), atol=1e-3)
    assert cert.passes(1e-3)


def test_reparametrize_circle_arc(bidisk):
    t = np.linspace(0, 1, 200)
    arc = SampledPath(t, np.stack([0.5 * np.exp(1j * t), 0.3 * np.exp(2j * t)], axis=1))
    path, cert = reparametrize_unit_speed(bidisk, arc, 1.0, reference_upper=np.inf)
    assert cert.speed_max <= 1 + 1e-3


def test_reparametrize_duplicated_point(disk):
    p = _line(0, 0.5, 10)
    pts = p.points.copy()
    pts[4] = pts[3]
    with pytest.raises(ReparametrizationError):
        reparametrize_unit_speed(disk, SampledPath(p.grid, pts), 0.01)


def test_almost_geodesic_disk(disk):
    path, cert = almost_geodesic_between(disk, [0], [0.8], 0.01)
    assert cert.passes(1e-3)
    assert abs(path.grid[-1] - math.atanh(0.8)) <= 0.01
    # trace preservation and unit speed
    d = np.abs(path.points[:, 0] - np.tanh(path.grid))
    assert d.max() <= 1e-2
    assert 0.99 <= cert.speed_min and cert.speed_max <= 1.01


def test_almost_geodesic_bidisk_flat(bidisk):
    path, cert = almost_geodesic_between(bidisk, [0.9, 0.9], [-0.9, 0.9], 0.05)
    assert cert.passes(1e-3)
    depth = boundary_distances(bidisk, path.points)
    assert depth.max() <= 0.1 + 1e-3


@pytest.mark.slow
def test_almost_geodesic_example51(ex51):
    c = ex51.constants["p0"][1].imag
    # close enough that the generic distance bracket is narrower than kappa
    path, cert = almost_geodesic_between(ex51, [0, 0.45j * c], [0, 0.55j * c], 0.1)
    assert cert.worst_pair_margin >= -1e-3 and cert.passes(1e-3)


def test_length_invariance_under_reparametrization(custom_disk):
    src = _line(-0.2, 0.3 + 0.4j, 32)
    path, _ = reparametrize_unit_speed(custom_disk, src, 0.05, reference_upper=np.inf)
    a = kobayashi_length(custom_disk, src)[1]
    b = kobayashi_length(custom_disk, path)[1]
    assert b == pytest.approx(a, rel=2e-3)
    # trace: every output point is close to the input segment
    seg = src.points[-1, 0] - src.points[0, 0]
    rel = (path.points[:, 0] - src.points[0, 0]) / seg
    assert np.max(np.abs(rel.imag)) * abs(seg) < 1e-12


def test_csv_roundtrip(disk):
    g = exact_model_geodesic(disk, [0.1j], [0.5 - 0.2j], n=33)
    text = path_to_csv(g)
    assert text.splitlines()[0] == "t,re_z1,im_z1"
    back = path_from_csv(text)
    np.testing.assert_array_equal(back.grid, g.grid)
    np.testing.assert_array_equal(back.points, g.points)
