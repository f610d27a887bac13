import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kobageo.dynamics import (
    HoloMap, classify_wolff_denjoy, displacements, grid_points, iterate_orbit,
    limit_constancy_probe,
)
from kobageo.domain import make_builtin
from kobageo.errors import KobageoError, MapValidityError, ValidationError
from kobageo.paths import model_distance

HYP = "moebius:2,1,1,2"


def _mob(z, a, b, c, d):
    return (a * z + b) / (c * z + d)


def test_moebius_iterates_exact(disk):
    rec = iterate_orbit(disk, HoloMap.from_spec(HYP), [0], 3)
    # 1/2, 4/5, 13/14 by direct rational arithmetic
    assert np.allclose(rec.iterates[1:, 0], [0.5, 0.8, 13 / 14], rtol=0, atol=1e-15)
    assert rec.terminal[0] == pytest.approx(0.928571, abs=1e-6)
    assert not rec.truncated


def test_rotation_period_four(disk):
    rec = iterate_orbit(disk, HoloMap.moebius(1j, 0, 0, 1), [0.3], 4)
    assert rec.iterates[4, 0] == pytest.approx(0.3, abs=1e-15)
    assert np.allclose(rec.depths, 0.7)


def test_affine_interior_anchor_geometric(ex51):
    b = ex51.base_point + np.array([0.05, 0.02j])
    F = HoloMap.affine(0.5, b)
    z0 = ex51.base_point
    rec = iterate_orbit(ex51, F, z0, 20)
    err = np.linalg.norm(rec.iterates - b, axis=1)
    assert np.allclose(err[1:] / err[:-1], 0.5, rtol=1e-9)


def test_orbit_invariants(disk):
    rec = iterate_orbit(disk, HoloMap.from_spec(HYP), [0.3j], 50)
    assert np.all(rec.displacement >= 0)
    assert np.all(rec.depths > 0)
    lines = rec.to_csv().strip().splitlines()
    assert len(lines) == 52
    assert lines[0].startswith("nu,")


def test_iterate_errors(disk):
    F = HoloMap.from_spec(HYP)
    with pytest.raises(ValidationError):
        iterate_orbit(disk, F, [1.5], 3)
    with pytest.raises(ValidationError):
        iterate_orbit(disk, F, [0], 0)


def test_map_leaving_domain_raises(ex52):
    # an affine contraction towards a point far outside is not a self-map
    F = HoloMap.affine(0.5, [0, 2j])
    with pytest.raises(MapValidityError):
        iterate_orbit(ex52, F, ex52.base_point, 10, check=False)
    with pytest.raises(MapValidityError):
        F.validate(ex52)


def test_wd_hyperbolic_disk(disk):
    v = classify_wolff_denjoy(disk, HoloMap.from_spec(HYP), [[0], [0.3j], [-0.5]], N=200)
    assert v.classification == "boundary-convergent"
    assert abs(v.limit_point[0] - 1) <= 1e-6


def test_wd_rotation_compact(disk):
    v = classify_wolff_denjoy(disk, HoloMap.moebius(1j, 0, 0, 1), [[0], [0.3j], [-0.5]])
    assert v.classification == "compact-orbits"
    assert v.limit_point is None


def test_wd_interior_fixed_point_compact(disk):
    # F(z) = z/2 + 0.2 has attracting fixed point 0.4
    v = classify_wolff_denjoy(disk, HoloMap.moebius(0.5, 0.2, 0, 1), [[0], [0.3j], [-0.5]])
    assert v.classification == "compact-orbits"


def test_wd_example52_boundary_anchor(ex52):
    anchor = np.array([0, 0], dtype=complex)
    F = HoloMap.affine(0.5, anchor)
    seeds = ex52.base_point + np.array([[0, 0], [0.05, 0.02j], [-0.03j, 0.01j]])
    v = classify_wolff_denjoy(ex52, F, seeds, N=200, displacement=False)
    assert v.classification == "boundary-convergent"
    assert np.linalg.norm(v.limit_point - anchor) <= 1e-5


def test_wd_needs_three_seeds(disk):
    with pytest.raises(ValidationError):
        classify_wolff_denjoy(disk, HoloMap.from_spec(HYP), [[0], [0.1]])


def test_constancy_disk(disk):
    rep = limit_constancy_probe(disk, HoloMap.from_spec(HYP), grid_points(disk, 20), N=200)
    assert rep.status == "constant"
    assert rep.spread <= 1e-5
    assert abs(rep.limit[0] - 1) <= 1e-6


def test_constancy_bidisk_product(bidisk):
    F = HoloMap.from_spec("product:2,1,1,2;3,1,1,3")
    rep = limit_constancy_probe(bidisk, F, grid_points(bidisk, 12), N=300)
    assert rep.constant
    assert np.allclose(rep.limit, [1, 1], atol=1e-5)
    assert rep.interleave_gap <= 1e-5


def test_constancy_not_applicable(disk):
    rep = limit_constancy_probe(disk, HoloMap.moebius(1j, 0, 0, 1), grid_points(disk, 10))
    assert rep.status == "not-applicable"


def test_constancy_needs_ten(disk):
    with pytest.raises(ValidationError):
        limit_constancy_probe(disk, HoloMap.from_spec(HYP), grid_points(disk, 5))


# invariants -----------------------------------------------------------------

def _disk_self_map(theta, a, s):
    # s * e^{i theta} (z - a) / (1 - conj(a) z)
    u = s * cmath.exp(1j * theta)
    return HoloMap.moebius(u, -u * a, -a.conjugate(), 1)


pt = st.tuples(st.floats(0, 0.9), st.floats(0, 2 * math.pi)).map(lambda t: t[0] * cmath.exp(1j * t[1]))


@given(st.floats(0, 2 * math.pi), pt, st.floats(0.3, 1.0), pt, pt)
def test_non_expansive(theta, a, s, z, w):
    dk = make_builtin("disk")
    F = _disk_self_map(theta, a, s)
    zs = iterate_orbit(dk, F, [z], 8, displacement=False).iterates
    ws = iterate_orbit(dk, F, [w], 8, displacement=False).iterates
    k0 = model_distance(dk, [z], [w])
    for x, y in zip(zs, ws):
        assert model_distance(dk, x, y) <= k0 + 1e-9


@given(st.floats(0, 2 * math.pi), pt, st.floats(0.3, 1.0))
def test_dichotomy_exclusive(theta, a, s):
    dk = make_builtin("disk")
    v = classify_wolff_denjoy(dk, _disk_self_map(theta, a, s), [[0], [0.3j], [-0.5]], N=100)
    assert v.classification in ("compact-orbits", "boundary-convergent", "inconclusive")
    assert (v.classification == "boundary-convergent") == (v.limit_point is not None)


@pytest.mark.parametrize("anchor,bounded", [(0.5, True), (-0.3j, True), (1.0, False),
                                            (1j, False)])
def test_affine_displacement_bounded_iff_interior(disk, anchor, bounded):
    rec = iterate_orbit(disk, HoloMap.affine(0.5, [anchor]), [0.2], 40)
    disp = rec.displacement
    if bounded:
        limit = model_distance(disk, [0], [anchor])
        assert abs(disp[-1] - limit) <= 1e-9
        assert disp.max() <= max(limit, disp[0]) + 1.0
    else:
        # each step halves the boundary gap and adds about (1/2) log 2
        assert np.all(np.diff(disp[10:]) > 0.3)


def test_displacements_exact_on_model(disk):
    pts = np.array([[0.5], [-0.9j]])
    assert np.allclose(displacements(disk, pts, [0]), [math.atanh(0.5), math.atanh(0.9)])


# map specs ------------------------------------------------------------------

def test_map_spec_roundtrip():
    for text in [HYP, "product:2,1,1,2;1j,0,0,1", "affine:0.5;0,0", "compose:moebius:1j,0,0,1|moebius:2,1,1,2"]:
        F = HoloMap.from_spec(text)
        G = HoloMap.from_spec(F.spec())
        z = np.array([0.1 + 0.2j] * (F.dim or 1))
        assert np.allclose(F(z), G(z))


def test_compose_order(disk):
    F = HoloMap.from_spec("compose:moebius:1j,0,0,1|moebius:2,1,1,2")
    z = 0.3
    # compositions apply left to right
    assert F(np.array([z]))[0] == pytest.approx(_mob(1j * z, 2, 1, 1, 2))


@pytest.mark.parametrize("bad", ["moebius:1,0,0", "moebius:2,0,0,1", "moebius:1,0,0,0",
                                 "affine:1.5;0", "affine:0.5", "nope:1", "moebius", 42,
                                 {"params": {}}])
def test_bad_map_specs(bad):
    with pytest.raises(KobageoError):
        HoloMap.from_spec(bad)


def test_validate_exact_families(disk, bidisk, ex52):
    assert HoloMap.from_spec(HYP).validate(disk) == "exact"
    assert HoloMap.from_spec("product:2,1,1,2;3,1,1,3").validate(bidisk) == "exact"
    assert HoloMap.affine(0.5, [0, 0]).validate(ex52) == "exact"
    assert HoloMap.affine(0.5, ex52.base_point + [0.05, 0]).validate(ex52) == "exact"
    G = HoloMap.compose(HoloMap.affine(0.5, [0, 0]), HoloMap.affine(0.9, ex52.base_point))
    assert G.validate(ex52) == "exact"
