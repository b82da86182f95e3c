import numpy as np
import pytest

from curveinv import (QuadratureConfig, calugareanu_report, curve_from_samples,
                      linking_number, mirror_curve, offset_curve, principal_framing,
                      resample_arclength, rotating_framing, self_linking,
                      total_torsion, twist, writhe)
from curveinv.errors import (CurvatureVanishes, CurvesIntersect, FramingMismatch,
                             NearSelfIntersection)
from conftest import PLANAR, preset

# values computed independently with a plain-NumPy double sum and a Frenet
# torsion quadrature at n=4096 while drafting the suite
TREFOIL_WRITHE_4096 = -3.126859191757
TREFOIL_TORSION = 0.126859232825

Q_FAST = QuadratureConfig(n=256, refinement=2)


def _fixed(n):
    return QuadratureConfig(n=n, refinement=0)


def test_circle_writhe_zero(unit_circle):
    rep = writhe(unit_circle, Q_FAST)
    assert abs(rep.value) < 1e-10


@pytest.mark.parametrize("name", PLANAR)
def test_planar_writhe_zero(name):
    rep = writhe(preset(name), Q_FAST)
    assert abs(rep.value) < 1e-10


def test_trefoil_writhe_matches_highres_oracle(trefoil):
    oracle = writhe(trefoil, _fixed(4096)).value
    assert abs(oracle - TREFOIL_WRITHE_4096) < 1e-9
    rep = writhe(trefoil, QuadratureConfig())
    assert abs(rep.value - oracle) < 1e-4


def test_writhe_near_self_intersection_guard():
    t = 2 * np.pi * np.arange(64) / 64
    # figure-eight whose two strands pass within 2e-10 of each other at the
    # crossing: fine at construction, rejected by the writhe guard
    pts = np.column_stack([np.sin(t), np.sin(2 * t), 1e-10 * np.cos(t)])
    curve = curve_from_samples(pts)
    with pytest.raises(NearSelfIntersection):
        writhe(curve, Q_FAST)


def test_total_torsion_planar_zero(unit_circle):
    assert abs(total_torsion(unit_circle, Q_FAST).value) < 1e-12
    assert abs(total_torsion(preset("ellipse"), Q_FAST).value) < 1e-12


def test_total_torsion_trefoil_matches_oracle(trefoil):
    oracle = total_torsion(trefoil, _fixed(4096)).value
    assert abs(oracle - TREFOIL_TORSION) < 1e-10
    rep = total_torsion(trefoil, QuadratureConfig())
    assert abs(rep.value - oracle) < 1e-6


def test_total_torsion_refuses_flat_curves():
    c = preset("twisted")  # amplitude 0.4, fine
    total_torsion(c, Q_FAST)
    flat = __import__("curveinv").make_preset("twisted_unknot", {"amplitude": 0.2})
    with pytest.raises(CurvatureVanishes):
        total_torsion(flat, Q_FAST)


def test_twist_circle_principal_zero(unit_circle):
    rep = twist(unit_circle, principal_framing(unit_circle), Q_FAST)
    assert abs(rep.value) < 1e-12


def test_twist_rotating_framing_counts_turns(unit_circle):
    fr = rotating_framing(unit_circle, 3)
    rep = twist(unit_circle, fr, Q_FAST)
    assert abs(rep.value - 3.0) < 1e-10


def test_twist_equals_total_torsion_for_principal(trefoil):
    tw = twist(trefoil, principal_framing(trefoil), QuadratureConfig())
    tom = total_torsion(trefoil, QuadratureConfig())
    assert abs(tw.value - tom.value) < 1e-8


def test_twist_framing_mismatch(trefoil, unit_circle):
    with pytest.raises(FramingMismatch):
        twist(trefoil, principal_framing(unit_circle), Q_FAST)


def test_hopf_pair_linking(hopf_pair):
    first, second = hopf_pair
    res = linking_number(first, second, QuadratureConfig(n=512, refinement=1))
    assert abs(res.lk) == 1
    assert res.residual < 1e-6


def test_separated_circles_unlinked(unit_circle):
    t = 2 * np.pi * np.arange(64) / 64
    far = curve_from_samples(np.column_stack([10 + np.cos(t), np.sin(t), 0 * t]))
    res = linking_number(unit_circle, far, Q_FAST)
    assert res.lk == 0


def test_linking_rejects_intersecting(unit_circle):
    with pytest.raises(CurvesIntersect):
        linking_number(unit_circle, unit_circle, Q_FAST)


def test_linking_integer_stable_under_doubling(trefoil):
    off = offset_curve(trefoil, principal_framing(trefoil), 0.02)
    a = linking_number(trefoil, off, _fixed(2048))
    b = linking_number(trefoil, off, _fixed(4096))
    assert a.lk == b.lk


def test_ribbon_linking_closes_calugareanu(trefoil):
    q = QuadratureConfig(n=1024, refinement=2)
    off = offset_curve(trefoil, principal_framing(trefoil), 0.01)
    lk = linking_number(trefoil, off, q)
    wr = writhe(trefoil, q)
    tw = twist(trefoil, principal_framing(trefoil), q)
    assert lk.lk == round(wr.value + tw.value)


def test_self_linking_circle_zero(unit_circle):
    res = self_linking(unit_circle, 0.1, Q_FAST)
    assert res.lk == 0


def test_self_linking_epsilon_stability(trefoil):
    results = []
    for eps, n in ((0.005, 8192), (0.01, 4096), (0.02, 2048)):
        res = self_linking(trefoil, eps, _fixed(n))
        results.append(res.lk)
        assert res.residual < 1e-3
    assert len(set(results)) == 1
    assert results[0] == -3


def test_self_linking_equals_writhe_plus_torsion(trefoil):
    res = self_linking(trefoil, 0.02, _fixed(4096))
    wr = writhe(trefoil, QuadratureConfig()).value
    tom = total_torsion(trefoil, QuadratureConfig()).value
    assert res.lk == round(wr + tom)
    assert abs(wr + tom - round(wr + tom)) < 1e-3


def test_calugareanu_circle(unit_circle):
    rep = calugareanu_report(unit_circle, principal_framing(unit_circle), 0.1, Q_FAST)
    assert rep.lk == 0
    assert abs(rep.wr) < 1e-10
    assert abs(rep.tw) < 1e-10
    assert rep.residual < 1e-10


def test_calugareanu_trefoil(trefoil):
    q = QuadratureConfig(n=1024, refinement=2)
    rep = calugareanu_report(trefoil, principal_framing(trefoil), 0.01, q)
    assert rep.residual < 1e-3


def test_calugareanu_twisted_ribbon_on_circle(unit_circle):
    k = 3
    fr = rotating_framing(unit_circle, k)
    rep = calugareanu_report(unit_circle, fr, 0.1, QuadratureConfig(n=512, refinement=2))
    assert rep.lk == k
    assert abs(rep.wr) < 1e-10
    assert abs(rep.tw - k) < 1e-10
    assert rep.residual < 1e-6


def test_writhe_rigid_motion_and_scale_invariant(trefoil):
    rng = np.random.default_rng(11)
    A = rng.standard_normal((3, 3))
    Q, _ = np.linalg.qr(A)
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    shift = rng.standard_normal(3)
    scale = 2.7
    pts = trefoil.grid_derivatives(512, 0)[0]
    moved = curve_from_samples(scale * pts @ Q.T + shift)
    a = writhe(trefoil, _fixed(512)).value
    b = writhe(moved, _fixed(512)).value
    assert abs(a - b) < 1e-8


def test_writhe_mirror_antisymmetry(trefoil):
    rep = writhe(trefoil, QuadratureConfig())
    rep_m = writhe(mirror_curve(trefoil), QuadratureConfig())
    assert abs(rep_m.value + rep.value) <= 2 * max(rep.estimated_error, 1e-12)


def test_writhe_parametrization_independent(trefoil):
    a = writhe(trefoil, _fixed(1024)).value
    b = writhe(resample_arclength(trefoil, 1024), _fixed(1024)).value
    assert abs(a - b) < 1e-6


@pytest.mark.parametrize("name", ["circle", "ellipse", "trefoil", "torus25", "flower", "twisted"])
def test_integrality_of_writhe_plus_torsion(name):
    c = preset(name)
    q = QuadratureConfig(n=1024, refinement=1)
    total = writhe(c, q).value + total_torsion(c, q).value
    assert abs(total - round(total)) < 1e-3
