import numpy as np
import pytest

from curveinv import frenet_at, frenet_scan, make_preset, mirror_curve, resample_arclength
from curveinv.errors import CurvatureVanishes
from curveinv.frenet import grid_frames
from curveinv.quadrature import spectral_derivative
from conftest import PLANAR, preset


def test_circle_frame():
    c = make_preset("circle", {"R": 2.0})
    for u in (0.0, 1.1, 3.9):
        fr = frenet_at(c, u)
        assert fr.kappa == pytest.approx(0.5, abs=1e-12)
        assert fr.tau == pytest.approx(0.0, abs=1e-12)


def test_ellipse_vertex_curvature():
    c = make_preset("ellipse", {"a": 2.0, "b": 1.0})
    fr = frenet_at(c, 0.0)
    assert fr.kappa == pytest.approx(2.0, abs=1e-12)
    assert fr.tau == pytest.approx(0.0, abs=1e-12)


def _fd_frenet_oracle(curve, u0, h=1e-3):
    """kappa, tau from 6th-order central differences of positions only."""
    pos = lambda x: curve.derivatives(np.array([x]), 0)[0][0]
    offsets = np.arange(-4, 5)
    vals = np.stack([pos(u0 + k * h) for k in offsets])
    c1 = np.array([0, 1/60, -3/20, 3/4, 0, -3/4, 3/20, -1/60, 0])[::-1]
    c2 = np.array([0, -1/90, 3/20, -3/2, 49/18, -3/2, 3/20, -1/90, 0])[::-1]
    c3 = np.array([-7/240, 3/10, -169/120, 61/30, 0, -61/30, 169/120, -3/10, 7/240])[::-1]
    f1 = (c1 @ vals) / h
    f2 = (c2 @ vals) / h ** 2
    f3 = (c3 @ vals) / h ** 3
    cross = np.cross(f1, f2)
    kappa = np.linalg.norm(cross) / np.linalg.norm(f1) ** 3
    tau = cross @ f3 / (cross @ cross)
    return kappa, tau


def test_torus_knot_frame_against_fd_oracle(trefoil):
    for u0 in (0.0, 1.3, 2.7):
        kappa_fd, tau_fd = _fd_frenet_oracle(trefoil, u0)
        fr = frenet_at(trefoil, u0)
        assert abs(fr.kappa - kappa_fd) < 1e-6
        assert abs(fr.tau - tau_fd) < 1e-6


def test_frame_orthonormal_right_handed(trefoil):
    fr = grid_frames(trefoil, 128)
    for a, b in ((fr.e1, fr.e2), (fr.e1, fr.e3), (fr.e2, fr.e3)):
        assert np.abs(np.einsum('ij,ij->i', a, b)).max() < 1e-10
    for a in (fr.e1, fr.e2, fr.e3):
        assert np.abs(np.einsum('ij,ij->i', a, a) - 1).max() < 1e-10
    assert np.abs(np.cross(fr.e1, fr.e2) - fr.e3).max() < 1e-10


def test_scan_circle():
    prof = frenet_scan(make_preset("circle", {"R": 1.0}), 64)
    assert prof.min_kappa == pytest.approx(1.0, abs=1e-10)
    assert prof.nowhere_vanishing


def test_scan_flags_inflection():
    c = make_preset("twisted_unknot", {"amplitude": 0.2})
    prof = frenet_scan(c, 256)
    assert not prof.nowhere_vanishing
    assert prof.min_kappa_refined < 1e-6


def test_scan_trefoil_positive_and_stable(trefoil):
    prof = frenet_scan(trefoil, 256)
    prof4 = frenet_scan(trefoil, 1024)
    assert prof.nowhere_vanishing
    assert prof.min_kappa > 0.1
    assert abs(prof.min_kappa_refined - prof4.min_kappa_refined) < 1e-8


def test_frame_raises_at_inflection():
    c = make_preset("twisted_unknot", {"amplitude": 0.2})
    with pytest.raises(CurvatureVanishes):
        frenet_at(c, np.pi / 2)


def test_frenet_equations_residual(trefoil):
    # frame fields are not band-limited even for a band-limited curve, so
    # differentiate them on a grid finer than the curve's representation
    c = resample_arclength(trefoil, 512)
    fr = grid_frames(c, 2048)
    de1 = spectral_derivative(fr.e1) / fr.speed[:, None]
    de2 = spectral_derivative(fr.e2) / fr.speed[:, None]
    de3 = spectral_derivative(fr.e3) / fr.speed[:, None]
    k, t = fr.kappa[:, None], fr.tau[:, None]
    assert np.linalg.norm(de1 - k * fr.e2, axis=1).max() < 1e-5
    assert np.linalg.norm(de2 + k * fr.e1 - t * fr.e3, axis=1).max() < 1e-5
    assert np.linalg.norm(de3 + t * fr.e2, axis=1).max() < 1e-5


@pytest.mark.parametrize("name", PLANAR)
def test_planar_torsion_vanishes(name):
    fr = grid_frames(preset(name), 256)
    assert np.abs(fr.tau).max() < 1e-10


def test_mirror_flips_torsion(trefoil):
    fr = grid_frames(trefoil, 128)
    fm = grid_frames(mirror_curve(trefoil), 128)
    assert np.abs(fm.kappa - fr.kappa).max() < 1e-10
    assert np.abs(fm.tau + fr.tau).max() < 1e-10


def test_profile_reports_nan_tau_at_flat_samples():
    c = make_preset("twisted_unknot", {"amplitude": 0.2})
    prof = frenet_scan(c, 256)
    if prof.min_kappa < 1e-12:
        assert np.isnan(prof.tau[np.argmin(prof.kappa)])


def test_profile_csv_rows(trefoil):
    from curveinv.frenet import profile_csv_rows
    prof = frenet_scan(trefoil, 64)
    rows = profile_csv_rows(prof)
    assert rows.shape == (64, 4)
    assert np.allclose(rows[:, 0], prof.u)
    assert np.allclose(rows[:, 2], prof.kappa)
