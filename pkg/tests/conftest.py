import numpy as np
import pytest

from curveinv import curve_from_samples, make_preset

# presets used across the suite; planar and nowhere-flat subsets matter
# for which invariants are defined
ALL_PRESET_SPECS = {
    "circle": ("circle", {"R": 1.0}),
    "ellipse": ("ellipse", {"a": 2.0, "b": 1.0}),
    "trefoil": ("torus_knot", {"p": 2, "q": 3, "R": 2.0, "r": 0.5}),
    "torus25": ("torus_knot", {"p": 2, "q": 5, "R": 2.0, "r": 0.5}),
    "flower": ("planar_flower", {"petals": 3, "R": 1.0, "amplitude": 0.05}),
    "twisted": ("twisted_unknot", {"amplitude": 0.4}),
}

PLANAR = ("circle", "ellipse", "flower")
NOWHERE_FLAT = ("circle", "ellipse", "trefoil", "torus25", "flower", "twisted")


def preset(name):
    kind, params = ALL_PRESET_SPECS[name]
    return make_preset(kind, params)


@pytest.fixture(scope="session")
def trefoil():
    return preset("trefoil")


@pytest.fixture(scope="session")
def unit_circle():
    return preset("circle")


@pytest.fixture(scope="session")
def hopf_pair():
    """Unit circle in the xy-plane at the origin and a unit circle in the
    xz-plane through it, centered at (1, 0, 0): linking number +-1."""
    t = 2 * np.pi * np.arange(64) / 64
    first = curve_from_samples(np.column_stack([np.cos(t), np.sin(t), np.zeros_like(t)]))
    second = curve_from_samples(np.column_stack([1 + np.cos(t), np.zeros_like(t), np.sin(t)]))
    return first, second
