import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from negsym.errors import SizeMismatch
from negsym.image import GreyImage, disk_mask
from negsym.synthetic import SymmetrySpec, generate
from negsym.transforms import PlanarTransform, _remap, average, reflect, rotate


def smooth(seed=0, n=256):
    return generate(SymmetrySpec("none", 1, 0.0, seed, size=n))


def disk_mad(a, b):
    m = disk_mask(a.size)
    return float(np.mean(np.abs(a.pixels[m] - b.pixels[m])))


@pytest.fixture(scope="module")
def img():
    return smooth(11)


def remap_by_loop(a, fn):
    """Reference lattice remap: out[p] = a[fn(p)] with fn in frame coordinates."""
    n = a.shape[0]
    c = (n - 1) / 2
    out = np.empty_like(a)
    for r in range(n):
        for col in range(n):
            xs, ys = fn(col - c, c - r)
            out[r, col] = a[int(round(c - ys)), int(round(c + xs))]
    return out


def test_rotate_identity(img):
    np.testing.assert_array_equal(rotate(img, 0).pixels, img.pixels)
    np.testing.assert_array_equal(rotate(img, 360).pixels, img.pixels)
    np.testing.assert_array_equal(rotate(img, -720).pixels, img.pixels)


def test_four_quarter_turns(img):
    out = img
    for _ in range(4):
        out = rotate(out, 90)
    np.testing.assert_array_equal(out.pixels, img.pixels)


def test_rotate_round_trip(img):
    assert disk_mad(rotate(rotate(img, 37), -37), img) <= 0.02


def test_reflect_involution(img):
    assert disk_mad(reflect(reflect(img, 30), 30), img) <= 0.02
    for t in (0, 45, 90, 135):
        np.testing.assert_array_equal(reflect(reflect(img, t), t).pixels, img.pixels)


def test_reflect_90_is_left_right_flip(img):
    np.testing.assert_array_equal(reflect(img, 90).pixels, img.pixels[:, ::-1])
    np.testing.assert_array_equal(reflect(img, 0).pixels, img.pixels[::-1, :])


PERMUTATIONS = [
    ("rotation", 90, lambda x, y: (y, -x)),
    ("rotation", 180, lambda x, y: (-x, -y)),
    ("rotation", 270, lambda x, y: (-y, x)),
    ("reflection", 0, lambda x, y: (x, -y)),
    ("reflection", 45, lambda x, y: (y, x)),
    ("reflection", 90, lambda x, y: (-x, y)),
    ("reflection", 135, lambda x, y: (-y, -x)),
]


@pytest.mark.parametrize("kind,angle,preimage", PERMUTATIONS)
def test_exact_permutations_match_index_remap(kind, angle, preimage):
    a = smooth(2, n=32)
    expected = remap_by_loop(a.pixels, preimage)
    got = PlanarTransform(kind, angle).apply(a).pixels
    np.testing.assert_array_equal(got, expected)


@pytest.mark.parametrize("kind,angle", [(k, a) for k, a, _ in PERMUTATIONS])
def test_exact_paths_agree_with_interpolation(kind, angle):
    # the permutation shortcut and the generic bilinear path are the same map
    a = smooth(4, n=48)
    m = PlanarTransform(kind, angle).matrix()
    inverse = m.T if kind == "rotation" else m
    generic = _remap(a, inverse).pixels
    np.testing.assert_allclose(PlanarTransform(kind, angle).apply(a).pixels, generic, atol=1e-9, rtol=0)


def test_planar_transform_normalizes_angles():
    assert PlanarTransform("rotation", 370).angle == 10
    assert PlanarTransform("reflection", 200).angle == 20
    with pytest.raises(ValueError):
        PlanarTransform("shear", 1)


@pytest.mark.parametrize("seed", range(3))
def test_two_reflections_make_a_rotation(seed):
    a = smooth(seed)
    rng = np.random.default_rng(seed)
    for theta, phi in rng.uniform(0, 180, (4, 2)):
        lhs = reflect(reflect(a, theta), phi)
        rhs = rotate(a, 2 * (phi - theta))
        assert disk_mad(lhs, rhs) <= 0.02


def test_reflection_matrices_compose_to_rotation():
    for theta, phi in np.random.default_rng(0).uniform(-180, 180, (20, 2)):
        prod = PlanarTransform("reflection", phi).matrix() @ PlanarTransform("reflection", theta).matrix()
        np.testing.assert_allclose(prod, PlanarTransform("rotation", 2 * (phi - theta)).matrix(), atol=1e-12)


def test_average():
    a = smooth(5, n=64)
    np.testing.assert_array_equal(average(a, a).pixels, a.pixels)
    zeros, ones = GreyImage(np.zeros((16, 16))), GreyImage(np.ones((16, 16)))
    assert np.all(average(zeros, ones).pixels == 0.5)
    with pytest.raises(SizeMismatch):
        average(a, zeros)


def test_average_with_true_symmetry_is_identity():
    a = generate(SymmetrySpec("rotation", 2, 0.0, 17))
    m = disk_mask(a.size)
    diff = np.abs(average(a, rotate(a, 180)).pixels - a.pixels)[m]
    assert diff.max() <= 1e-6


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.integers(0, 2**31))
def test_average_commutes_and_stays_in_range(s1, s2):
    r1, r2 = np.random.default_rng(s1), np.random.default_rng(s2)
    a, b = GreyImage(r1.random((16, 16))), GreyImage(r2.random((16, 16)))
    ab, ba = average(a, b).pixels, average(b, a).pixels
    np.testing.assert_array_equal(ab, ba)
    assert ab.min() >= 0 and ab.max() <= 1


@settings(max_examples=20, deadline=None)
@given(st.floats(-720, 720, allow_nan=False))
def test_transforms_stay_in_range(theta):
    a = smooth(1, n=32)
    for out in (rotate(a, theta), reflect(a, theta)):
        assert out.pixels.min() >= 0.0 and out.pixels.max() <= 1.0
