"""Detector behaviour on synthetic images with known symmetry."""
import numpy as np
import pytest

from negsym.detector import (
    DetectorConfig,
    candidate_orders,
    detect,
    find_extrema,
    is_periodic,
    neg_tilt_angle,
    reflectional_negentropy,
    rotational_negentropy,
)
from negsym.errors import ZeroVarianceImage
from negsym.harness import angular_distance
from negsym.image import GreyImage, standardize
from negsym.negentropy import negentropy
from negsym.synthetic import SymmetrySpec, generate
from negsym.transforms import average, disk_samples, reflect, rotate

CFG = DetectorConfig()


def noise_image(seed=0, n=256):
    return GreyImage(np.random.default_rng(seed).random((n, n)))


@pytest.fixture(scope="module")
def refl5():
    return generate(SymmetrySpec("reflection", 5, 36.0, 505))


@pytest.fixture(scope="module")
def rot6():
    return generate(SymmetrySpec("rotation", 6, 0.0, 606))


def test_baseline_is_unaveraged_negentropy(rot6):
    curve = rotational_negentropy(rot6, CFG)
    assert curve.baseline == negentropy(standardize(rot6))
    assert negentropy(standardize(average(rot6, rot6))) == curve.baseline


@pytest.mark.parametrize("kind,theta", [("rotation", 360 / 7), ("rotation", 90.0), ("reflection", 17.0),
                                        ("reflection", 135.0)])
def test_disk_fast_path_matches_full_transform(rot6, kind, theta):
    full = (rotate if kind == "rotation" else reflect)(rot6, theta)
    assert np.array_equal(disk_samples(rot6, kind, theta), full.disk_values())


def test_curves_match_full_transform_path(rot6):
    rot = rotational_negentropy(rot6, CFG)
    for k in range(2, 10):
        assert rot.at(k) == negentropy(standardize(average(rot6, rotate(rot6, 360.0 / k))))
    ref = reflectional_negentropy(rot6, DetectorConfig(angle_step=20.0))
    for i, theta in enumerate(ref.angles):
        assert ref.values[i] == negentropy(standardize(average(rot6, reflect(rot6, theta))))


def test_candidates_order6(rot6):
    curve = rotational_negentropy(rot6, CFG)
    assert candidate_orders(curve, CFG) == [1, 2, 3, 6]


def test_candidates_noise_and_zero_tolerance(rot6):
    assert candidate_orders(rotational_negentropy(noise_image(), CFG), CFG) == [1]
    # 180 and 90 degree averages are exact permutations of a symmetric image, so they survive delta = 0
    strict = DetectorConfig(delta=0.0)
    assert candidate_orders(rotational_negentropy(rot6, strict), strict) == [1, 2]


def test_reflectional_curve_extrema_order5(refl5):
    ref = reflectional_negentropy(refl5, CFG)
    assert len(ref) == 180 and ref.angles[36] == 36.0
    ext = find_extrema(ref, ref.baseline, CFG)
    assert len(ext) == 5
    for e, axis in zip(ext, (0, 36, 72, 108, 144)):
        assert angular_distance(e, axis) <= 1.0
    assert is_periodic(ref, 5, CFG)
    assert neg_tilt_angle(ref, ext, CFG) in (0.0, 36.0, 72.0, 108.0, 144.0)


def test_mirror_property_about_true_axis():
    img = generate(SymmetrySpec("reflection", 1, 90.0, 3))
    ref = reflectional_negentropy(img, CFG)
    v = ref.values
    d = np.arange(1, 90)
    dev = np.abs(v[(90 + d) % 180] - v[(90 - d) % 180]) / ref.baseline
    assert dev.max() <= 0.05


def test_detect_reflection_order5(refl5):
    r = detect(refl5, CFG)
    assert (r.order, r.symmetry_type) == (5, "reflection")
    assert 36.0 in r.tilt_axes
    assert r.order in candidate_orders(r.rotational, CFG)


def test_detect_rotation_order7():
    r = detect(generate(SymmetrySpec("rotation", 7, 0.0, 707)), CFG)
    assert (r.order, r.symmetry_type, r.tilt_deg) == (7, "rotation", None)
    assert r.tilt_axes == []


def test_detect_noise_is_asymmetric():
    r = detect(noise_image(1), CFG)
    assert (r.order, r.symmetry_type, r.tilt_deg) == (1, "none", None)


def test_detect_constant_image():
    with pytest.raises(ZeroVarianceImage):
        detect(GreyImage(np.full((64, 64), 0.4)), CFG)


def test_detect_rescales_to_working_size():
    img = generate(SymmetrySpec("rotation", 4, 0.0, 44, size=128))
    r = detect(img, CFG)
    assert (r.order, r.symmetry_type) == (4, "rotation")


@pytest.mark.parametrize("turn", [90.0, 30.0])
def test_tilt_follows_image_rotation(turn):
    img = generate(SymmetrySpec("reflection", 1, 20.0, 8))
    before = detect(img, CFG)
    after = detect(rotate(img, turn), CFG)
    assert before.tilt_deg == 20.0
    assert after.order == 1 and after.tilt_deg is not None
    assert angular_distance(after.tilt_deg, before.tilt_deg + turn) <= 1.0


def test_detect_deterministic_across_workers(refl5):
    a = detect(refl5, DetectorConfig(workers=1))
    b = detect(refl5, DetectorConfig(workers=3))
    assert a.to_dict() == b.to_dict()
    assert np.array_equal(a.reflectional.values, b.reflectional.values)
