import numpy as np
import pytest

from retina.primitives import clahe, median_filter, threshold_mean
from oracles import clahe_oracle, median_oracle


def test_clahe_constant_image_all_equal():
    img = np.full((32, 32), 90, np.uint8)
    out = clahe(img, 2.0, (4, 4))
    assert len(np.unique(out)) == 1


def test_clahe_preserves_two_value_ordering():
    img = np.full((32, 32), 60, np.uint8)
    img[:, 16:] = 180
    out = clahe(img, 2.0, (4, 4))
    dark = out[:, :16].max()
    bright = out[:, 16:].min()
    assert dark <= bright


def test_clahe_ramp_span_not_compressed():
    ramp = np.tile((np.arange(64) * 255 // 63).astype(np.uint8), (64, 1))
    out = clahe(ramp, 2.0, (8, 8))
    in_span = int(ramp.max()) - int(ramp.min())
    out_span = int(out.max()) - int(out.min())
    assert out_span >= in_span


def test_clahe_matches_scalar_oracle(rng):
    for grid in ((2, 2), (4, 3), (8, 8)):
        img = rng.integers(0, 256, (32, 40), np.uint8)
        got = clahe(img, 2.0, grid)
        want = clahe_oracle(img, 2.0, grid)
        assert np.array_equal(got, want), f"grid {grid}"


def test_clahe_odd_sized_image(rng):
    # tiles of uneven size still cover the image exactly
    img = rng.integers(0, 256, (37, 29), np.uint8)
    got = clahe(img, 3.0, (5, 4))
    assert np.array_equal(got, clahe_oracle(img, 3.0, (5, 4)))


def test_clahe_rejects_image_smaller_than_grid():
    with pytest.raises(ValueError):
        clahe(np.zeros((4, 4), np.uint8), 2.0, (8, 8))
    with pytest.raises(ValueError):
        clahe(np.zeros((8, 8), np.uint8), 2.0, (0, 2))
    with pytest.raises(ValueError):
        clahe(np.zeros((8, 8), np.uint8), 0.0, (2, 2))


def test_median_k1_identity(rng):
    img = rng.integers(0, 256, (9, 9), np.uint8)
    assert np.array_equal(median_filter(img, 1), img)


def test_median_removes_salt_pixel():
    img = np.full((7, 7), 10, np.uint8)
    img[3, 3] = 255
    assert (median_filter(img, 3) == 10).all()


def test_median_matches_sort_oracle(rng):
    for k in (3, 5):
        img = rng.integers(0, 256, (16, 16), np.uint8)
        assert np.array_equal(median_filter(img, k), median_oracle(img, k))


def test_median_rejects_even_k():
    with pytest.raises(ValueError):
        median_filter(np.zeros((4, 4), np.uint8), 2)


def test_threshold_mean_constant_empty():
    img = np.full((6, 6), 40, np.uint8)
    assert not threshold_mean(img, 0.0).any()


def test_threshold_mean_two_level():
    img = np.zeros((4, 4), np.uint8)
    img[:2] = 200
    out = threshold_mean(img, 0.0)
    assert np.array_equal(out, img == 200)


def test_threshold_mean_offset_below_min_gives_full():
    img = np.zeros((5, 5), np.uint8)
    assert threshold_mean(img, -256.0).all()


def test_threshold_mean_permutation_covariance(rng):
    # shuffling pixels shuffles the mask identically: only the multiset of
    # intensities and each pixel's own value matter
    img = rng.integers(0, 256, (6, 6), np.uint8)
    perm = rng.permutation(36)
    shuffled = img.ravel()[perm].reshape(6, 6)
    base = threshold_mean(img, 5.0).ravel()
    assert np.array_equal(threshold_mean(shuffled, 5.0).ravel(), base[perm])
