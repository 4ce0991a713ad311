import numpy as np
import pytest

from retina.primitives import (generate_disc_template, match_template_nccoeff,
                               best_match, ResponseMap)
from oracles import nccoeff_oracle, disc_count_oracle


def test_template_radius_zero_single_pixel():
    t = generate_disc_template(side=5, radius=0, fg=200, bg=10)
    assert t[2, 2] == 200
    assert np.count_nonzero(t == 200) == 1


def test_template_fg_equals_bg_constant():
    t = generate_disc_template(side=9, radius=3, fg=80, bg=80)
    assert (t == 80).all()


def test_template_count_matches_lattice_oracle():
    t = generate_disc_template()
    c = (51 - 1) / 2.0
    want = disc_count_oracle((51, 51), (c, c), 22)
    assert t.shape == (51, 51)
    assert np.count_nonzero(t == 255) == want


def test_template_rejects_oversized_radius():
    with pytest.raises(ValueError):
        generate_disc_template(side=11, radius=6)


def test_response_map_dimensions(rng):
    img = rng.integers(0, 256, (20, 17), np.uint8)
    tmpl = rng.integers(0, 256, (5, 4), np.uint8)
    r = match_template_nccoeff(img, tmpl)
    assert (r.width, r.height) == (17 - 4 + 1, 20 - 5 + 1)
    assert r.scores.shape == (r.height, r.width)


def test_scores_bounded(rng):
    img = rng.integers(0, 256, (24, 24), np.uint8)
    tmpl = rng.integers(0, 256, (6, 6), np.uint8)
    r = match_template_nccoeff(img, tmpl)
    assert (r.scores >= -1.0).all() and (r.scores <= 1.0).all()


def test_exact_crop_scores_one(rng):
    img = rng.integers(0, 256, (30, 30), np.uint8)
    x0, y0 = 7, 11
    tmpl = img[y0:y0 + 9, x0:x0 + 9]
    r = match_template_nccoeff(img, tmpl)
    assert r.scores[y0, x0] == pytest.approx(1.0, abs=1e-6)


def test_inverted_crop_scores_minus_one(rng):
    img = rng.integers(0, 256, (25, 25), np.uint8)
    x0, y0 = 4, 9
    tmpl = (255 - img[y0:y0 + 8, x0:x0 + 8]).astype(np.uint8)
    r = match_template_nccoeff(img, tmpl)
    assert r.scores[y0, x0] == pytest.approx(-1.0, abs=1e-6)


def test_matches_double_loop_oracle(rng):
    for _ in range(10):
        img = rng.integers(0, 256, (12, 12), np.uint8)
        tmpl = rng.integers(0, 256, (3, 3), np.uint8)
        got = match_template_nccoeff(img, tmpl).scores
        want = nccoeff_oracle(img, tmpl)
        assert np.allclose(got, want, atol=1e-9)


def test_flat_template_all_zero(rng):
    img = rng.integers(0, 256, (10, 10), np.uint8)
    tmpl = np.full((3, 3), 7, np.uint8)
    assert not match_template_nccoeff(img, tmpl).scores.any()


def test_flat_window_scores_zero():
    img = np.zeros((10, 10), np.uint8)
    img[6:, 6:] = 250
    tmpl = np.zeros((3, 3), np.uint8)
    tmpl[1, 1] = 255
    r = match_template_nccoeff(img, tmpl)
    assert r.scores[0, 0] == 0.0


def test_template_larger_than_image_rejected():
    with pytest.raises(ValueError):
        match_template_nccoeff(np.zeros((4, 4), np.uint8),
                               np.zeros((5, 5), np.uint8))


def test_best_match_single_cell():
    r = ResponseMap(width=1, height=1, scores=np.array([[0.25]]))
    assert best_match(r) == (0, 0, 0.25)


def test_best_match_planted_max():
    scores = np.zeros((10, 10))
    scores[3, 7] = 0.9
    r = ResponseMap(width=10, height=10, scores=scores)
    assert best_match(r) == (7, 3, 0.9)


def test_best_match_tie_row_major():
    r = ResponseMap(width=6, height=4, scores=np.full((4, 6), 0.5))
    x, y, s = best_match(r)
    assert (x, y) == (0, 0)


def test_best_match_empty_rejected():
    r = ResponseMap(width=0, height=0, scores=np.zeros((0, 0)))
    with pytest.raises(ValueError):
        best_match(r)
