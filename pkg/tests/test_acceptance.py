"""One test per numbered release criterion. Each test registers a PASS,
FAIL, or SKIP line with the terminal reporter so the run ends with a
one-line-per-criterion scoreboard. Dataset-backed criteria look for the
corpora via RETINA_DRIVE_ROOT / RETINA_IDRID_ROOT and fall back to their
synthetic stand-ins when unset."""

import math
import os
import time

import numpy as np
import pytest

from retina.cli import load_dataset, main, read_mask, read_rgb
from retina.dcnn import (adam_init, adam_step, bce_loss, reference_layers, sigmoid, trace_shapes,
                         validate_reference_layout)
from retina.eval import confusion, metrics, od_hit, od_reference
from retina.imgcore import to_gray
from retina.pipelines import (PipelineConfig, detect_exudates,
                              locate_optic_disc, segment_vessels)
from retina.primitives import (find_contours, kmeans_intensity,
                               make_elliptical_se, match_template_nccoeff,
                               median_filter, morph, shoelace_area)
from retina.synth import disc_scene, exudate_scene, stroke_scene

from conftest import record_acceptance
from oracles import (adam_oracle, bce_oracle, confusion_oracle,
                     kmeans_k2_oracle, median_oracle, nccoeff_oracle,
                     shoelace_oracle)

CFG = PipelineConfig()
DRIVE_ROOT = os.environ.get("RETINA_DRIVE_ROOT")
IDRID_ROOT = os.environ.get("RETINA_IDRID_ROOT")


def _finish(number, label, ok, detail):
    record_acceptance(number, label, "PASS" if ok else "FAIL", detail)
    assert ok, f"criterion {number}: {detail}"


# ----------------------------------------------------------- criterion 1

def test_criterion_1_drive_vessel_benchmark(tmp_path):
    label = "DRIVE vessel means + runtime"
    rgb, _ = stroke_scene(size=(565, 584), n_strokes=5, seed=11)
    segment_vessels(rgb, CFG)
    t0 = time.perf_counter()
    segment_vessels(rgb, CFG)
    per_image = time.perf_counter() - t0
    runtime_ok = per_image <= 10.0
    runtime_note = f"runtime {per_image:.2f} s/image (limit 10)"

    if DRIVE_ROOT is None:
        status = "SKIP" if runtime_ok else "FAIL"
        record_acceptance(1, label, status,
                          f"set RETINA_DRIVE_ROOT for the 20-image means; "
                          f"{runtime_note}")
        assert runtime_ok, runtime_note
        pytest.skip("DRIVE corpus not available")

    out = tmp_path / "pred"
    assert main(["vessels", "--input", DRIVE_ROOT, "--layout", "drive",
                 "--out", str(out)]) == 0
    csvpath = tmp_path / "scores.csv"
    assert main(["eval", "--pred", str(out),
                 "--gt", str(os.path.join(DRIVE_ROOT, "1st_manual")),
                 "--fov", str(os.path.join(DRIVE_ROOT, "mask")),
                 "--out", str(csvpath)]) == 0
    mean = csvpath.read_text().splitlines()[-1].split(",")
    acc, spec, sens, dice = (float(v) for v in mean[1:5])
    # accuracy/specificity/sensitivity are percent scale, dice a fraction
    ok = (runtime_ok and acc >= 94.0 and spec >= 97.0
          and sens >= 65.0 and dice >= 0.70)
    _finish(1, label, ok,
            f"acc={acc:.2f}% spec={spec:.2f}% sens={sens:.2f}% "
            f"dice={dice:.4f}; {runtime_note}")


# ----------------------------------------------------------- criterion 2

def test_criterion_2_od_localization():
    label = "optic disc localization"
    rng = np.random.default_rng(77)
    hits = 0
    worst = 0.0
    for i in range(50):
        radius = float(rng.uniform(18, 26))
        rgb, center = disc_scene(radius=radius, noise_sigma=8.0, seed=500 + i)
        od = locate_optic_disc(rgb, CFG)
        err = math.hypot(od.center_full[0] - center[0],
                         od.center_full[1] - center[1])
        worst = max(worst, err)
        hits += err <= 5.0
    synth_ok = hits == 50
    synth_note = f"synthetic {hits}/50 within 5 px (worst {worst:.2f})"

    if IDRID_ROOT is None:
        _finish(2, label, synth_ok, synth_note + "; IDRiD unset, "
                "synthetic fallback is the criterion")
        return

    items = load_dataset(IDRID_ROOT, "idrid-seg")
    scored = 0
    ok_count = 0
    for item in items:
        if item.gt_od_mask_path is None:
            continue
        gt = read_mask(item.gt_od_mask_path)
        center, radius = od_reference(gt)
        od = locate_optic_disc(read_rgb(item.image_path), CFG)
        scored += 1
        ok_count += od_hit(od, center, radius)
    ok = synth_ok and scored >= 81 and ok_count >= 76
    _finish(2, label, ok, f"IDRiD {ok_count}/{scored} hits; {synth_note}")


# ----------------------------------------------------------- criterion 3

def test_criterion_3_exudate_recall_and_clean_od():
    label = "exudate recall + masked OD clean"
    rng = np.random.default_rng(31)
    tp = 0
    total = 0
    leaked = 0
    for i in range(25):
        n_blobs = int(rng.integers(8, 13))
        rgb, _, _, blobs = exudate_scene(n_blobs=n_blobs, seed=900 + i)
        out = detect_exudates(rgb, CFG)
        tp += np.count_nonzero(out & blobs)
        total += np.count_nonzero(blobs)
        od = locate_optic_disc(rgb, CFG)
        yy, xx = np.mgrid[0:rgb.shape[0], 0:rgb.shape[1]]
        rr = (xx - od.center_full[0]) ** 2 + (yy - od.center_full[1]) ** 2
        leaked += np.count_nonzero(out & (rr <= (od.radius * CFG.od_mask_scale) ** 2))
    recall = tp / total
    ok = recall >= 0.85 and leaked == 0
    _finish(3, label, ok,
            f"pooled recall {recall:.3f} over 25 scenes; "
            f"{leaked} px inside masked circle")


# ----------------------------------------------------------- criterion 4

def test_criterion_4_oracle_equivalence():
    label = "primitive oracle equivalence"
    rng = np.random.default_rng(4242)
    notes = []

    for trial in range(120):
        h, w = rng.integers(5, 13, size=2)
        img = rng.integers(0, 256, (h, w), np.uint8)
        k = int(rng.choice([3, 5]))
        assert np.array_equal(median_filter(img, k), median_oracle(img, k))
    notes.append("median 120 exact")

    worst_ncc = 0.0
    for trial in range(100):
        ih, iw = rng.integers(8, 15, size=2)
        th, tw = rng.integers(3, 6, size=2)
        img = rng.integers(0, 256, (ih, iw), np.uint8)
        tmpl = rng.integers(0, 256, (th, tw), np.uint8)
        got = match_template_nccoeff(img, tmpl).scores
        want = nccoeff_oracle(img, tmpl)
        worst_ncc = max(worst_ncc, float(np.max(np.abs(got - want))))
    assert worst_ncc <= 1e-6
    notes.append(f"ncc 100 (max abs diff {worst_ncc:.1e})")

    for trial in range(120):
        pred = rng.random((8, 8)) < 0.5
        gt = rng.random((8, 8)) < 0.5
        roi = (rng.random((8, 8)) < 0.8) if trial % 2 else None
        got = confusion(pred, gt, roi)
        want = confusion_oracle(pred, gt, roi)
        assert (got.tp, got.tn, got.fp, got.fn) == want
    notes.append("confusion 120 exact")

    worst_km = 0.0
    for trial in range(120):
        img = rng.integers(0, 256, (6, 6), np.uint8)
        got = kmeans_intensity(img, 2).objective
        want = kmeans_k2_oracle(img)
        rel = abs(got - want) / max(want, 1e-12)
        worst_km = max(worst_km, rel)
    assert worst_km <= 1e-6
    notes.append(f"kmeans obj 120 (max rel {worst_km:.1e})")

    n_contours = 0
    for trial in range(40):
        mask = rng.random((14, 14)) < 0.35
        for contour in find_contours(mask):
            assert shoelace_area(contour.points) == pytest.approx(
                shoelace_oracle(contour.points), abs=1e-9)
            n_contours += 1
    assert n_contours >= 100
    notes.append(f"shoelace {n_contours} chains")

    worst_adam = 0.0
    for trial in range(100):
        n = int(rng.integers(1, 6))
        params = rng.normal(size=n)
        grads = [rng.normal(size=n), rng.normal(size=n)]
        state = adam_init(n)
        p = params
        for g in grads:
            p, state = adam_step(p, g, state)
        want = adam_oracle(params, grads)
        worst_adam = max(worst_adam, float(np.max(np.abs(p - want))))
    assert worst_adam <= 1e-12
    notes.append(f"adam 100 (max abs {worst_adam:.1e})")

    worst_bce = 0.0
    for trial in range(100):
        m = int(rng.integers(1, 9))
        y = rng.integers(0, 2, m).astype(float)
        p = rng.uniform(0.01, 0.99, m)
        got = bce_loss(y, p)
        worst_bce = max(worst_bce, abs(got - bce_oracle(y, p)))
    assert worst_bce <= 1e-12
    notes.append(f"bce 100 (max abs {worst_bce:.1e})")

    _finish(4, label, True, "; ".join(notes))


# ----------------------------------------------------------- criterion 5

def test_criterion_5_invariant_suite():
    label = "invariant suite"
    rng = np.random.default_rng(55)
    se = make_elliptical_se(5, 5)
    for trial in range(10):
        img = rng.integers(0, 256, (16, 16), np.uint8)
        er, di = morph(img, "erode", se), morph(img, "dilate", se)
        assert np.array_equal(di, 255 - morph(255 - img, "erode", se))
        assert (er <= img).all() and (img <= di).all()
        assert (morph(img, "open", se) <= img).all()
        assert (img <= morph(img, "close", se)).all()

    img = rng.integers(0, 256, (20, 20), np.uint8)
    objectives = [kmeans_intensity(img, k).objective for k in (1, 2, 3, 4, 6)]
    assert all(b <= a + 1e-9 for a, b in zip(objectives, objectives[1:]))

    big = rng.integers(0, 256, (24, 24), np.uint8)
    tmpl = big[5:13, 7:16].copy()
    rmap = match_template_nccoeff(big, tmpl)
    assert float(np.min(rmap.scores)) >= -1.0 - 1e-9
    assert float(np.max(rmap.scores)) <= 1.0 + 1e-9
    assert rmap.scores[5, 7] == pytest.approx(1.0, abs=1e-6)

    xs = np.linspace(-6, 6, 25)
    h = 1e-5
    fd = (sigmoid(xs + h) - sigmoid(xs - h)) / (2 * h)
    assert np.max(np.abs(fd - sigmoid(xs) * (1 - sigmoid(xs)))) <= 1e-6

    assert bce_loss(np.array([1.0]), np.array([0.5])) == \
        pytest.approx(math.log(2), abs=1e-9)

    a = rng.random((12, 12)) < 0.4
    b = rng.random((12, 12)) < 0.4
    assert metrics(confusion(a, b)).dice == pytest.approx(
        metrics(confusion(b, a)).dice, abs=1e-12)

    _finish(5, label, True, "duality/ordering, monotone kmeans, ncc bounds, "
            "sigmoid fd, bce ln2, dice symmetry")


# ----------------------------------------------------------- criterion 6

def test_criterion_6_shape_trace():
    label = "classifier shape trace"
    layers = reference_layers()
    validate_reference_layout(layers)
    trace = trace_shapes((300, 300, 3), layers)
    spatial = []
    for row in trace.rows:
        if len(row.shape) == 3 and (not spatial or row.shape[0] != spatial[-1]):
            spatial.append(row.shape[0])
    ok = spatial[:4] == [300, 150, 75, 37]
    _finish(6, label, ok,
            f"spatial {'->'.join(str(s) for s in spatial[:4])}, "
            f"total params {trace.total_params:,}")


# ----------------------------------------------------------- criterion 7

def _drive_like_corpus(tmp_path):
    from retina.cli import write_mask, write_rgb
    root = tmp_path / "corpus"
    (root / "images").mkdir(parents=True)
    (root / "1st_manual").mkdir()
    (root / "mask").mkdir()
    for i in range(1, 4):
        rgb, mask = stroke_scene(size=(565, 584), n_strokes=4, seed=70 + i)
        write_rgb(root / "images" / f"{i:02d}_test.png", rgb)
        write_mask(root / "1st_manual" / f"{i:02d}_manual1.png", mask)
        write_mask(root / "mask" / f"{i:02d}_test_mask.png",
                   np.ones(mask.shape, bool))
    return str(root)


def test_criterion_7_byte_identical_reruns(tmp_path):
    label = "deterministic reruns"
    if DRIVE_ROOT is not None:
        corpus, note = DRIVE_ROOT, "DRIVE corpus"
    else:
        corpus = _drive_like_corpus(tmp_path)
        note = "synthetic drive-layout corpus (RETINA_DRIVE_ROOT unset)"
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert main(["vessels", "--input", corpus, "--layout", "drive",
                     "--out", str(out)]) == 0
        outs.append(out)
    names = sorted(p.name for p in outs[0].iterdir()
                   if p.suffix in (".png", ".csv"))
    diffs = [n for n in names
             if (outs[0] / n).read_bytes() != (outs[1] / n).read_bytes()]
    ok = not diffs and len(names) >= 7
    _finish(7, label, ok, f"{len(names)} files byte-identical on {note}"
            + (f"; differing: {diffs}" if diffs else ""))
