"""Synthetic fundus-like phantoms with known ground truth, used by the test
suite and the demo script. All generators are deterministic given a seed."""

import numpy as np


def _noisy(plane: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    if sigma <= 0:
        return np.clip(np.rint(plane), 0, 255).astype(np.uint8)
    noisy = plane + rng.normal(0.0, sigma, plane.shape)
    return np.clip(np.rint(noisy), 0, 255).astype(np.uint8)


def _disc(shape: tuple[int, int], center: tuple[float, float], radius: float) -> np.ndarray:
    h, w = shape
    yy, xx = np.ogrid[:h, :w]
    return (xx - center[0]) ** 2 + (yy - center[1]) ** 2 <= radius * radius


def disc_scene(size: tuple[int, int] = (300, 300), radius: float = 22.0,
               center: tuple[float, float] | None = None, bg: int = 40,
               disc: int = 230, noise_sigma: float = 8.0, seed: int = 0):
    """Reddish flat background with one planted bright disc.

    Returns (rgb image, center (x, y)). When center is None it is drawn
    uniformly with a margin keeping the disc fully inside.
    """
    w, h = size
    rng = np.random.default_rng(seed)
    if center is None:
        margin = int(np.ceil(radius)) + 4
        center = (float(rng.integers(margin, w - margin)),
                  float(rng.integers(margin, h - margin)))
    inside = _disc((h, w), center, radius)
    chans = []
    for bg_c, disc_c in ((bg + 20, disc), (bg, disc - 15), (bg - 20, disc - 45)):
        plane = np.full((h, w), float(np.clip(bg_c, 0, 255)))
        plane[inside] = np.clip(disc_c, 0, 255)
        chans.append(_noisy(plane, noise_sigma, rng))
    return np.stack(chans, axis=-1), center


def exudate_scene(size: tuple[int, int] = (400, 400), n_blobs: int = 10,
                  seed: int = 0):
    """Dark background, one large bright disc standing in for the optic
    disc, and n_blobs small bright lesions.

    Returns (rgb image, od_center, od_radius, blob_mask) where blob_mask
    marks exactly the planted lesion pixels.
    """
    w, h = size
    rng = np.random.default_rng(seed)
    od_radius = float(rng.uniform(30, 38))
    margin = int(od_radius) + 8
    od_center = (float(rng.integers(margin, w - margin)),
                 float(rng.integers(margin, h - margin)))

    blob_mask = np.zeros((h, w), dtype=bool)
    centers = []
    tries = 0
    while len(centers) < n_blobs and tries < 2000:
        tries += 1
        r = float(rng.uniform(3.0, 6.0))
        cx = float(rng.integers(12, w - 12))
        cy = float(rng.integers(12, h - 12))
        d_od = np.hypot(cx - od_center[0], cy - od_center[1])
        # lesions stay clear of the masked disc region and of each other
        if d_od < od_radius * 2.6 + r:
            continue
        if any(np.hypot(cx - px, cy - py) < r + pr + 6 for px, py, pr in centers):
            continue
        centers.append((cx, cy, r))
        blob_mask |= _disc((h, w), (cx, cy), r)

    od_disc = _disc((h, w), od_center, od_radius)
    chans = []
    for bg_c, od_c, blob_c in ((34, 252, 255), (22, 240, 246), (14, 228, 232)):
        plane = np.full((h, w), float(bg_c))
        plane[od_disc] = od_c
        plane[blob_mask] = blob_c
        chans.append(_noisy(plane, 3.0, rng))
    return np.stack(chans, axis=-1), od_center, od_radius, blob_mask


def stroke_scene(size: tuple[int, int] = (256, 256), n_strokes: int = 5,
                 width: int = 3, seed: int = 0):
    """Bright background crossed by dark curvilinear strokes of the given
    width. Returns (rgb image, stroke_mask).

    Each stroke lives in its own horizontal band so strokes never merge;
    a merged network can exceed the default blob-size cutoff of the vessel
    chain, which is a config question, not a recall one."""
    w, h = size
    rng = np.random.default_rng(seed)
    mask = np.zeros((h, w), dtype=bool)
    band = h // n_strokes
    pad = width + 3
    for i in range(n_strokes):
        y_lo = i * band + pad
        y_hi = (i + 1) * band - pad
        if y_hi <= y_lo:
            raise ValueError("too many strokes for the image height")
        # horizontal quadratic curve wiggling inside the band
        p0 = np.array([10.0, rng.uniform(y_lo, y_hi)])
        p2 = np.array([w - 10.0, rng.uniform(y_lo, y_hi)])
        mid = np.array([rng.uniform(w * 0.3, w * 0.7), rng.uniform(y_lo, y_hi)])
        t = np.linspace(0.0, 1.0, 600)[:, None]
        pts = ((1 - t) ** 2) * p0 + 2 * t * (1 - t) * mid + (t ** 2) * p2
        xs = np.clip(np.rint(pts[:, 0]), 0, w - 1).astype(int)
        ys = np.clip(np.rint(pts[:, 1]), 0, h - 1).astype(int)
        mask[ys, xs] = True
    r = width // 2
    if r > 0:
        grown = mask.copy()
        for dy in range(-r, r + 1):
            for dx in range(-r, r + 1):
                if dx * dx + dy * dy > r * r + 1:
                    continue
                shifted = np.zeros_like(mask)
                ys0, ys1 = max(0, dy), min(h, h + dy)
                xs0, xs1 = max(0, dx), min(w, w + dx)
                shifted[ys0:ys1, xs0:xs1] = mask[max(0, -dy):h - max(0, dy),
                                                 max(0, -dx):w - max(0, dx)]
                grown |= shifted
        mask = grown

    chans = []
    for bg_c, stroke_c in ((150, 110), (200, 120), (130, 100)):
        plane = np.full((h, w), float(bg_c))
        plane[mask] = stroke_c
        chans.append(np.clip(np.rint(plane), 0, 255).astype(np.uint8))
    return np.stack(chans, axis=-1), mask
