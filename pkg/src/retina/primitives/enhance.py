"""Intensity enhancement: tile-based contrast-limited equalization, median
filtering, and global mean thresholding."""

import numpy as np

from ..imgcore import as_gray


def _tile_lut(tile: np.ndarray, clip_limit: float) -> np.ndarray:
    """Clipped-histogram equalization transfer function for one tile."""
    area = tile.size
    hist = np.bincount(tile.ravel(), minlength=256).astype(np.int64)
    limit = max(1, int(clip_limit * area / 256.0))
    excess = int((hist - limit)[hist > limit].sum())
    hist = np.minimum(hist, limit)
    # spread the clipped mass evenly; the remainder goes one per bin from 0
    hist += excess // 256
    hist[:excess % 256] += 1
    cdf = np.cumsum(hist)
    cdf_min = int(cdf[np.flatnonzero(hist)[0]])
    denom = area - cdf_min
    if denom <= 0:
        return np.arange(256, dtype=np.uint8)
    lut = np.rint((cdf - cdf_min) * (255.0 / denom))
    return np.clip(lut, 0, 255).astype(np.uint8)


def clahe(img: np.ndarray, clip_limit: float = 2.0,
          grid: tuple[int, int] = (8, 8)) -> np.ndarray:
    """Contrast-limited adaptive histogram equalization.

    grid is (tiles_x, tiles_y). Each tile gets a clipped-histogram
    equalization map; every pixel is remapped by bilinear interpolation of
    the four surrounding tile maps (clamped at the borders).
    """
    img = as_gray(img)
    gx, gy = grid
    if gx < 1 or gy < 1:
        raise ValueError("grid must be at least 1x1")
    if clip_limit <= 0:
        raise ValueError("clip_limit must be > 0")
    h, w = img.shape
    if h < gy or w < gx:
        raise ValueError("image smaller than the tile grid")

    xe = (np.arange(gx + 1) * w) // gx
    ye = (np.arange(gy + 1) * h) // gy
    luts = np.empty((gy, gx, 256), dtype=np.float64)
    for ty in range(gy):
        for tx in range(gx):
            tile = img[ye[ty]:ye[ty + 1], xe[tx]:xe[tx + 1]]
            luts[ty, tx] = _tile_lut(tile, clip_limit)

    def _axis_weights(edges, n, tiles):
        centers = (edges[:-1] + edges[1:] - 1) / 2.0
        pos = np.arange(n, dtype=np.float64)
        hi = np.searchsorted(centers, pos, side="right")
        lo = np.clip(hi - 1, 0, tiles - 1)
        hi = np.clip(hi, 0, tiles - 1)
        span = centers[hi] - centers[lo]
        frac = np.where(span > 0, (pos - centers[lo]) / np.where(span > 0, span, 1.0), 0.0)
        return lo, hi, frac

    x0, x1, wx = _axis_weights(xe, w, gx)
    y0, y1, wy = _axis_weights(ye, h, gy)

    v00 = luts[y0[:, None], x0[None, :], img]
    v01 = luts[y0[:, None], x1[None, :], img]
    v10 = luts[y1[:, None], x0[None, :], img]
    v11 = luts[y1[:, None], x1[None, :], img]
    wx = wx[None, :]
    wy = wy[:, None]
    top = (1.0 - wx) * v00 + wx * v01
    bot = (1.0 - wx) * v10 + wx * v11
    out = (1.0 - wy) * top + wy * bot
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def median_filter(img: np.ndarray, k: int = 3) -> np.ndarray:
    """k x k median with edge-replicated borders. k must be odd."""
    img = as_gray(img)
    if k < 1 or k % 2 == 0:
        raise ValueError("median window size must be odd and >= 1")
    if k == 1:
        return img.copy()
    r = k // 2
    padded = np.pad(img, r, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, (k, k))
    # odd sample count, so the median is an exact array element
    return np.median(windows, axis=(2, 3)).astype(np.uint8)


def threshold_mean(img: np.ndarray, offset: float = 0.0) -> np.ndarray:
    """Foreground where pixel > mean(img) + offset (strict, so constant
    images give an empty mask)."""
    img = as_gray(img)
    return img > (float(img.mean()) + offset)
