"""The three end-to-end fundus procedures: vessel segmentation, optic disc
localization, and exudate detection. Each is a deterministic function of an
RGB image and a PipelineConfig."""

from dataclasses import dataclass, asdict

import numpy as np

from .imgcore import (as_rgb, split_channels, to_gray, resize_bilinear,
                      subtract_saturating, logical_or, apply_circular_mask)
from .primitives import (asf, clahe, median_filter, threshold_mean,
                         filter_blobs, kmeans_intensity, brightest_cluster_mask,
                         quantize_to_centers, generate_disc_template,
                         match_template_nccoeff, best_match, canny)

# reference pixel count the exudate structure-size default is calibrated at
_EXU_REFERENCE_AREA = 4288 * 2848


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the three pipelines. Defaults reproduce the stock
    behavior; all values can come from a key = value config file."""
    asf_schedule: tuple = ((5, 5), (7, 7), (15, 15), (11, 11))
    asf_open_first: bool = False
    clahe_clip: float = 2.0
    clahe_grid: tuple = (8, 8)
    median_k: int = 3
    vessel_thresh_offset: float = 0.0
    vessel_max_blob: int = 1500
    vessel_prose_subtraction: bool = False
    od_working_size: tuple = (300, 300)
    od_kmeans_k: int = 5
    od_template_side: int = 51
    od_template_radius: int = 22
    od_mask_scale: float = 1.5
    exu_kmeans_k: int = 5
    exu_kmeans_channel: str = "gray"
    canny_sigma: float = 1.4
    canny_low: float = 50.0
    canny_high: float = 150.0
    exu_large_structure_area: int = 3000
    exu_bright_band: float = 0.92
    kmeans_max_iter: int = 100
    kmeans_tol: float = 1e-6
    random_seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class OdLocation:
    """center is (x, y) at the matching working resolution; center_full is
    the same point mapped back to the input image; radius is the matched
    disc radius in input-resolution pixels; score is the correlation peak."""
    center: tuple[int, int]
    center_full: tuple[int, int]
    radius: float
    score: float


def segment_vessels(img: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Vessel mask at input resolution.

    Green channel, contrast-limited equalization, morphological background
    estimate, saturating difference, a second equalization pass, median
    smoothing, mean thresholding, then component size filtering.
    """
    img = as_rgb(img)
    _, green, _ = split_channels(img)
    enhanced = clahe(green, cfg.clahe_clip, cfg.clahe_grid)
    background = asf(enhanced, cfg.asf_schedule, open_first=cfg.asf_open_first)
    if cfg.vessel_prose_subtraction:
        diff = subtract_saturating(enhanced, background)
    else:
        # vessels are darker than their surround, so background minus image
        # turns them into the bright structures the threshold keeps
        diff = subtract_saturating(background, enhanced)
    diff = clahe(diff, cfg.clahe_clip, cfg.clahe_grid)
    diff = median_filter(diff, cfg.median_k)
    mask = threshold_mean(diff, cfg.vessel_thresh_offset)
    return filter_blobs(mask, 0, cfg.vessel_max_blob)


def locate_optic_disc(img: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> OdLocation:
    """Bright-disc localization by template matching a quantized downscale.

    The image is resized to the working size, grayscaled, quantized to
    od_kmeans_k intensity clusters, and correlated with a synthetic bright
    disc; the correlation peak plus half the template size is the center.
    """
    img = as_rgb(img)
    ih, iw = img.shape[:2]
    ww, wh = cfg.od_working_size
    small = resize_bilinear(img, ww, wh)
    gray = to_gray(small)
    km = kmeans_intensity(gray, cfg.od_kmeans_k, cfg.kmeans_max_iter,
                          cfg.kmeans_tol, cfg.random_seed)
    quant = quantize_to_centers(km)
    tmpl = generate_disc_template(cfg.od_template_side, cfg.od_template_radius)
    rmap = match_template_nccoeff(quant, tmpl)
    x, y, score = best_match(rmap)
    half = (cfg.od_template_side - 1) // 2
    cx, cy = x + half, y + half

    sx = iw / ww
    sy = ih / wh
    fx = int(np.clip(round((cx + 0.5) * sx - 0.5), 0, iw - 1))
    fy = int(np.clip(round((cy + 0.5) * sy - 0.5), 0, ih - 1))
    radius = cfg.od_template_radius * (sx + sy) / 2.0
    return OdLocation(center=(cx, cy), center_full=(fx, fy),
                      radius=radius, score=score)


def mask_optic_disc(base: np.ndarray, od: OdLocation, scale: float = 1.5) -> np.ndarray:
    """Erase a circle of od.radius * scale around the located disc center.

    base must be at the resolution the location was computed for
    (center_full); masks are filled with False, grayscale with 0.
    """
    if scale < 1:
        raise ValueError("scale must be >= 1")
    fill = False if base.dtype == np.bool_ else 0
    return apply_circular_mask(base, od.center_full, od.radius * scale, fill)


def _exu_plane(img: np.ndarray, channel: str) -> np.ndarray:
    if channel == "gray":
        return to_gray(img)
    r, g, b = split_channels(img)
    try:
        return {"red": r, "green": g, "blue": b}[channel]
    except KeyError:
        raise ValueError(f"unknown clustering channel: {channel!r}") from None


def detect_exudates(img: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Bright-lesion mask at input resolution.

    Branch A: k-means on the intensity plane, keep the brightest cluster.
    Branch B: edges of the green channel, drop components bigger than the
    (resolution-scaled) structure limit, keep edge pixels in the top
    intensity band. The union is cleared around the located optic disc.
    """
    img = as_rgb(img)
    ih, iw = img.shape[:2]
    plane = _exu_plane(img, cfg.exu_kmeans_channel)
    km = kmeans_intensity(plane, cfg.exu_kmeans_k, cfg.kmeans_max_iter,
                          cfg.kmeans_tol, cfg.random_seed)
    if km.k >= 2:
        large = brightest_cluster_mask(km)
    else:
        # a single effective cluster means no bright/dark separation exists
        large = np.zeros(plane.shape, dtype=bool)

    _, green, _ = split_channels(img)
    edges = canny(green, cfg.canny_low, cfg.canny_high, cfg.canny_sigma)
    area_limit = max(1, round(cfg.exu_large_structure_area *
                              (ih * iw) / _EXU_REFERENCE_AREA))
    small_structs = filter_blobs(edges, 0, area_limit)
    gray = to_gray(img)
    band = gray > cfg.exu_bright_band * float(gray.max())
    small = small_structs & band

    combined = logical_or(large, small)
    od = locate_optic_disc(img, cfg)
    return mask_optic_disc(combined, od, cfg.od_mask_scale)
