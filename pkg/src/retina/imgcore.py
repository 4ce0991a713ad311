"""Image containers and the arithmetic shared by all pipelines.

Images are plain numpy arrays: RGB images are (H, W, 3) uint8, grayscale
images are (H, W) uint8, binary masks are (H, W) bool with True = foreground.
All functions are pure: they never mutate their inputs.
"""

import numpy as np

# ITU-R 601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])


def as_rgb(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise ValueError("expected (H, W, 3) uint8 RGB image")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image must have at least one pixel")
    return img


def as_gray(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("expected (H, W) uint8 grayscale image")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image must have at least one pixel")
    return img


def as_mask(mask: np.ndarray) -> np.ndarray:
    mask = np.asarray(mask)
    if mask.ndim != 2 or mask.dtype != np.bool_:
        raise ValueError("expected (H, W) bool mask")
    return mask


def split_channels(img: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an RGB image into its red, green and blue planes."""
    img = as_rgb(img)
    return img[..., 0].copy(), img[..., 1].copy(), img[..., 2].copy()


def merge_channels(r: np.ndarray, g: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Inverse of split_channels."""
    if r.shape != g.shape or g.shape != b.shape:
        raise ValueError("channel planes must share dimensions")
    return np.stack([as_gray(r), as_gray(g), as_gray(b)], axis=-1)


def to_gray(img: np.ndarray) -> np.ndarray:
    """Luma grayscale: round(0.299 r + 0.587 g + 0.114 b), clamped to [0, 255]."""
    img = as_rgb(img)
    luma = img.astype(np.float64) @ _LUMA
    return np.clip(np.rint(luma), 0, 255).astype(np.uint8)


def resize_bilinear(img: np.ndarray, w: int, h: int) -> np.ndarray:
    """Resize to (w, h) with bilinear interpolation over half-pixel centers.

    Works on grayscale and RGB images alike; resizing to the source size
    returns a pixel-identical copy.
    """
    if w < 1 or h < 1:
        raise ValueError("target dimensions must be >= 1")
    img = np.asarray(img)
    src_h, src_w = img.shape[:2]
    if (w, h) == (src_w, src_h):
        return img.copy()

    xs = (np.arange(w) + 0.5) * (src_w / w) - 0.5
    ys = (np.arange(h) + 0.5) * (src_h / h) - 0.5
    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = xs - x0
    fy = ys - y0
    x0 = np.clip(x0.astype(np.int64), 0, src_w - 1)
    y0 = np.clip(y0.astype(np.int64), 0, src_h - 1)
    x1 = np.minimum(x0 + 1, src_w - 1)
    y1 = np.minimum(y0 + 1, src_h - 1)

    data = img.astype(np.float64)
    if img.ndim == 3:
        fx = fx[None, :, None]
        fy = fy[:, None, None]
    else:
        fx = fx[None, :]
        fy = fy[:, None]
    top = (1.0 - fx) * data[y0][:, x0] + fx * data[y0][:, x1]
    bot = (1.0 - fx) * data[y1][:, x0] + fx * data[y1][:, x1]
    out = (1.0 - fy) * top + fy * bot
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def subtract_saturating(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-pixel max(a - b, 0)."""
    a = as_gray(a)
    b = as_gray(b)
    if a.shape != b.shape:
        raise ValueError("images must share dimensions")
    return np.maximum(a.astype(np.int16) - b.astype(np.int16), 0).astype(np.uint8)


def logical_or(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-pixel disjunction of two masks."""
    a = as_mask(a)
    b = as_mask(b)
    if a.shape != b.shape:
        raise ValueError("masks must share dimensions")
    return a | b


def apply_circular_mask(img: np.ndarray, center: tuple[float, float],
                        radius: float, fill) -> np.ndarray:
    """Set every pixel within Euclidean distance <= radius of center to fill.

    center is (x, y) and may lie anywhere, including outside the image;
    the off-image portion of the circle is ignored.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    img = np.asarray(img)
    h, w = img.shape[:2]
    cx, cy = center
    yy, xx = np.ogrid[:h, :w]
    inside = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius
    out = img.copy()
    out[inside] = fill
    return out
