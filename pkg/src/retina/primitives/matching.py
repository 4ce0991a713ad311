"""Disc template synthesis and normalized cross-correlation matching."""

from dataclasses import dataclass

import numpy as np

from ..imgcore import as_gray


@dataclass(frozen=True, eq=False)
class ResponseMap:
    """Correlation scores per template placement. scores is (height, width)
    float64 with every finite value in [-1, 1]; width = W - w + 1 and
    height = H - h + 1 for an image W x H and template w x h."""
    width: int
    height: int
    scores: np.ndarray


def generate_disc_template(side: int = 51, radius: int = 22,
                           fg: int = 255, bg: int = 0) -> np.ndarray:
    """side x side image of a filled circle (intensity fg) centered on a bg
    field. Membership is Euclidean distance <= radius from the center cell."""
    if side < 1:
        raise ValueError("side must be >= 1")
    if radius < 0 or side < 2 * radius + 1:
        raise ValueError("need side >= 2*radius + 1 and radius >= 0")
    c = (side - 1) / 2.0
    yy, xx = np.mgrid[:side, :side]
    inside = (xx - c) ** 2 + (yy - c) ** 2 <= float(radius) ** 2
    out = np.full((side, side), bg, dtype=np.uint8)
    out[inside] = fg
    return out


def _xcorr_valid(img_f: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Valid-mode cross-correlation via FFT (correlation = convolution with
    the flipped kernel)."""
    ih, iw = img_f.shape
    kh, kw = kernel.shape
    fh, fw = ih + kh - 1, iw + kw - 1
    fi = np.fft.rfft2(img_f, (fh, fw))
    fk = np.fft.rfft2(kernel[::-1, ::-1], (fh, fw))
    full = np.fft.irfft2(fi * fk, (fh, fw))
    return full[kh - 1:ih, kw - 1:iw]


def match_template_nccoeff(img: np.ndarray, tmpl: np.ndarray) -> ResponseMap:
    """Normalized correlation coefficient at every placement.

    Both the template and each image window are mean-subtracted before the
    normalized dot product, so scores live in [-1, 1]. Placements where the
    window or the template has zero variance score 0: flat regions carry no
    evidence either way.
    """
    img = as_gray(img)
    tmpl = as_gray(tmpl)
    ih, iw = img.shape
    th, tw = tmpl.shape
    if th > ih or tw > iw:
        raise ValueError("template must fit inside the image")
    n = th * tw
    img_f = img.astype(np.float64)
    tc = tmpl.astype(np.float64)
    tc = tc - tc.mean()
    tss = float(np.sum(tc * tc))

    oh, ow = ih - th + 1, iw - tw + 1
    if int(tmpl.min()) == int(tmpl.max()) or tss <= 0.0:
        return ResponseMap(width=ow, height=oh, scores=np.zeros((oh, ow)))

    # sum(tc) = 0, so sum(window * tc) already equals the mean-subtracted
    # numerator of the correlation coefficient
    num = _xcorr_valid(img_f, tc)

    # window sums and sums of squares from zero-padded integral images;
    # uint8 data keeps every entry an exact integer in float64
    s1 = np.zeros((ih + 1, iw + 1))
    s2 = np.zeros((ih + 1, iw + 1))
    np.cumsum(np.cumsum(img_f, axis=0), axis=1, out=s1[1:, 1:])
    np.cumsum(np.cumsum(img_f * img_f, axis=0), axis=1, out=s2[1:, 1:])
    wsum = s1[th:, tw:] - s1[:-th, tw:] - s1[th:, :-tw] + s1[:-th, :-tw]
    wssq = s2[th:, tw:] - s2[:-th, tw:] - s2[th:, :-tw] + s2[:-th, :-tw]
    # n * variance, exact in integer arithmetic: zero iff the window is flat
    var_n = wssq * n - wsum * wsum
    np.maximum(var_n, 0.0, out=var_n)

    denom = np.sqrt(var_n * (tss / n))
    flat = var_n == 0.0
    denom[flat] = 1.0
    scores = num / denom
    scores[flat] = 0.0
    np.clip(scores, -1.0, 1.0, out=scores)
    return ResponseMap(width=ow, height=oh, scores=scores)


def best_match(r: ResponseMap) -> tuple[int, int, float]:
    """Top-left placement (x, y) of the maximum score and the score itself.
    Ties go to the first occurrence in row-major order. Callers add half the
    template size to get the matched center."""
    if r.scores.size == 0:
        raise ValueError("empty response map")
    idx = int(np.argmax(r.scores))
    y, x = divmod(idx, r.scores.shape[1])
    return x, y, float(r.scores[y, x])
