"""Flat grayscale morphology: elliptical structuring elements, the four basic
operators, and the alternating open/close cascade used for background
estimation."""

from dataclasses import dataclass

import numpy as np

from ..imgcore import as_gray


@dataclass(frozen=True, eq=False)
class StructuringElement:
    """Boolean neighborhood with its anchor cell.

    mask is (height, width); anchor is the (row, col) of the origin cell and
    is always a set cell.
    """
    width: int
    height: int
    mask: np.ndarray
    anchor: tuple[int, int]


def make_elliptical_se(w: int, h: int) -> StructuringElement:
    """Filled discrete ellipse with semi-axes (w-1)/2 and (h-1)/2.

    A cell (dx, dy) about the center is set iff (dx/a)^2 + (dy/b)^2 <= 1,
    evaluated in integer arithmetic as (dx*b)^2 + (dy*a)^2 <= (a*b)^2 so the
    rule has no rounding ambiguity. For (3, 3) this gives the 5-cell plus
    shape: the corners land at 2 > 1.
    """
    if w < 1 or h < 1 or w % 2 == 0 or h % 2 == 0:
        raise ValueError("structuring element sides must be odd and >= 1")
    a = (w - 1) // 2
    b = (h - 1) // 2
    dy, dx = np.mgrid[-b:b + 1, -a:a + 1]
    mask = (dx * b) ** 2 + (dy * a) ** 2 <= (a * b) ** 2
    return StructuringElement(width=w, height=h, mask=mask, anchor=(b, a))


def _min_or_max(img: np.ndarray, se: StructuringElement, take_max: bool) -> np.ndarray:
    img = as_gray(img)
    dys, dxs = np.nonzero(se.mask)
    dys = dys - se.anchor[0]
    dxs = dxs - se.anchor[1]
    if take_max:
        # dilation reflects the structuring element about its anchor
        dys, dxs = -dys, -dxs
    top = max(0, -int(dys.min()))
    bottom = max(0, int(dys.max()))
    left = max(0, -int(dxs.min()))
    right = max(0, int(dxs.max()))
    padded = np.pad(img, ((top, bottom), (left, right)), mode="edge")
    h, w = img.shape
    pick = np.maximum if take_max else np.minimum
    out = None
    for dy, dx in zip(dys, dxs):
        view = padded[top + dy:top + dy + h, left + dx:left + dx + w]
        out = view.copy() if out is None else pick(out, view, out=out)
    return out


def morph(img: np.ndarray, op: str, se: StructuringElement) -> np.ndarray:
    """Apply erode, dilate, open, or close with edge-replicated borders."""
    if op == "erode":
        return _min_or_max(img, se, take_max=False)
    if op == "dilate":
        return _min_or_max(img, se, take_max=True)
    if op == "open":
        return _min_or_max(_min_or_max(img, se, False), se, True)
    if op == "close":
        return _min_or_max(_min_or_max(img, se, True), se, False)
    raise ValueError(f"unknown morphological operation: {op!r}")


def asf(img: np.ndarray, schedule=((5, 5), (7, 7), (15, 15), (11, 11)),
        open_first: bool = False) -> np.ndarray:
    """Alternating filter cascade: per schedule entry, closing then opening
    with the elliptical element of that (w, h) size.

    open_first flips the per-entry order for comparison runs.
    """
    schedule = tuple(schedule)
    if not schedule:
        raise ValueError("schedule must not be empty")
    out = as_gray(img)
    for w, h in schedule:
        se = make_elliptical_se(w, h)
        if open_first:
            out = morph(morph(out, "open", se), "close", se)
        else:
            out = morph(morph(out, "close", se), "open", se)
    return out
