"""Pixel-level segmentation metrics and the disc-localization hit test."""

from dataclasses import dataclass

import numpy as np

from .imgcore import as_mask
from .pipelines import OdLocation


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricsReport:
    """Percentages for accuracy/specificity/sensitivity, ratio for dice.
    A metric whose denominator is zero is None (undefined), never 0."""
    accuracy: float | None
    specificity: float | None
    sensitivity: float | None
    dice: float | None


def confusion(pred: np.ndarray, gt: np.ndarray, roi: np.ndarray | None = None) -> ConfusionCounts:
    """Pixel counts of the four prediction/truth combinations, restricted to
    roi when one is given."""
    pred = as_mask(pred)
    gt = as_mask(gt)
    if pred.shape != gt.shape:
        raise ValueError("pred and gt must share dimensions")
    if roi is not None:
        roi = as_mask(roi)
        if roi.shape != pred.shape:
            raise ValueError("roi must share dimensions with the masks")
        pred = pred[roi]
        gt = gt[roi]
    tp = int(np.count_nonzero(pred & gt))
    fp = int(np.count_nonzero(pred & ~gt))
    fn = int(np.count_nonzero(~pred & gt))
    tn = int(pred.size - tp - fp - fn)
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def _ratio(num: float, den: float) -> float | None:
    return None if den == 0 else num / den


def metrics(c: ConfusionCounts) -> MetricsReport:
    return MetricsReport(
        accuracy=_ratio(100.0 * (c.tp + c.tn), c.total),
        specificity=_ratio(100.0 * c.tn, c.tn + c.fp),
        sensitivity=_ratio(100.0 * c.tp, c.tp + c.fn),
        dice=_ratio(2.0 * c.tp, 2 * c.tp + c.fp + c.fn),
    )


def od_hit(pred: OdLocation, gt_center: tuple[float, float], tol_radius: float) -> bool:
    """True when the predicted full-resolution center lands within
    tol_radius (Euclidean) of the reference center."""
    if tol_radius <= 0:
        raise ValueError("tol_radius must be > 0")
    dx = pred.center_full[0] - gt_center[0]
    dy = pred.center_full[1] - gt_center[1]
    return bool(np.hypot(dx, dy) <= tol_radius)


def od_reference(gt_mask: np.ndarray) -> tuple[tuple[float, float], float]:
    """Reference center and equivalent radius from a disc ground-truth mask:
    the centroid, and the radius of the circle with the same pixel area."""
    gt_mask = as_mask(gt_mask)
    ys, xs = np.nonzero(gt_mask)
    if len(xs) == 0:
        raise ValueError("ground-truth mask is empty")
    center = (float(xs.mean()), float(ys.mean()))
    radius = float(np.sqrt(len(xs) / np.pi))
    return center, radius
