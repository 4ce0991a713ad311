"""Scalar k-means over pixel intensities (Lloyd iterations on the 256-bin
histogram) plus cluster-mask helpers."""

from dataclasses import dataclass

import numpy as np

from ..imgcore import as_gray


@dataclass(frozen=True, eq=False)
class KMeansResult:
    """k: effective cluster count; centers: ascending intensities; labels:
    per-pixel cluster index, same shape as the input; objective: sum of
    squared distances to assigned centers; history: objective per iteration
    (non-increasing); n_iter: Lloyd iterations run."""
    k: int
    centers: np.ndarray
    labels: np.ndarray
    objective: float
    history: tuple
    n_iter: int


def _assign_values(centers: np.ndarray) -> np.ndarray:
    """Cluster index for every intensity 0..255: nearest center, ties to the
    lower index. Centers are ascending, so the boundaries are midpoints and
    a value equal to a midpoint belongs to the lower cluster."""
    vals = np.arange(256, dtype=np.float64)
    if len(centers) == 1:
        return np.zeros(256, dtype=np.int64)
    mids = (centers[:-1] + centers[1:]) / 2.0
    return np.searchsorted(mids, vals, side="left")


def _sse(hist: np.ndarray, centers: np.ndarray, lbl: np.ndarray) -> float:
    vals = np.arange(256, dtype=np.float64)
    return float(np.sum(hist * (vals - centers[lbl]) ** 2))


def _dp_optimal(hist: np.ndarray, k: int) -> np.ndarray:
    """Globally optimal scalar k-means centers for a 256-bin histogram.

    Optimal scalar clusters are contiguous value intervals, so the best
    partition into k nonempty intervals is found by dynamic programming
    over the occupied bins. O(k m^2) for m occupied bins, m <= 256.
    """
    vals = np.flatnonzero(hist).astype(np.float64)
    w = hist[np.flatnonzero(hist)].astype(np.float64)
    m = len(vals)
    cw = np.concatenate(([0.0], np.cumsum(w)))
    cs = np.concatenate(([0.0], np.cumsum(w * vals)))
    cq = np.concatenate(([0.0], np.cumsum(w * vals * vals)))
    ii = np.arange(m)[:, None]
    jj = np.arange(m)[None, :]
    seg_w = cw[jj + 1] - cw[ii]
    seg_s = cs[jj + 1] - cs[ii]
    seg_q = cq[jj + 1] - cq[ii]
    cost = seg_q - seg_s * seg_s / np.where(seg_w > 0, seg_w, 1.0)
    cost[jj < ii] = np.inf

    best = cost[0].copy()
    split = np.zeros((k, m), dtype=np.int64)
    for c in range(1, k):
        cand = best[:-1, None] + cost[1:, :]
        pick = np.argmin(cand, axis=0)
        split[c] = pick + 1
        best = cand[pick, np.arange(m)]

    bounds = []
    j = m - 1
    for c in range(k - 1, 0, -1):
        i = int(split[c, j])
        bounds.append(i)
        j = i - 1
    bounds = [0] + bounds[::-1] + [m]
    centers = np.array([seg_s[bounds[c], bounds[c + 1] - 1] /
                        seg_w[bounds[c], bounds[c + 1] - 1]
                        for c in range(k)])
    return centers


def _lloyd(hist: np.ndarray, centers: np.ndarray, max_iter: int, tol: float):
    vals = np.arange(256, dtype=np.float64)
    wsum = hist.astype(np.float64)
    k = len(centers)
    history = []
    prev = None
    lbl = _assign_values(centers)
    for _ in range(max_iter):
        lbl = _assign_values(centers)
        cost = float(np.sum(wsum * (vals - centers[lbl]) ** 2))
        history.append(cost)
        if prev is not None and prev - cost < tol:
            break
        prev = cost
        counts = np.bincount(lbl, weights=wsum, minlength=k)
        sums = np.bincount(lbl, weights=wsum * vals, minlength=k)
        centers = np.where(counts > 0, sums / np.where(counts > 0, counts, 1.0), centers)
    else:
        # budget exhausted: refresh labels and cost against final centers
        lbl = _assign_values(centers)
        cost = float(np.sum(wsum * (vals - centers[lbl]) ** 2))
        history.append(cost)
    return centers, lbl, history[-1], tuple(history)


def kmeans_intensity(img: np.ndarray, k: int, max_iter: int = 100,
                     tol: float = 1e-6, seed: int = 0,
                     restarts: int = 0) -> KMeansResult:
    """Lloyd k-means on scalar intensities.

    Initialization is deterministic: the k evenly spaced quantiles of the
    sorted distinct intensities, which are always distinct for k <= the
    number of distinct values. When fewer distinct intensities than k exist,
    the result collapses to one center per distinct value (effective k
    reported). Iteration stops when the objective improves by less than tol.
    seed only matters when restarts > 0, which adds that many random
    reinitializations and keeps the best objective.

    Lloyd alone lands in a local basin on a fair fraction of inputs, so a
    final exact pass (dynamic programming over contiguous intensity ranges,
    which is where scalar optima live) replaces the Lloyd solution whenever
    it found a better partition. The reported objective therefore does not
    depend on where the seeding landed; history keeps the Lloyd trace and
    gains one last entry when the refinement improved on it.
    """
    img = as_gray(img)
    if k < 1:
        raise ValueError("k must be >= 1")
    hist = np.bincount(img.ravel(), minlength=256).astype(np.int64)
    uniq = np.flatnonzero(hist).astype(np.float64)
    if len(uniq) <= k:
        centers = uniq.copy()
        lbl = _assign_values(centers)
        vals = np.arange(256, dtype=np.float64)
        cost = float(np.sum(hist * (vals - centers[lbl]) ** 2))
        return KMeansResult(k=len(centers), centers=centers,
                            labels=lbl[img].astype(np.int32), objective=cost,
                            history=(cost,), n_iter=0)

    q = (np.arange(k) + 0.5) / k
    init = np.quantile(uniq, q)
    centers, lbl, cost, history = _lloyd(hist, init, max_iter, tol)
    if restarts > 0:
        rng = np.random.default_rng(seed)
        for _ in range(restarts):
            cand = np.sort(rng.choice(uniq, size=k, replace=False))
            c2, l2, cost2, h2 = _lloyd(hist, cand, max_iter, tol)
            if cost2 < cost:
                centers, lbl, cost, history = c2, l2, cost2, h2
    n_iter = len(history)
    dp_centers = _dp_optimal(hist, k)
    dp_lbl = _assign_values(dp_centers)
    dp_cost = _sse(hist, dp_centers, dp_lbl)
    if dp_cost < cost:
        centers, lbl, cost = dp_centers, dp_lbl, dp_cost
        history = history + (dp_cost,)
    return KMeansResult(k=k, centers=centers, labels=lbl[img].astype(np.int32),
                        objective=cost, history=history, n_iter=n_iter)


def brightest_cluster_mask(r: KMeansResult) -> np.ndarray:
    """Pixels assigned to the maximum center; center ties go to the higher
    label index."""
    rev = int(np.argmax(r.centers[::-1]))
    idx = len(r.centers) - 1 - rev
    return r.labels == idx


def quantize_to_centers(r: KMeansResult) -> np.ndarray:
    """Rebuild the image with every pixel replaced by its cluster center."""
    lut = np.clip(np.rint(r.centers), 0, 255).astype(np.uint8)
    return lut[r.labels]
