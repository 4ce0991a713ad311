"""Connected components, outer-boundary tracing, shoelace areas, and
size-based blob filtering."""

from dataclasses import dataclass

import numpy as np

from ..imgcore import as_mask

# Neighbor offsets as (dx, dy), scanned clockwise in screen coordinates
# (y grows downward): E, SE, S, SW, W, NW, N, NE.
_DIRS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
_DIR_INDEX = {d: i for i, d in enumerate(_DIRS)}


@dataclass(frozen=True, eq=False)
class Contour:
    """Closed boundary chain. points is (n, 2) of integer (x, y), cyclic;
    consecutive points (including last-to-first) are 8-neighbors."""
    points: np.ndarray
    signed_area: float


def shoelace_area(points: np.ndarray) -> float:
    """Signed polygon area, one half the cyclic sum of cross products."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) == 0:
        raise ValueError("expected a non-empty (n, 2) point array")
    x = pts[:, 0]
    y = pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def label_components(mask: np.ndarray, connectivity: int = 8):
    """Label connected foreground components 1..n in row-major first-touch
    order. Returns (labels: int32 array, n). Run-based with union-find."""
    mask = as_mask(mask)
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    eight = connectivity == 8
    h, w = mask.shape

    parent: list[int] = []

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    all_runs = []  # (y, xs, xe, provisional id)
    prev: list[tuple[int, int, int]] = []
    row8 = mask.astype(np.int8)
    for y in range(h):
        row = row8[y]
        if not row.any():
            prev = []
            continue
        d = np.diff(row)
        starts = np.flatnonzero(d == 1) + 1
        ends = np.flatnonzero(d == -1) + 1
        if row[0]:
            starts = np.concatenate(([0], starts))
        if row[-1]:
            ends = np.concatenate((ends, [w]))
        cur = []
        pi = 0
        for xs, xe in zip(starts.tolist(), ends.tolist()):
            # previous-row runs touching [xs, xe): pxe >= xs and pxs <= xe
            # for 8-connectivity, strict overlap for 4-connectivity
            while pi < len(prev) and (prev[pi][1] < xs if eight else prev[pi][1] <= xs):
                pi += 1
            lab = -1
            j = pi
            while j < len(prev) and (prev[j][0] <= xe if eight else prev[j][0] < xe):
                r = find(prev[j][2])
                if lab == -1:
                    lab = r
                elif r != lab:
                    lo, hi = (lab, r) if lab < r else (r, lab)
                    parent[hi] = lo
                    lab = lo
                j += 1
            if lab == -1:
                lab = len(parent)
                parent.append(lab)
            cur.append((xs, xe, lab))
            all_runs.append((y, xs, xe, lab))
        prev = cur

    labels = np.zeros((h, w), dtype=np.int32)
    final: dict[int, int] = {}
    for y, xs, xe, lab in all_runs:
        root = find(lab)
        fid = final.get(root)
        if fid is None:
            fid = len(final) + 1
            final[root] = fid
        labels[y, xs:xe] = fid
    return labels, len(final)


def _trace_outer(mask: np.ndarray, start: tuple[int, int]) -> np.ndarray:
    """Moore boundary walk from the component's topmost-leftmost pixel.

    States are (pixel, backtrack) pairs; the walk stops when a state repeats
    and the closed cycle found from that point on is returned. The start's
    west neighbor is background by choice of start, so it seeds the walk.
    """
    h, w = mask.shape
    sx, sy = start
    cur = (sx, sy)
    back = (sx - 1, sy)
    seen: dict[tuple, int] = {}
    pts: list[tuple[int, int]] = []
    limit = 8 * int(mask.sum()) + 16
    for _ in range(limit):
        state = (cur, back)
        if state in seen:
            return np.array(pts[seen[state]:], dtype=np.int32)
        seen[state] = len(pts)
        pts.append(cur)
        d0 = _DIR_INDEX[(back[0] - cur[0], back[1] - cur[1])]
        for s in range(1, 9):
            dx, dy = _DIRS[(d0 + s) % 8]
            nx, ny = cur[0] + dx, cur[1] + dy
            if 0 <= nx < w and 0 <= ny < h and mask[ny, nx]:
                pdx, pdy = _DIRS[(d0 + s - 1) % 8]
                back = (cur[0] + pdx, cur[1] + pdy)
                cur = (nx, ny)
                break
        else:
            return np.array(pts, dtype=np.int32)  # isolated pixel
    raise RuntimeError("boundary walk failed to close")


def find_contours(mask: np.ndarray) -> list[Contour]:
    """One outer boundary per 8-connected component, in label order.

    Chains run counterclockwise in the standard orientation (clockwise on
    screen with y down), so outer signed areas are >= 0.
    """
    mask = as_mask(mask)
    labels, n = label_components(mask, connectivity=8)
    if n == 0:
        return []
    starts: dict[int, tuple[int, int]] = {}
    ys, xs = np.nonzero(labels)
    for y, x, lab in zip(ys.tolist(), xs.tolist(), labels[ys, xs].tolist()):
        if lab not in starts:
            starts[lab] = (x, y)
        if len(starts) == n:
            break
    out = []
    for lab in range(1, n + 1):
        pts = _trace_outer(labels == lab, starts[lab])
        out.append(Contour(points=pts, signed_area=shoelace_area(pts)))
    return out


def filter_blobs(mask: np.ndarray, min_area: float, max_area: float) -> np.ndarray:
    """Keep 8-connected components whose pixel count lies in
    [min_area, max_area]. Counts are pixel counts, not enclosed areas.
    max_area may be None for no upper bound."""
    mask = as_mask(mask)
    if max_area is None:
        max_area = np.inf
    if min_area > max_area:
        raise ValueError("min_area must be <= max_area")
    labels, n = label_components(mask, connectivity=8)
    if n == 0:
        return mask.copy()
    sizes = np.bincount(labels.ravel(), minlength=n + 1)
    keep = (sizes >= min_area) & (sizes <= max_area)
    keep[0] = False
    return keep[labels]
