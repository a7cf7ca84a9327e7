"""Binary image operators.

Sobel edge extraction with an automatic threshold, dilation/closing with
explicit structuring elements, hole filling, small-component removal,
connected-component labeling, and Moore-neighbor boundary tracing.

Coordinates follow numpy convention internally: masks are indexed
(row, col); structuring-element origins are (x, y) to match the rest of
the public API.
"""

from dataclasses import dataclass, field

import numpy as np

from .filters import conv2_same
from .validation import check_gray, check_mask

_SOBEL_GX = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])


@dataclass(frozen=True)
class EdgeConfig:
    """Multiplier on the automatic Sobel threshold."""

    fudge_factor: float = 0.5

    def __post_init__(self):
        if self.fudge_factor <= 0:
            raise ValueError("fudge_factor must be > 0")


@dataclass(frozen=True, eq=False)
class StructuringElement:
    """Boolean probe shape with an origin (x, y) inside its bounds."""

    mask: np.ndarray
    origin: tuple

    def __post_init__(self):
        mask = check_mask(self.mask, "structuring element")
        object.__setattr__(self, "mask", mask)
        ox, oy = self.origin
        h, w = mask.shape
        if not (0 <= ox < w and 0 <= oy < h):
            raise ValueError(f"origin {self.origin} outside {w}x{h} mask")
        if not mask.any():
            raise ValueError("structuring element must have at least one true cell")

    @classmethod
    def rectangle(cls, width, height):
        """Solid width x height element with a centered origin."""
        if width < 1 or height < 1:
            raise ValueError("structuring element dimensions must be >= 1")
        return cls(np.ones((height, width), dtype=bool), (width // 2, height // 2))

    def reflected(self):
        h, w = self.mask.shape
        ox, oy = self.origin
        return StructuringElement(self.mask[::-1, ::-1], (w - 1 - ox, h - 1 - oy))

    def offsets(self):
        """(dy, dx) displacements of true cells relative to the origin."""
        ys, xs = np.nonzero(self.mask)
        ox, oy = self.origin
        return ys - oy, xs - ox


@dataclass
class LabelMap:
    """Connected-component labels: 0 is background, 1..count components."""

    labels: np.ndarray
    count: int

    @property
    def shape(self):
        return self.labels.shape


def sobel_edges(img, cfg=None):
    """Sobel edge map with automatic thresholding.

    The squared gradient magnitude is compared against
    4 * mean(magnitude^2) * fudge_factor^2; the outermost pixel ring is
    always reported as non-edge.
    """
    cfg = cfg or EdgeConfig()
    gray = check_gray(img)
    h, w = gray.shape
    if h < 3 or w < 3:
        raise ValueError(f"image must be at least 3x3 for edge detection, got {w}x{h}")
    f = gray.astype(np.float64)
    gx = conv2_same(f, _SOBEL_GX)
    gy = conv2_same(f, _SOBEL_GX.T)
    mag2 = gx * gx + gy * gy
    threshold = 4.0 * mag2.mean() * cfg.fudge_factor**2
    edges = mag2 > threshold
    edges[0, :] = edges[-1, :] = False
    edges[:, 0] = edges[:, -1] = False
    return edges


def dilate(img, se):
    """Dilation: output true where the element placed at the pixel covers
    any foreground pixel."""
    mask = check_mask(img)
    h, w = mask.shape
    out = np.zeros_like(mask)
    for dy, dx in zip(*se.offsets()):
        src_y0, src_y1 = max(dy, 0), min(h + dy, h)
        src_x0, src_x1 = max(dx, 0), min(w + dx, w)
        if src_y0 >= src_y1 or src_x0 >= src_x1:
            continue
        dst_y0, dst_x0 = src_y0 - dy, src_x0 - dx
        out[dst_y0 : dst_y0 + (src_y1 - src_y0), dst_x0 : dst_x0 + (src_x1 - src_x0)] |= mask[
            src_y0:src_y1, src_x0:src_x1
        ]
    return out


def _erode(mask, se):
    # out-of-bounds counts as foreground so closing stays extensive at borders
    h, w = mask.shape
    out = np.ones_like(mask)
    for dy, dx in zip(*se.offsets()):
        shifted = np.ones_like(mask)
        src_y0, src_y1 = max(dy, 0), min(h + dy, h)
        src_x0, src_x1 = max(dx, 0), min(w + dx, w)
        if src_y0 < src_y1 and src_x0 < src_x1:
            dst_y0, dst_x0 = src_y0 - dy, src_x0 - dx
            shifted[dst_y0 : dst_y0 + (src_y1 - src_y0), dst_x0 : dst_x0 + (src_x1 - src_x0)] = mask[
                src_y0:src_y1, src_x0:src_x1
            ]
        out &= shifted
    return out


def closing(img, se):
    """Morphological closing: dilation followed by erosion (reflected SE)."""
    return _erode(dilate(img, se), se.reflected())


def label_components(img, connectivity=8):
    """Label foreground components 1..count in raster order of first pixel."""
    mask = check_mask(img)
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    h, w = mask.shape
    reach = 1 if connectivity == 8 else 0
    parent = []

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    all_runs = []
    prev = []
    pad = np.zeros(w + 2, dtype=bool)
    for y in range(h):
        pad[1:-1] = mask[y]
        d = np.flatnonzero(pad[1:] != pad[:-1])
        cur = []
        j = 0
        for s, e in zip(d[0::2], d[1::2]):
            rid = len(parent)
            parent.append(rid)
            lo, hi = s - reach, e - 1 + reach
            while j < len(prev) and prev[j][1] - 1 < lo:
                j += 1
            k = j
            while k < len(prev) and prev[k][0] <= hi:
                ra, rb = find(rid), find(prev[k][2])
                if ra != rb:
                    parent[rb] = ra
                k += 1
            cur.append((s, e, rid))
            all_runs.append((y, s, e, rid))
        prev = cur

    labels = np.zeros((h, w), dtype=np.int32)
    label_of_root = {}
    count = 0
    for y, s, e, rid in all_runs:
        root = find(rid)
        lab = label_of_root.get(root)
        if lab is None:
            count += 1
            lab = count
            label_of_root[root] = lab
        labels[y, s:e] = lab
    return LabelMap(labels=labels, count=count)


def fill_holes(img):
    """Fill background regions not 4-connected to the image border."""
    mask = check_mask(img)
    background = label_components(~mask, connectivity=4)
    border = np.concatenate(
        [
            background.labels[0, :],
            background.labels[-1, :],
            background.labels[:, 0],
            background.labels[:, -1],
        ]
    )
    border_ids = np.unique(border[border > 0])
    holes = (background.labels > 0) & ~np.isin(background.labels, border_ids)
    return mask | holes


def area_open(img, min_area):
    """Drop 8-connected components with area strictly below min_area."""
    mask = check_mask(img)
    min_area = int(min_area)
    if min_area < 0:
        raise ValueError(f"min_area must be >= 0, got {min_area}")
    if min_area <= 1:
        return mask.copy()
    lm = label_components(mask, connectivity=8)
    areas = np.bincount(lm.labels.ravel(), minlength=lm.count + 1)
    keep = areas >= min_area
    keep[0] = False
    return keep[lm.labels]


# Moore neighborhood scanned clockwise starting west (y grows downward)
_DIRS = ((0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1))


def _trace_one(padded, y0, x0):
    # padded has a one-pixel false ring, coordinates are pre-shifted by +1
    pts = [(y0, x0)]
    p = (y0, x0)
    b = 0  # backtrack direction; west of the raster-first pixel is background
    first_move = None
    while True:
        nxt = None
        for k in range(1, 9):
            d = (b + k) % 8
            ny, nx = p[0] + _DIRS[d][0], p[1] + _DIRS[d][1]
            if padded[ny, nx]:
                nxt = (ny, nx, d)
                break
        if nxt is None:
            break  # isolated pixel
        ny, nx, d = nxt
        if first_move is None:
            first_move = (p, (ny, nx))
        elif p == first_move[0] and (ny, nx) == first_move[1]:
            break
        pts.append((ny, nx))
        p = (ny, nx)
        b = (d + 5) % 8
    if len(pts) > 1 and pts[-1] == pts[0]:
        pts.pop()
    return np.array(pts, dtype=np.int64) - 1


def trace_boundaries(img):
    """Trace the outer boundary of each 8-connected component.

    Returns one clockwise closed polyline per component as an (n, 2) array
    of (row, col) pixels, starting at the component's raster-first pixel.
    Hole boundaries are not traced. Ordering matches `label_components`.
    """
    mask = check_mask(img)
    lm = label_components(mask, connectivity=8)
    if lm.count == 0:
        return []
    ys, xs = np.nonzero(mask)
    labs = lm.labels[ys, xs]
    _, first_idx = np.unique(labs, return_index=True)
    padded = np.zeros((mask.shape[0] + 2, mask.shape[1] + 2), dtype=bool)
    padded[1:-1, 1:-1] = mask
    return [_trace_one(padded, int(ys[i]) + 1, int(xs[i]) + 1) for i in first_idx]
