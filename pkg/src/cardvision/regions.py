"""Per-component geometric measurements.

Area, centroid, bounding box, second-moment ellipse (major/minor axis,
eccentricity, orientation) and boundary-trace perimeter for every label
of a LabelMap. Orientation is measured in degrees from the x axis toward
positive y (downward rows), so it composes directly with `image.rotate`.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RegionProps:
    label: int
    area: int
    perimeter: float
    bbox: tuple  # (x, y, w, h)
    centroid: tuple  # (x, y)
    major_axis: float
    minor_axis: float
    eccentricity: float
    orientation: float  # degrees in (-90, 90]


def polyline_length(points):
    """Length of a closed pixel polyline; diagonal steps count sqrt(2)."""
    pts = np.asarray(points)
    if len(pts) < 2:
        return 0.0
    closed = np.vstack([pts, pts[:1]])
    steps = np.diff(closed, axis=0)
    return float(np.hypot(steps[:, 0], steps[:, 1]).sum())


def region_props(label_map, boundaries):
    """Measure every component of a label map.

    `boundaries` must be the polylines from `trace_boundaries` on the same
    mask, index-aligned with labels 1..count.
    """
    n = label_map.count
    if len(boundaries) != n:
        raise ValueError(f"expected {n} boundaries, got {len(boundaries)}")
    if n == 0:
        return []
    ys, xs = np.nonzero(label_map.labels)
    labs = label_map.labels[ys, xs]
    xs_f = xs.astype(np.float64)
    ys_f = ys.astype(np.float64)
    area = np.bincount(labs, minlength=n + 1)[1:]
    sx = np.bincount(labs, weights=xs_f, minlength=n + 1)[1:]
    sy = np.bincount(labs, weights=ys_f, minlength=n + 1)[1:]
    sxx = np.bincount(labs, weights=xs_f * xs_f, minlength=n + 1)[1:]
    syy = np.bincount(labs, weights=ys_f * ys_f, minlength=n + 1)[1:]
    sxy = np.bincount(labs, weights=xs_f * ys_f, minlength=n + 1)[1:]
    min_x = np.full(n + 1, np.iinfo(np.int64).max)
    min_y = np.full(n + 1, np.iinfo(np.int64).max)
    max_x = np.full(n + 1, -1)
    max_y = np.full(n + 1, -1)
    np.minimum.at(min_x, labs, xs)
    np.minimum.at(min_y, labs, ys)
    np.maximum.at(max_x, labs, xs)
    np.maximum.at(max_y, labs, ys)

    props = []
    for i in range(n):
        a = float(area[i])
        cx = sx[i] / a
        cy = sy[i] / a
        # normalized central moments with the 1/12 per-pixel correction
        m20 = (sxx[i] - sx[i] * sx[i] / a) / a + 1.0 / 12.0
        m02 = (syy[i] - sy[i] * sy[i] / a) / a + 1.0 / 12.0
        m11 = (sxy[i] - sx[i] * sy[i] / a) / a
        common = np.hypot((m20 - m02) / 2.0, m11)
        l1 = (m20 + m02) / 2.0 + common
        l2 = max((m20 + m02) / 2.0 - common, 0.0)
        theta = np.degrees(0.5 * np.arctan2(2.0 * m11, m20 - m02))
        if theta <= -90.0:
            theta += 180.0
        props.append(
            RegionProps(
                label=i + 1,
                area=int(area[i]),
                perimeter=polyline_length(boundaries[i]),
                bbox=(
                    int(min_x[i + 1]),
                    int(min_y[i + 1]),
                    int(max_x[i + 1] - min_x[i + 1] + 1),
                    int(max_y[i + 1] - min_y[i + 1] + 1),
                ),
                centroid=(cx, cy),
                major_axis=4.0 * np.sqrt(l1),
                minor_axis=4.0 * np.sqrt(l2),
                eccentricity=float(np.sqrt(max(1.0 - l2 / l1, 0.0))),
                orientation=float(theta),
            )
        )
    return props
