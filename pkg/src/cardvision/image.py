"""Core image containers and geometric transforms.

Conversions between color, grayscale, and binary images, plus bilinear
resize and rotate. Everything is a pure function of its inputs.
"""

import numpy as np

from .validation import check_gray, check_rgb

# ITU-R BT.601 luma weights
_LUMA = np.array([0.299, 0.587, 0.114])


def to_grayscale(img):
    """Convert an RGB image to grayscale (BT.601 weighted sum)."""
    rgb = check_rgb(img)
    y = rgb.astype(np.float64) @ _LUMA
    return np.clip(np.rint(y), 0, 255).astype(np.uint8)


def binarize(img, level):
    """Threshold a grayscale image: foreground where intensity > level."""
    gray = check_gray(img)
    level = float(level)
    if not 0 <= level <= 255:
        raise ValueError(f"level must be in [0, 255], got {level}")
    return gray > level


def otsu_level(img):
    """Pick the threshold maximizing between-class variance.

    Scans all 256 candidate levels of the intensity histogram; ties break
    toward the lower level. Together with `binarize` (strict >) the class
    split at level t is {v <= t} vs {v > t}.
    """
    gray = check_gray(img)
    hist = np.bincount(gray.ravel(), minlength=256).astype(np.int64)
    values = np.arange(256, dtype=np.int64)
    c0 = np.cumsum(hist)
    s0 = np.cumsum(hist * values)
    total = c0[-1]
    grand = s0[-1]
    c1 = total - c0
    s1 = grand - s0
    valid = (c0 > 0) & (c1 > 0)
    var = np.zeros(256, dtype=np.float64)
    mu0 = np.divide(s0, c0, out=np.zeros(256), where=valid)
    mu1 = np.divide(s1, c1, out=np.zeros(256), where=valid)
    var[valid] = (
        c0[valid].astype(np.float64) * c1[valid].astype(np.float64)
        * (mu0[valid] - mu1[valid]) ** 2
    )
    return int(np.argmax(var))


def _bilinear_sample_grid(width, height, new_width, new_height):
    """Source sample coordinates for half-pixel-centered bilinear resize."""
    xs = (np.arange(new_width) + 0.5) * (width / new_width) - 0.5
    ys = (np.arange(new_height) + 0.5) * (height / new_height) - 0.5
    return np.clip(xs, 0, width - 1), np.clip(ys, 0, height - 1)


def resize(img, new_width, new_height):
    """Bilinear resize to exactly (new_width, new_height)."""
    gray = check_gray(img)
    new_width = int(new_width)
    new_height = int(new_height)
    if new_width < 1 or new_height < 1:
        raise ValueError("target dimensions must be >= 1")
    h, w = gray.shape
    xs, ys = _bilinear_sample_grid(w, h, new_width, new_height)
    x0 = np.floor(xs).astype(np.intp)
    y0 = np.floor(ys).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = xs - x0
    fy = ys - y0
    src = gray.astype(np.float64)
    top = src[np.ix_(y0, x0)] * (1 - fx) + src[np.ix_(y0, x1)] * fx
    bot = src[np.ix_(y1, x0)] * (1 - fx) + src[np.ix_(y1, x1)] * fx
    out = top * (1 - fy)[:, None] + bot * fy[:, None]
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def rotate(img, angle_deg, fill=0):
    """Rotate a grayscale image about its center, enlarging the canvas.

    The canvas grows to contain the whole rotated input; samples falling
    outside the source take `fill`. Bilinear interpolation; exact (up to
    rounding) for multiples of 90 degrees.
    """
    gray = check_gray(img)
    fill = float(fill)
    h, w = gray.shape
    theta = np.deg2rad(float(angle_deg))
    c, s = np.cos(theta), np.sin(theta)
    ac, as_ = abs(c), abs(s)
    # snap near-integer extents so right angles do not gain a pixel
    nw = int(np.ceil(w * ac + h * as_ - 1e-9))
    nh = int(np.ceil(w * as_ + h * ac - 1e-9))
    cx_d, cy_d = (nw - 1) / 2.0, (nh - 1) / 2.0
    cx_s, cy_s = (w - 1) / 2.0, (h - 1) / 2.0
    xd, yd = np.meshgrid(np.arange(nw) - cx_d, np.arange(nh) - cy_d)
    # inverse rotation maps destination pixels back into the source
    xs = c * xd + s * yd + cx_s
    ys = -s * xd + c * yd + cy_s
    x0 = np.floor(xs).astype(np.intp)
    y0 = np.floor(ys).astype(np.intp)
    fx = xs - x0
    fy = ys - y0
    src = gray.astype(np.float64)

    def at(yy, xx):
        inside = (yy >= 0) & (yy < h) & (xx >= 0) & (xx < w)
        vals = src[np.clip(yy, 0, h - 1), np.clip(xx, 0, w - 1)]
        return np.where(inside, vals, fill)

    out = (
        at(y0, x0) * (1 - fx) * (1 - fy)
        + at(y0, x0 + 1) * fx * (1 - fy)
        + at(y0 + 1, x0) * (1 - fx) * fy
        + at(y0 + 1, x0 + 1) * fx * fy
    )
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)
