"""Image comparison primitives.

`normxcorr` computes the full normalized cross-correlation surface of a
template against an image, with windows extending past the image treated
as zero samples:

    gamma(u, v) = sum((f - mean(f)) * (t - mean(t)))
                  / sqrt(sum((f - mean(f))^2) * sum((t - mean(t))^2))

where f is the template-sized window at offset (u, v). Window statistics
come from running (integral-image) sums, so cost per offset is constant
apart from the correlation product itself. Windows with zero variance get
gamma = 0 so the surface is total.

`subtractive_score` is the cheap comparison used for edge verification:
mean absolute difference scaled to [0, 1].
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .validation import check_gray, check_real


def _window_sums(mat, th, tw):
    integral = np.zeros((mat.shape[0] + 1, mat.shape[1] + 1))
    integral[1:, 1:] = mat.cumsum(axis=0).cumsum(axis=1)
    return (
        integral[th:, tw:]
        - integral[:-th, tw:]
        - integral[th:, :-tw]
        + integral[:-th, :-tw]
    )


def normxcorr(template, image):
    """Full normalized cross-correlation surface.

    The output has shape (image + template - 1) per axis; the window whose
    top-left corner sits at image pixel (row, col) maps to surface index
    (row + th - 1, col + tw - 1). The template must be strictly smaller
    than the image in both dimensions and must not be constant.
    """
    t = check_real(template, "template")
    f = check_real(image, "image")
    th, tw = t.shape
    fh, fw = f.shape
    if th >= fh or tw >= fw:
        raise ValueError(
            f"template {tw}x{th} must be strictly smaller than image {fw}x{fh}"
        )
    if np.ptp(t) == 0:
        raise ValueError("template must not be constant")
    n = th * tw
    t0 = t - t.mean()
    tss = float((t0 * t0).sum())
    padded = np.zeros((fh + 2 * (th - 1), fw + 2 * (tw - 1)))
    padded[th - 1 : th - 1 + fh, tw - 1 : tw - 1 + fw] = f
    windows = sliding_window_view(padded, (th, tw))
    num = np.einsum("uvij,ij->uv", windows, t0)
    s1 = _window_sums(padded, th, tw)
    # recenter exactly: sum((f - fbar) * (t - tbar)) = sum(f*t0) - fbar*sum(t0)
    num -= s1 * (t0.sum() / n)
    s2 = _window_sums(padded * padded, th, tw)
    var = s2 - s1 * s1 / n
    np.maximum(var, 0.0, out=var)
    denom = np.sqrt(var * tss)
    out = np.zeros_like(num)
    np.divide(num, denom, out=out, where=denom > 0)
    return out


def best_match(surface):
    """Peak value and its (x, y) surface location, raster-first on ties."""
    s = np.asarray(surface, dtype=np.float64)
    if s.ndim != 2 or s.size == 0:
        raise ValueError("surface must be a non-empty 2-D array")
    flat = int(np.argmax(s))
    y, x = divmod(flat, s.shape[1])
    return float(s[y, x]), (x, y)


def subtractive_score(a, b):
    """Mean absolute difference of two equal-size images, scaled to [0, 1]."""
    ga = check_gray(a, "a")
    gb = check_gray(b, "b")
    if ga.shape != gb.shape:
        raise ValueError(f"image dimensions differ: {ga.shape} vs {gb.shape}")
    diff = np.abs(ga.astype(np.int16) - gb.astype(np.int16))
    return float(diff.mean() / 255.0)
