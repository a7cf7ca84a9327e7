"""Linear and nonlinear preprocessing filters.

Kernels are 2-D float arrays with odd dimensions. `conv2_same` is true
convolution (kernel flipped) with zero padding; `gaussian_blur` wraps it
with edge replication so borders do not darken.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .validation import check_gray, check_odd, check_real


def _check_kernel(kernel):
    k = check_real(kernel, "kernel")
    check_odd(k.shape[0], "kernel height")
    check_odd(k.shape[1], "kernel width")
    return k


def conv2_same(mat, kernel):
    """2-D convolution, same-size output, out-of-bounds treated as 0."""
    f = check_real(mat, "matrix")
    k = _check_kernel(kernel)
    kf = k[::-1, ::-1]
    kh, kw = kf.shape
    ph, pw = kh // 2, kw // 2
    h, w = f.shape
    padded = np.zeros((h + 2 * ph, w + 2 * pw))
    padded[ph : ph + h, pw : pw + w] = f
    out = np.zeros((h, w))
    for i in range(kh):
        for j in range(kw):
            weight = kf[i, j]
            if weight != 0.0:
                out += weight * padded[i : i + h, j : j + w]
    return out


def mean_kernel(size=3):
    """Uniform averaging kernel of odd size."""
    n = check_odd(size, "size")
    return np.full((n, n), 1.0 / (n * n))


def gaussian_kernel(sigma, size):
    """Normalized isotropic Gaussian kernel on a centered odd grid."""
    sigma = float(sigma)
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    n = check_odd(size, "size")
    half = n // 2
    coords = np.arange(-half, half + 1, dtype=np.float64)
    xx, yy = np.meshgrid(coords, coords)
    k = np.exp(-(xx * xx + yy * yy) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(img, sigma=1.0):
    """Gaussian smoothing with 3-sigma support and replicated borders."""
    gray = check_gray(img)
    sigma = float(sigma)
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    size = 2 * int(np.ceil(3 * sigma)) + 1
    k = gaussian_kernel(sigma, size)
    half = size // 2
    padded = np.pad(gray.astype(np.float64), half, mode="edge")
    h, w = gray.shape
    out = np.zeros((h, w))
    for i in range(size):
        for j in range(size):
            out += k[i, j] * padded[i : i + h, j : j + w]
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def median_filter(img, m, n):
    """m x n median filter; out-of-bounds samples are 0."""
    gray = check_gray(img)
    m = check_odd(m, "m")
    n = check_odd(n, "n")
    padded = np.pad(gray, ((m // 2, m // 2), (n // 2, n // 2)), mode="constant")
    windows = sliding_window_view(padded, (m, n))
    return np.median(windows, axis=(-2, -1)).astype(np.uint8)


def hist_equalize(img):
    """Map intensities through the normalized cumulative histogram."""
    gray = check_gray(img)
    hist = np.bincount(gray.ravel(), minlength=256)
    cdf = np.cumsum(hist) / gray.size
    lut = np.rint(255.0 * cdf).astype(np.uint8)
    return lut[gray]
