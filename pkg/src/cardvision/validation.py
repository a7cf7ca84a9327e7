"""Input validation helpers used at public API boundaries.

Images are plain numpy arrays: grayscale is a 2-D uint8 array, color is an
(h, w, 3) uint8 array, masks are 2-D bool arrays with True as foreground.
"""

import numpy as np


def check_gray(img, name="image"):
    """Validate and return a 2-D uint8 grayscale array."""
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D grayscale, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if arr.dtype == np.uint8:
        return arr
    if np.issubdtype(arr.dtype, np.integer):
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError(f"{name} values must lie in [0, 255]")
        return arr.astype(np.uint8)
    raise ValueError(f"{name} must be integer-valued in [0, 255], got dtype {arr.dtype}")


def check_rgb(img, name="image"):
    """Validate and return an (h, w, 3) uint8 color array."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must have shape (h, w, 3), got {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must not be empty")
    if arr.dtype == np.uint8:
        return arr
    if np.issubdtype(arr.dtype, np.integer):
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError(f"{name} values must lie in [0, 255]")
        return arr.astype(np.uint8)
    raise ValueError(f"{name} must be integer-valued in [0, 255], got dtype {arr.dtype}")


def check_mask(img, name="mask"):
    """Validate and return a 2-D bool array (True = foreground)."""
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if arr.dtype == bool:
        return arr
    if np.issubdtype(arr.dtype, np.integer):
        return arr != 0
    raise ValueError(f"{name} must be bool or integer, got dtype {arr.dtype}")


def check_real(mat, name="matrix"):
    """Validate and return a 2-D float64 array with finite entries."""
    arr = np.asarray(mat, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    return arr


def check_odd(value, name="size"):
    """Require a positive odd integer."""
    n = int(value)
    if n < 1 or n % 2 == 0:
        raise ValueError(f"{name} must be a positive odd integer, got {value}")
    return n
