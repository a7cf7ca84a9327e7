"""Binary netpbm image I/O.

Interchange formats for the CLI and on-disk templates: P5 (grayscale),
P6 (color), P4 (bitmap). Masks are written as P5 with values {0, 255};
any nonzero pixel reads back as foreground. Maxval above 255 is rejected.
"""

import numpy as np

from .validation import check_gray, check_mask, check_rgb


def _read_tokens(data, count):
    """Pull whitespace-separated header tokens, skipping '#' comments.

    Returns (tokens, offset of the byte right after the final delimiter).
    """
    tokens = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] != b"\n":
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise ValueError("truncated netpbm header")
        tokens.append(data[start:i])
        i += 1  # consume the single delimiter after the token
    return tokens, i


def read_image(path):
    """Read a P4/P5/P6 file. Returns bool, gray uint8, or rgb uint8 array."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 2:
        raise ValueError(f"{path}: not a netpbm file")
    magic = data[:2]
    if magic == b"P4":
        (_, wtok, htok), off = _read_tokens(data, 3)
        w, h = int(wtok), int(htok)
        row_bytes = (w + 7) // 8
        raw = np.frombuffer(data, dtype=np.uint8, count=h * row_bytes, offset=off)
        bits = np.unpackbits(raw.reshape(h, row_bytes), axis=1)[:, :w]
        return bits.astype(bool)
    if magic in (b"P5", b"P6"):
        (_, wtok, htok, mtok), off = _read_tokens(data, 4)
        w, h, maxval = int(wtok), int(htok), int(mtok)
        if maxval <= 0 or maxval > 255:
            raise ValueError(f"{path}: unsupported maxval {maxval}")
        channels = 3 if magic == b"P6" else 1
        count = w * h * channels
        if len(data) - off < count:
            raise ValueError(f"{path}: truncated pixel data")
        pixels = np.frombuffer(data, dtype=np.uint8, count=count, offset=off)
        if channels == 1:
            return pixels.reshape(h, w).copy()
        return pixels.reshape(h, w, 3).copy()
    raise ValueError(f"{path}: unsupported netpbm magic {magic!r}")


def read_gray(path):
    img = read_image(path)
    if img.dtype == bool:
        return img.astype(np.uint8) * 255
    if img.ndim != 2:
        raise ValueError(f"{path}: expected a grayscale (P5) image")
    return img


def read_rgb(path):
    img = read_image(path)
    if img.ndim != 3:
        raise ValueError(f"{path}: expected a color (P6) image")
    return img


def read_mask(path):
    img = read_image(path)
    if img.dtype == bool:
        return img
    if img.ndim != 2:
        raise ValueError(f"{path}: expected a mask (P4 or P5) image")
    return img > 0


def write_gray(path, img):
    img = check_gray(img)
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def write_rgb(path, img):
    img = check_rgb(img)
    h, w = img.shape[:2]
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(img).tobytes())


def write_mask(path, mask):
    mask = check_mask(mask)
    write_gray(path, mask.astype(np.uint8) * 255)
