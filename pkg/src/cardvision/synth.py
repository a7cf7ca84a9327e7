"""Synthetic card and table-scene renderer with ground truth.

Deterministic stand-in for photographed decks: cards are white rectangles
with a light printed border and a rank-over-suit index in the top-left
corner (mirrored 180 degrees at the bottom-right). Scenes composite cards,
plain rectangles, and disks onto a felt background and report each
object's class, pose, and bounding box.

Glyphs come from a built-in 5x7 blocky font. Shapes are chosen so that
the *filled* outlines stay mutually distinguishable, since hole structure
does not survive the reading pipeline.
"""

from dataclasses import dataclass, field

import numpy as np

from .image import resize, rotate
from .validation import check_gray

RANK_KEYS = ("A", "2", "3", "4", "5", "6", "7", "8", "9", "0", "J", "Q", "K")
SUIT_KEYS = ("spade", "heart", "club", "diamond")

CARD_W, CARD_H = 140, 200
# The face carries a gentle diagonal illumination ramp: a perfectly flat
# face makes histogram equalization degenerate (one quantile cliff at the
# blur skirt), which photographs never do.
CARD_FACE_LO = 190
CARD_FACE_SPAN = 32
CARD_INK = 90
# border brighter than the face: histogram equalization compresses the
# border/face step instead of stretching it, keeping the index mask clean
CARD_BORDER_SHADE = 235
CARD_BORDER_PX = 3
# index layout (x, y, w, h) inside the top-left corner of the card;
# the rank/suit gap must survive edge thickening in the reading chain
RANK_BOX = (5, 3, 16, 22)
SUIT_BOX = (5, 35, 16, 17)

# scene object base sizes, scaled by the object's pose scale
RECT_W, RECT_H = 150, 100
RECT_SHADE = 170
DISK_RADIUS = 55
DISK_SHADE = 210
FELT_RGB = (0, 100, 0)

# Solid shapes only: thin strokes smear away at index size, and enclosed
# holes would not survive the flood-fill step anyway. Each glyph gets its
# own row-width profile so the filled outlines stay separable.
_FONT = {
    "A": ("..X..", ".XXX.", ".XXX.", "XXXXX", "XXXXX", "XX.XX", "XX.XX"),
    "2": ("XXXX.", "XXXXX", "...XX", "..XX.", ".XX..", "XXXXX", "XXXXX"),
    "3": ("XXXXX", "XXXXX", "...XX", ".XXXX", "...XX", "XXXXX", "XXXXX"),
    "4": ("...XX", "..XXX", ".XXXX", "XXXXX", "XXXXX", "...XX", "...XX"),
    "5": ("XXXXX", "XXXXX", "XX...", "XXXX.", "...XX", "XXXXX", "XXXX."),
    "6": (".XXX.", "XX...", "XX...", "XXXX.", "XXXXX", "XXXXX", ".XXX."),
    "7": ("XXXXX", "XXXXX", "...XX", "..XX.", "..XX.", ".XX..", ".XX.."),
    "8": ("XXXXX", "XXXXX", ".XXX.", "..X..", ".XXX.", "XXXXX", "XXXXX"),
    "9": (".XXX.", "XXXXX", "XXXXX", ".XXXX", "...XX", "...XX", ".XXX."),
    "0": (".XXX.", "XXXXX", "XXXXX", "XXXXX", "XXXXX", "XXXXX", ".XXX."),
    "J": ("..XXX", "..XXX", "...XX", "...XX", "...XX", "XXXX.", "XXX.."),
    "Q": (".XXX.", "XXXXX", "XXXXX", "XXXXX", "XXX..", "XXXX.", ".XXXX"),
    "K": ("XX..X", "XX.XX", "XXXX.", "XXX..", "XXXX.", "XX.XX", "XX..X"),
    "spade": ("..X..", ".XXX.", "XXXXX", "XXXXX", "..X..", "..X..", ".XXX."),
    "heart": (".X.X.", "XXXXX", "XXXXX", ".XXX.", ".XXX.", "..X..", "..X.."),
    "club": (".XXX.", "XXXXX", ".XXX.", "XXXXX", "XXXXX", "..X..", ".XXX."),
    "diamond": ("..X..", ".XXX.", "XXXXX", "XXXXX", "XXXXX", ".XXX.", "..X.."),
}


def normalize_rank(rank):
    """Accept '10' as an alias for the zero glyph key '0'."""
    key = "0" if str(rank) == "10" else str(rank)
    if key not in RANK_KEYS:
        raise ValueError(f"unknown rank {rank!r}")
    return key


def display_rank(key):
    return "10" if key == "0" else key


def check_suit(suit):
    if suit not in SUIT_KEYS:
        raise ValueError(f"unknown suit {suit!r}")
    return suit


def glyph_cells(name):
    """The raw 5x7 bool pattern for a rank key or suit name."""
    pattern = _FONT[name]
    return np.array([[ch == "X" for ch in row] for row in pattern], dtype=bool)


def _stamp(canvas, cells, box, value, flip=False):
    x, y, w, h = box
    if flip:
        cells = cells[::-1, ::-1]
    rows, cols = cells.shape
    yy = (np.arange(h) * rows) // h
    xx = (np.arange(w) * cols) // w
    block = cells[np.ix_(yy, xx)]
    region = canvas[y : y + h, x : x + w]
    region[block] = value


def render_card(rank, suit, scale=1.0):
    """Render one upright card as a grayscale image.

    A full-resolution card is drawn and then resized, mimicking a smaller
    photograph of the same card.
    """
    rank_key = normalize_rank(rank)
    suit = check_suit(suit)
    scale = float(scale)
    if not 0 < scale <= 1.5:
        raise ValueError(f"scale must be in (0, 1.5], got {scale}")
    yy, xx = np.mgrid[:CARD_H, :CARD_W]
    img = (CARD_FACE_LO + ((xx + yy) * CARD_FACE_SPAN) // (CARD_W + CARD_H - 2)).astype(
        np.uint8
    )
    b = CARD_BORDER_PX
    img[:b, :] = img[-b:, :] = CARD_BORDER_SHADE
    img[:, :b] = img[:, -b:] = CARD_BORDER_SHADE
    rank_cells = glyph_cells(rank_key)
    suit_cells = glyph_cells(suit)
    for cells, (x, y, w, h) in ((rank_cells, RANK_BOX), (suit_cells, SUIT_BOX)):
        _stamp(img, cells, (x, y, w, h), CARD_INK)
        _stamp(img, cells, (CARD_W - x - w, CARD_H - y - h, w, h), CARD_INK, flip=True)
    if scale != 1.0:
        img = resize(img, max(1, round(CARD_W * scale)), max(1, round(CARD_H * scale)))
    return img


def jitter(img, brightness=1.0, noise_sigma=0.0, seed=0):
    """Photometric perturbation: intensity gain plus seeded Gaussian noise."""
    gray = check_gray(img).astype(np.float64)
    out = gray * float(brightness)
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        out = out + rng.normal(0.0, float(noise_sigma), gray.shape)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


@dataclass
class SceneObject:
    kind: str  # card | rect | disk
    cx: float
    cy: float
    angle: float = 0.0
    scale: float = 1.0
    rank: str = None
    suit: str = None


@dataclass
class SceneSpec:
    width: int = 640
    height: int = 480
    background: tuple = FELT_RGB
    objects: list = field(default_factory=list)
    brightness: float = 1.0
    noise_sigma: float = 0.0
    seed: int = 0


@dataclass
class SceneTruth:
    index: int
    kind: str
    cls: str  # CARD | RECT | OTHER
    bbox: tuple  # (x, y, w, h)
    cx: float
    cy: float
    angle: float
    scale: float
    rank: str = None
    suit: str = None


_TRUTH_CLASS = {"card": "CARD", "rect": "RECT", "disk": "OTHER"}


def _object_tile(obj):
    """Grayscale tile and opacity mask for one scene object, pre-rotation."""
    if obj.kind == "card":
        tile = render_card(obj.rank, obj.suit, obj.scale)
        mask = np.ones(tile.shape, dtype=bool)
    elif obj.kind == "rect":
        w = max(1, round(RECT_W * obj.scale))
        h = max(1, round(RECT_H * obj.scale))
        tile = np.full((h, w), RECT_SHADE, dtype=np.uint8)
        mask = np.ones((h, w), dtype=bool)
    elif obj.kind == "disk":
        r = max(1, round(DISK_RADIUS * obj.scale))
        d = 2 * r + 1
        yy, xx = np.ogrid[:d, :d]
        mask = (xx - r) ** 2 + (yy - r) ** 2 <= r * r
        tile = np.where(mask, DISK_SHADE, 0).astype(np.uint8)
    else:
        raise ValueError(f"unknown object kind {obj.kind!r}")
    return tile, mask


def render_scene(spec):
    """Composite a scene spec into an RGB image plus ground truth."""
    w, h = int(spec.width), int(spec.height)
    if w < 1 or h < 1:
        raise ValueError("canvas dimensions must be >= 1")
    canvas = np.empty((h, w, 3), dtype=np.uint8)
    canvas[:, :] = np.asarray(spec.background, dtype=np.uint8)
    truths = []
    for idx, obj in enumerate(spec.objects):
        tile, mask = _object_tile(obj)
        if obj.angle % 360 != 0:
            tile = rotate(tile, obj.angle, fill=0)
            mask = rotate(mask.astype(np.uint8) * 255, obj.angle, fill=0) > 127
        th, tw = tile.shape
        x0 = round(obj.cx - tw / 2)
        y0 = round(obj.cy - th / 2)
        if x0 < 0 or y0 < 0 or x0 + tw > w or y0 + th > h:
            raise ValueError(f"object {idx} ({obj.kind}) falls outside the canvas")
        region = canvas[y0 : y0 + th, x0 : x0 + tw]
        region[mask] = tile[mask, None]
        ys, xs = np.nonzero(mask)
        truths.append(
            SceneTruth(
                index=idx,
                kind=obj.kind,
                cls=_TRUTH_CLASS[obj.kind],
                bbox=(
                    x0 + int(xs.min()),
                    y0 + int(ys.min()),
                    int(xs.max() - xs.min() + 1),
                    int(ys.max() - ys.min() + 1),
                ),
                cx=obj.cx,
                cy=obj.cy,
                angle=obj.angle,
                scale=obj.scale,
                rank=normalize_rank(obj.rank) if obj.kind == "card" else None,
                suit=obj.suit if obj.kind == "card" else None,
            )
        )
    if spec.brightness != 1.0 or spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        out = canvas.astype(np.float64) * spec.brightness
        if spec.noise_sigma > 0:
            out = out + rng.normal(0.0, spec.noise_sigma, canvas.shape)
        canvas = np.clip(np.rint(out), 0, 255).astype(np.uint8)
    return canvas, truths


def parse_scene_spec(text):
    """Parse the line-oriented scene description format.

    Directives (one per line, '#' starts a comment):
        canvas W H
        background R G B
        brightness F
        noise SIGMA SEED
        object card CX CY ANGLE SCALE RANK SUIT
        object rect CX CY ANGLE SCALE
        object disk CX CY ANGLE SCALE
    """
    spec = SceneSpec()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            key = parts[0]
            if key == "canvas":
                spec.width, spec.height = int(parts[1]), int(parts[2])
            elif key == "background":
                spec.background = (int(parts[1]), int(parts[2]), int(parts[3]))
            elif key == "brightness":
                spec.brightness = float(parts[1])
            elif key == "noise":
                spec.noise_sigma = float(parts[1])
                spec.seed = int(parts[2])
            elif key == "object":
                kind = parts[1]
                cx, cy = float(parts[2]), float(parts[3])
                angle, scale = float(parts[4]), float(parts[5])
                rank = suit = None
                if kind == "card":
                    rank, suit = parts[6], check_suit(parts[7])
                elif kind not in ("rect", "disk"):
                    raise ValueError(f"unknown object kind {kind!r}")
                spec.objects.append(SceneObject(kind, cx, cy, angle, scale, rank, suit))
            else:
                raise ValueError(f"unknown directive {key!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"scene spec line {lineno}: {raw.strip()!r}: {exc}") from None
    return spec


def format_truths(truths):
    lines = ["# index class x y w h angle scale rank suit"]
    for t in truths:
        x, y, w, h = t.bbox
        rank = display_rank(t.rank) if t.rank else "-"
        suit = t.suit or "-"
        lines.append(
            f"{t.index}\t{t.cls}\t{x}\t{y}\t{w}\t{h}\t{t.angle:g}\t{t.scale:g}\t{rank}\t{suit}"
        )
    return "\n".join(lines) + "\n"


def parse_truths(text):
    truths = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        f = line.split("\t")
        if len(f) != 10:
            raise ValueError(f"malformed truth line: {raw!r}")
        truths.append(
            SceneTruth(
                index=int(f[0]),
                kind={"CARD": "card", "RECT": "rect", "OTHER": "disk"}[f[1]],
                cls=f[1],
                bbox=(int(f[2]), int(f[3]), int(f[4]), int(f[5])),
                cx=float(f[2]) + float(f[4]) / 2,
                cy=float(f[3]) + float(f[5]) / 2,
                angle=float(f[6]),
                scale=float(f[7]),
                rank=None if f[8] == "-" else normalize_rank(f[8]),
                suit=None if f[9] == "-" else f[9],
            )
        )
    return truths


def full_deck():
    """All 52 (rank_key, suit) pairs in canonical order."""
    return [(r, s) for s in SUIT_KEYS for r in RANK_KEYS]
