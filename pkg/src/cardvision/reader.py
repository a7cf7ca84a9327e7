"""Rank and suit reading from an upright card crop.

The top-left index corner is cropped, reduced to a solid glyph mask by an
edge-based chain, split into rank and suit parts, and each part is scored
against stored glyph templates by normalized cross-correlation. The card
is tried in both 180-degree orientations and the better one wins.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCornerError, LowConfidenceError
from .filters import conv2_same, gaussian_blur, hist_equalize, mean_kernel
from .image import resize
from .matching import best_match, normxcorr
from .morphology import (
    EdgeConfig,
    StructuringElement,
    area_open,
    closing,
    fill_holes,
    label_components,
    sobel_edges,
)
from .synth import RANK_KEYS, SUIT_KEYS, display_rank
from .validation import check_gray, check_mask

CANONICAL_CARD = (140, 200)  # (w, h) of an upright card crop
GLYPH_SIZE = (24, 32)  # (w, h) template raster
_GLYPH_MARGIN = 4  # background margin so templates can slide a little
_MIN_GLYPH_AREA = 8


@dataclass(frozen=True)
class SemanticsConfig:
    corner_frac: tuple = (0.18, 0.28)  # (w, h) fraction of the card
    min_confidence: float = 0.40
    conv_kernel: np.ndarray = field(default_factory=mean_kernel)
    split_row_frac: float = 0.55  # fallback split when glyphs merge

    def __post_init__(self):
        wf, hf = self.corner_frac
        if not (0 < wf <= 1 and 0 < hf <= 1):
            raise ValueError("corner_frac values must be in (0, 1]")
        if not 0 < self.min_confidence < 1:
            raise ValueError("min_confidence must be in (0, 1)")


@dataclass(frozen=True)
class CardLabel:
    rank: str  # A, 2..10, J, Q, K
    suit: str  # spade, heart, club, diamond
    rank_score: float
    suit_score: float


def extract_corner(card, cfg=None):
    """Crop the index corner anchored at the card's top-left pixel."""
    cfg = cfg or SemanticsConfig()
    gray = check_gray(card)
    h, w = gray.shape
    cw = max(1, round(w * cfg.corner_frac[0]))
    ch = max(1, round(h * cfg.corner_frac[1]))
    return gray[:ch, :cw]


def _tight_crop(mask):
    ys, xs = np.nonzero(mask)
    return mask[ys.min() : ys.max() + 1, xs.min() : xs.max() + 1]


def preprocess_corner(corner, cfg=None):
    """Reduce a corner crop to a solid glyph mask.

    Smooth, equalize, edge-detect, thicken the edges by an averaging
    convolution, close, drop specks, crop to the occupied box, and fill
    enclosed holes. Raises EmptyCornerError when nothing survives.
    """
    cfg = cfg or SemanticsConfig()
    gray = check_gray(corner)
    smoothed = hist_equalize(gaussian_blur(gray, 1.0))
    edges = sobel_edges(smoothed, EdgeConfig())
    thick = conv2_same(edges.astype(np.float64), cfg.conv_kernel) > 0
    closed = closing(thick, StructuringElement.rectangle(3, 3))
    kept = area_open(closed, _MIN_GLYPH_AREA)
    if not kept.any():
        raise EmptyCornerError("no foreground left in the index corner")
    return fill_holes(_tight_crop(kept))


def split_corner_mask(mask, cfg=None):
    """Split a corner mask into (rank part, suit part).

    Components are grouped by the widest vertical gap between them: rank
    above the gap, suit below. A glyph that fragments stays on its own
    side as long as the rank/suit gap remains the widest one. When the
    glyphs merge into a single component (or no gap exists), fall back to
    a fixed row split.
    """
    cfg = cfg or SemanticsConfig()
    mask = check_mask(mask)
    lm = label_components(mask, connectivity=8)
    if lm.count == 0:
        raise EmptyCornerError("corner mask is empty")
    split = None
    if lm.count >= 2:
        extents = []
        for lab in range(1, lm.count + 1):
            rows = np.nonzero((lm.labels == lab).any(axis=1))[0]
            extents.append((int(rows[0]), int(rows[-1])))
        extents.sort()
        best_gap = 0
        group_bottom = extents[0][1]
        for top, bottom in extents[1:]:
            gap = top - group_bottom - 1
            if gap > best_gap:
                best_gap = gap
                split = group_bottom + 1 + gap // 2
            group_bottom = max(group_bottom, bottom)
    if split is None:
        split = max(1, min(mask.shape[0] - 1, round(mask.shape[0] * cfg.split_row_frac)))
    rank_part = mask.copy()
    rank_part[split:, :] = False
    suit_part = mask.copy()
    suit_part[:split, :] = False
    if not rank_part.any() or not suit_part.any():
        raise EmptyCornerError("corner mask does not contain two glyphs")
    return _tight_crop(rank_part), _tight_crop(suit_part)


def _to_glyph_image(mask, with_margin):
    """Resize a glyph mask to the template raster, lifted to {0, 255}."""
    lifted = mask.astype(np.uint8) * 255
    gw, gh = GLYPH_SIZE
    scaled = resize(lifted, gw, gh) > 127
    if not with_margin:
        return scaled
    m = _GLYPH_MARGIN
    framed = np.zeros((gh + 2 * m, gw + 2 * m), dtype=bool)
    framed[m : m + gh, m : m + gw] = scaled
    return framed


def _match_family(part_mask, templates, order):
    probe = _to_glyph_image(part_mask, with_margin=True).astype(np.float64) * 255.0
    best_key = None
    best_peak = -np.inf
    for key in order:
        tmpl = templates[key].astype(np.float64) * 255.0
        peak, _ = best_match(normxcorr(tmpl, probe))
        if peak > best_peak:
            best_key = key
            best_peak = peak
    return best_key, best_peak


def classify(corner_mask, templates, cfg=None):
    """Label a corner mask against the stored rank and suit glyphs.

    The winning rank glyph '0' reads as rank 10: tens carry a single zero
    glyph, so a plain digit matcher plus this one rule covers the deck.
    """
    cfg = cfg or SemanticsConfig()
    rank_part, suit_part = split_corner_mask(corner_mask, cfg)
    rank_key, rank_peak = _match_family(rank_part, templates.ranks, RANK_KEYS)
    suit_key, suit_peak = _match_family(suit_part, templates.suits, SUIT_KEYS)
    if rank_peak < cfg.min_confidence or suit_peak < cfg.min_confidence:
        raise LowConfidenceError(
            f"best match too weak (rank {rank_key}={rank_peak:.3f}, "
            f"suit {suit_key}={suit_peak:.3f})"
        )
    return CardLabel(
        rank=display_rank(rank_key),
        suit=suit_key,
        rank_score=float(rank_peak),
        suit_score=float(suit_peak),
    )


def read_card(card_crop, templates, cfg=None):
    """Read rank and suit from an upright card crop.

    The crop is normalized to the canonical raster, then read both as-is
    and rotated 180 degrees; the orientation with the higher combined
    score wins. Errors propagate only when both orientations fail.
    """
    cfg = cfg or SemanticsConfig()
    gray = check_gray(card_crop)
    if gray.shape[0] < gray.shape[1]:
        gray = np.rot90(gray, -1)  # landscape input: stand it upright
    cw, ch = CANONICAL_CARD
    if gray.shape != (ch, cw):
        gray = resize(gray, cw, ch)
    candidates = []
    failures = []
    for oriented in (gray, gray[::-1, ::-1]):
        try:
            corner = extract_corner(oriented, cfg)
            mask = preprocess_corner(corner, cfg)
            candidates.append(classify(mask, templates, cfg))
        except (EmptyCornerError, LowConfidenceError) as exc:
            failures.append(exc)
    if not candidates:
        raise failures[0]
    return max(candidates, key=lambda lab: lab.rank_score + lab.suit_score)
