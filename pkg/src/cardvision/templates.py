"""Build, persist, and load template sets.

A template set holds the two card edge strips (grayscale, averaged over
the whole deck) and one binary glyph per rank and suit, extracted from a
designated exemplar card through the same corner pipeline used at read
time. On disk a set is a directory of PGM files plus a manifest.tsv.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import io
from .errors import TemplateError
from .image import resize
from .reader import (
    CANONICAL_CARD,
    GLYPH_SIZE,
    SemanticsConfig,
    extract_corner,
    preprocess_corner,
    split_corner_mask,
)
from .synth import RANK_KEYS, SUIT_KEYS, normalize_rank, check_suit
from .validation import check_gray

DEFAULT_EDGE_STRIP_WIDTH = 20


@dataclass
class TemplateSet:
    left_edge: np.ndarray  # grayscale strip, (card height, strip width)
    right_edge: np.ndarray
    ranks: dict  # key -> bool glyph mask, all the same shape
    suits: dict

    def validate(self):
        missing = [k for k in RANK_KEYS if k not in self.ranks]
        missing += [k for k in SUIT_KEYS if k not in self.suits]
        if missing:
            raise TemplateError(f"missing template keys: {', '.join(missing)}")
        shapes = {g.shape for g in self.ranks.values()}
        shapes |= {g.shape for g in self.suits.values()}
        if len(shapes) != 1:
            raise TemplateError(f"glyph dimensions are not uniform: {sorted(shapes)}")
        for name, glyph in list(self.ranks.items()) + list(self.suits.items()):
            if glyph.all() or not glyph.any():
                raise TemplateError(f"glyph {name!r} is constant")
        if self.left_edge.shape != self.right_edge.shape:
            raise TemplateError("edge strips differ in shape")
        return self

    @property
    def glyph_shape(self):
        return next(iter(self.ranks.values())).shape

    @property
    def edge_strip_width(self):
        return self.left_edge.shape[1]


def _canonical(card):
    gray = check_gray(card)
    if gray.shape[0] < gray.shape[1]:
        gray = np.rot90(gray, -1)
    cw, ch = CANONICAL_CARD
    if gray.shape != (ch, cw):
        gray = resize(gray, cw, ch)
    return gray


def _glyph_from_part(part_mask):
    lifted = part_mask.astype(np.uint8) * 255
    gw, gh = GLYPH_SIZE
    return resize(lifted, gw, gh) > 127


def build_templates(cards, edge_strip_width=DEFAULT_EDGE_STRIP_WIDTH, cfg=None):
    """Build a TemplateSet from labeled upright card images.

    `cards` yields (image, rank, suit) with at least one card per rank and
    per suit. Edge strips are per-pixel means over every card; each glyph
    comes from the first card seen with that rank or suit.
    """
    cfg = cfg or SemanticsConfig()
    strip_w = int(edge_strip_width)
    left_sum = right_sum = None
    rank_exemplar = {}
    suit_exemplar = {}
    n = 0
    for img, rank, suit in cards:
        rank_key = normalize_rank(rank)
        suit_key = check_suit(suit)
        card = _canonical(img)
        if left_sum is None:
            left_sum = np.zeros((card.shape[0], strip_w))
            right_sum = np.zeros((card.shape[0], strip_w))
        left_sum += card[:, :strip_w]
        right_sum += card[:, -strip_w:]
        n += 1
        rank_exemplar.setdefault(rank_key, card)
        suit_exemplar.setdefault(suit_key, card)
    if n == 0:
        raise TemplateError("no cards supplied")
    missing = [k for k in RANK_KEYS if k not in rank_exemplar]
    missing += [k for k in SUIT_KEYS if k not in suit_exemplar]
    if missing:
        raise TemplateError(f"deck does not cover: {', '.join(missing)}")

    ranks = {}
    suits = {}
    for key, card in rank_exemplar.items():
        mask = preprocess_corner(extract_corner(card, cfg), cfg)
        rank_part, _ = split_corner_mask(mask, cfg)
        ranks[key] = _glyph_from_part(rank_part)
    for key, card in suit_exemplar.items():
        mask = preprocess_corner(extract_corner(card, cfg), cfg)
        _, suit_part = split_corner_mask(mask, cfg)
        suits[key] = _glyph_from_part(suit_part)

    ts = TemplateSet(
        left_edge=np.clip(np.rint(left_sum / n), 0, 255).astype(np.uint8),
        right_edge=np.clip(np.rint(right_sum / n), 0, 255).astype(np.uint8),
        ranks=ranks,
        suits=suits,
    )
    return ts.validate()


def save(ts, directory):
    """Write a template set; `load(save(ts)) == ts` byte for byte."""
    ts.validate()
    os.makedirs(directory, exist_ok=True)
    entries = []

    def put(kind, key, filename, img, as_mask):
        path = os.path.join(directory, filename)
        if as_mask:
            io.write_mask(path, img)
            h, w = img.shape
        else:
            io.write_gray(path, img)
            h, w = img.shape
        entries.append(f"{kind}\t{key}\t{filename}\t{w}\t{h}")

    put("edge", "left", "edge_left.pgm", ts.left_edge, as_mask=False)
    put("edge", "right", "edge_right.pgm", ts.right_edge, as_mask=False)
    for key in RANK_KEYS:
        put("rank", key, f"rank_{key}.pgm", ts.ranks[key], as_mask=True)
    for key in SUIT_KEYS:
        put("suit", key, f"suit_{key}.pgm", ts.suits[key], as_mask=True)
    with open(os.path.join(directory, "manifest.tsv"), "w", encoding="ascii") as f:
        f.write("\n".join(entries) + "\n")


def load(directory):
    """Read a template set saved by `save`, validating as it goes."""
    manifest = os.path.join(directory, "manifest.tsv")
    if not os.path.isfile(manifest):
        raise TemplateError(f"no manifest.tsv in {directory}")
    left = right = None
    ranks = {}
    suits = {}
    with open(manifest, encoding="ascii") as f:
        for raw in f:
            line = raw.strip()
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise TemplateError(f"malformed manifest line: {raw!r}")
            kind, key, filename, w, h = fields
            path = os.path.join(directory, filename)
            if not os.path.isfile(path):
                raise TemplateError(f"manifest names a missing file: {path}")
            if kind == "edge":
                img = io.read_gray(path)
            elif kind in ("rank", "suit"):
                img = io.read_mask(path)
            else:
                raise TemplateError(f"unknown template kind {kind!r}")
            if img.shape != (int(h), int(w)):
                raise TemplateError(
                    f"{path}: manifest says {w}x{h} but file is "
                    f"{img.shape[1]}x{img.shape[0]}"
                )
            if kind == "edge" and key == "left":
                left = img
            elif kind == "edge" and key == "right":
                right = img
            elif kind == "rank":
                ranks[key] = img
            else:
                suits[key] = img
    if left is None or right is None:
        raise TemplateError("manifest is missing an edge strip")
    return TemplateSet(left_edge=left, right_edge=right, ranks=ranks, suits=suits).validate()
