"""Scene object detection and card verification.

A table scene is segmented into high-contrast blobs (edges, gap bridging,
hole filling, speck removal), each blob is measured, de-rotated by its
principal-axis orientation, and classified:

    OTHER - de-rotated fill ratio below the rectangle threshold
    RECT  - rectangular, but the edge strips do not match a card
    CARD  - rectangular, card-shaped aspect, edge strips match

Card candidates are normalized to an upright canonical raster whose left
and right strips are compared against the stored edge templates with a
subtractive score.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCornerError, LowConfidenceError
from .image import rotate, resize, to_grayscale
from .matching import subtractive_score
from .morphology import (
    EdgeConfig,
    StructuringElement,
    area_open,
    dilate,
    fill_holes,
    label_components,
    sobel_edges,
    trace_boundaries,
)
from .reader import CANONICAL_CARD, SemanticsConfig, read_card
from .regions import region_props
from .validation import check_rgb

CARD = "CARD"
RECT = "RECT"
OTHER = "OTHER"

CLASS_COLORS = {CARD: (0, 255, 0), RECT: (0, 0, 255), OTHER: (255, 0, 0)}

_BASE_MIN_AREA = 300  # at 640x480; scaled with scene area


@dataclass(frozen=True)
class DetectorConfig:
    edge: EdgeConfig = field(default_factory=EdgeConfig)
    min_area: int = None  # None: scale the 640x480 default to the scene
    rect_fill_ratio_min: float = 0.85
    card_aspect: tuple = (0.62, 0.80)
    edge_strip_width: int = 20
    canonical_card: tuple = CANONICAL_CARD
    tau_edge: float = 0.12

    def __post_init__(self):
        lo, hi = self.card_aspect
        if not 0 < lo < hi < 1:
            raise ValueError("card_aspect must satisfy 0 < lo < hi < 1")
        if not 0 < self.rect_fill_ratio_min <= 1:
            raise ValueError("rect_fill_ratio_min must be in (0, 1]")
        if not 0 < self.tau_edge < 1:
            raise ValueError("tau_edge must be in (0, 1)")
        cw, ch = self.canonical_card
        if min(cw, ch) < self.edge_strip_width:
            raise ValueError("canonical card smaller than the edge strip")

    def effective_min_area(self, width, height):
        if self.min_area is not None:
            return int(self.min_area)
        return int(round(_BASE_MIN_AREA * (width * height) / (640.0 * 480.0)))


@dataclass
class Detection:
    cls: str  # CARD | RECT | OTHER
    boundary: np.ndarray  # (n, 2) of (row, col)
    props: object  # RegionProps
    upright_crop: np.ndarray = None  # canonical grayscale crop (CARD/RECT)
    edge_score: float = None
    label: object = None  # CardLabel, filled by the reading stage


def segment_scene(img, cfg=None):
    """Scene -> (mask, labels, props, boundaries), index-aligned."""
    cfg = cfg or DetectorConfig()
    rgb = check_rgb(img)
    gray = to_grayscale(rgb)
    edges = sobel_edges(gray, cfg.edge)
    # line elements bridge one-pixel gaps in object outlines
    bridged = dilate(edges, StructuringElement.rectangle(1, 3))
    bridged = dilate(bridged, StructuringElement.rectangle(3, 1))
    solid = fill_holes(bridged)
    clean = area_open(solid, cfg.effective_min_area(rgb.shape[1], rgb.shape[0]))
    labels = label_components(clean, connectivity=8)
    boundaries = trace_boundaries(clean)
    props = region_props(labels, boundaries)
    return clean, labels, props, boundaries


def _derotate(mask_crop, gray_crop, orientation):
    """Rotate a component crop upright and cut to the occupied box."""
    rot_mask = rotate(mask_crop.astype(np.uint8) * 255, -orientation, fill=0) > 127
    rot_gray = rotate(gray_crop, -orientation, fill=0)
    ys, xs = np.nonzero(rot_mask)
    if ys.size == 0:
        return rot_mask, rot_gray
    box = (slice(ys.min(), ys.max() + 1), slice(xs.min(), xs.max() + 1))
    return rot_mask[box], rot_gray[box]


def classify_shape(props, mask_crop, cfg=None, gray_crop=None):
    """RECT or OTHER by the fill ratio of the de-rotated component.

    Returns (cls, upright mask, upright grayscale crop or None). The fill
    ratio compares the component area against its de-rotated tight box, so
    rectangles land near 1 and disks near pi/4.
    """
    cfg = cfg or DetectorConfig()
    if gray_crop is None:
        gray_crop = mask_crop.astype(np.uint8) * 255
    upright_mask, upright_gray = _derotate(mask_crop, gray_crop, props.orientation)
    h, w = upright_mask.shape
    fill_ratio = props.area / float(h * w)
    cls = RECT if fill_ratio >= cfg.rect_fill_ratio_min else OTHER
    return cls, upright_mask, upright_gray


def canonical_crop(upright_gray, cfg=None):
    """Portrait canonical raster of an upright crop (long side vertical)."""
    cfg = cfg or DetectorConfig()
    gray = upright_gray
    if gray.shape[0] < gray.shape[1]:
        gray = np.rot90(gray, -1)
    cw, ch = cfg.canonical_card
    return resize(gray, cw, ch)


def verify_card(upright_gray, templates, cfg=None):
    """Decide whether an upright rectangular crop is a face-up card.

    Gates on aspect ratio first, then compares the canonical crop's left
    and right strips against the stored edge templates; the mean
    subtractive score must stay at or below tau_edge.
    """
    cfg = cfg or DetectorConfig()
    h, w = upright_gray.shape
    aspect = min(w, h) / float(max(w, h))
    lo, hi = cfg.card_aspect
    if not lo <= aspect <= hi:
        return False, 1.0
    card = canonical_crop(upright_gray, cfg)
    strip_w = cfg.edge_strip_width
    if templates.edge_strip_width != strip_w:
        raise ValueError(
            f"template strips are {templates.edge_strip_width} wide, "
            f"config expects {strip_w}"
        )
    left = subtractive_score(card[:, :strip_w], templates.left_edge)
    right = subtractive_score(card[:, -strip_w:], templates.right_edge)
    score = (left + right) / 2.0
    return score <= cfg.tau_edge, score


def detect(img, templates, cfg=None):
    """Detection stage: one classified Detection per surviving component."""
    cfg = cfg or DetectorConfig()
    rgb = check_rgb(img)
    gray = to_grayscale(rgb)
    mask, labels, props, boundaries = segment_scene(rgb, cfg)
    detections = []
    for i, (p, boundary) in enumerate(zip(props, boundaries)):
        x, y, w, h = p.bbox
        box = (slice(y, y + h), slice(x, x + w))
        comp_mask = labels.labels[box] == p.label
        comp_gray = np.where(comp_mask, gray[box], 0).astype(np.uint8)
        cls, upright_mask, upright_gray = classify_shape(p, comp_mask, cfg, comp_gray)
        crop = None
        edge_score = None
        if cls == RECT:
            is_card, edge_score = verify_card(upright_gray, templates, cfg)
            crop = canonical_crop(upright_gray, cfg)
            if is_card:
                cls = CARD
        detections.append(
            Detection(
                cls=cls,
                boundary=boundary,
                props=p,
                upright_crop=crop,
                edge_score=edge_score,
            )
        )
    return detections


def detect_and_read(img, templates, cfg=None, sem_cfg=None):
    """Full pipeline: detect objects, then read rank/suit of each card."""
    sem_cfg = sem_cfg or SemanticsConfig()
    detections = detect(img, templates, cfg)
    for det in detections:
        if det.cls == CARD:
            try:
                det.label = read_card(det.upright_crop, templates, sem_cfg)
            except (EmptyCornerError, LowConfidenceError):
                det.label = None
    return detections


def annotate(img, detections):
    """Paint each detection's boundary in its class color."""
    rgb = check_rgb(img)
    out = rgb.copy()
    h, w = out.shape[:2]
    for det in detections:
        boundary = np.asarray(det.boundary)
        if boundary.size == 0:
            continue
        rows, cols = boundary[:, 0], boundary[:, 1]
        if rows.min() < 0 or rows.max() >= h or cols.min() < 0 or cols.max() >= w:
            raise ValueError("detection boundary falls outside the image")
        out[rows, cols] = CLASS_COLORS[det.cls]
    return out
