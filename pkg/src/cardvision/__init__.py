"""Two-stage playing-card vision: detect card-shaped objects on a table
scene, then read each card's rank and suit by template correlation."""

from .detector import (
    CARD,
    OTHER,
    RECT,
    Detection,
    DetectorConfig,
    annotate,
    detect,
    detect_and_read,
    segment_scene,
    verify_card,
)
from .errors import (
    CardVisionError,
    EmptyCornerError,
    LowConfidenceError,
    TemplateError,
)
from .estimator import CardRecognizer
from .filters import conv2_same, gaussian_blur, gaussian_kernel, hist_equalize, median_filter
from .image import binarize, otsu_level, resize, rotate, to_grayscale
from .matching import best_match, normxcorr, subtractive_score
from .morphology import (
    EdgeConfig,
    LabelMap,
    StructuringElement,
    area_open,
    closing,
    dilate,
    fill_holes,
    label_components,
    sobel_edges,
    trace_boundaries,
)
from .reader import (
    CardLabel,
    SemanticsConfig,
    classify,
    extract_corner,
    preprocess_corner,
    read_card,
)
from .regions import RegionProps, region_props
from .synth import (
    SceneObject,
    SceneSpec,
    full_deck,
    jitter,
    render_card,
    render_scene,
)
from .templates import TemplateSet, build_templates, load, save

__version__ = "0.1.0"
