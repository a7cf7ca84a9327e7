"""Scikit-learn style front end.

`CardRecognizer` follows the estimator protocol: construct with plain
hyperparameters, `fit` on labeled reference card images (this builds the
template set), then `predict` on table scenes to get per-scene detection
lists. It composes with sklearn tooling via `get_params`/`set_params`.
"""

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .detector import DetectorConfig, detect_and_read
from .morphology import EdgeConfig
from .reader import SemanticsConfig, read_card
from .templates import build_templates
from .validation import check_gray, check_rgb


class CardRecognizer(BaseEstimator):
    """Two-stage card detector and reader.

    Parameters
    ----------
    fudge_factor : float
        Multiplier on the automatic edge threshold.
    min_area : int or None
        Smallest component kept, in pixels; None scales a 640x480 default.
    rect_fill_ratio_min : float
        De-rotated fill ratio at or above which a blob counts as a rectangle.
    card_aspect : (float, float)
        Accepted short/long side ratio window for cards.
    edge_strip_width : int
        Width of the left/right verification strips.
    tau_edge : float
        Maximum mean subtractive score for a crop to pass as a card.
    corner_frac : (float, float)
        Index corner size as a fraction of the card raster.
    min_confidence : float
        Weakest acceptable template correlation peak when reading.
    """

    def __init__(
        self,
        fudge_factor=0.5,
        min_area=None,
        rect_fill_ratio_min=0.85,
        card_aspect=(0.62, 0.80),
        edge_strip_width=20,
        tau_edge=0.12,
        corner_frac=(0.18, 0.28),
        min_confidence=0.40,
    ):
        self.fudge_factor = fudge_factor
        self.min_area = min_area
        self.rect_fill_ratio_min = rect_fill_ratio_min
        self.card_aspect = card_aspect
        self.edge_strip_width = edge_strip_width
        self.tau_edge = tau_edge
        self.corner_frac = corner_frac
        self.min_confidence = min_confidence

    def _detector_config(self):
        return DetectorConfig(
            edge=EdgeConfig(fudge_factor=self.fudge_factor),
            min_area=self.min_area,
            rect_fill_ratio_min=self.rect_fill_ratio_min,
            card_aspect=tuple(self.card_aspect),
            edge_strip_width=self.edge_strip_width,
            tau_edge=self.tau_edge,
        )

    def _semantics_config(self):
        return SemanticsConfig(
            corner_frac=tuple(self.corner_frac),
            min_confidence=self.min_confidence,
        )

    def fit(self, X, y):
        """Build templates from reference cards.

        X is a sequence of upright grayscale card images; y gives each
        card's label as (rank, suit) or a "rank:suit" string.
        """
        labeled = []
        for img, label in zip(X, y):
            if isinstance(label, str):
                rank, suit = label.split(":")
            else:
                rank, suit = label
            labeled.append((check_gray(img), rank, suit))
        self.templates_ = build_templates(
            labeled, edge_strip_width=self.edge_strip_width, cfg=self._semantics_config()
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "templates_"):
            raise NotFittedError("CardRecognizer must be fit before predicting")

    def predict(self, X):
        """Detect and read every scene; one Detection list per input."""
        self._check_fitted()
        det_cfg = self._detector_config()
        sem_cfg = self._semantics_config()
        return [
            detect_and_read(check_rgb(scene), self.templates_, det_cfg, sem_cfg)
            for scene in X
        ]

    def read_cards(self, X):
        """Read rank/suit labels from upright card crops."""
        self._check_fitted()
        cfg = self._semantics_config()
        return [read_card(check_gray(card), self.templates_, cfg) for card in X]
