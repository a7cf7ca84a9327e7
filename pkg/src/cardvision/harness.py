"""Evaluation harness: scene scoring, suit recognition rates, scale sweep.

Reproduces the measurement protocols on synthetic data: per-scene object
classification against ground truth, per-suit recognition over repeated
jittered renders of every card, and a Yes/No table of read success at
reduced card sizes.
"""

from dataclasses import dataclass

import numpy as np

from .detector import CARD, detect_and_read
from .errors import EmptyCornerError, LowConfidenceError
from .reader import read_card
from .synth import RANK_KEYS, SUIT_KEYS, display_rank, jitter, render_card

SWEEP_RATIOS = (1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3)


@dataclass
class SceneEval:
    name: str
    truth_count: int
    detection_count: int
    correct: int
    false_cards: int
    matches: list  # (truth index, detection index or None, classes equal)


def match_detections(truths, detections):
    """Greedy one-to-one matching by truth-center containment.

    A truth object matches the unused detection whose bounding box contains
    the truth box center, nearest centroid first. A detection absorbed by
    one truth cannot also satisfy another, so a blob merging two objects
    scores at most one of them.
    """
    used = set()
    matches = []
    for ti, t in enumerate(truths):
        tcx = t.bbox[0] + t.bbox[2] / 2.0
        tcy = t.bbox[1] + t.bbox[3] / 2.0
        best = None
        best_dist = np.inf
        for di, det in enumerate(detections):
            if di in used:
                continue
            x, y, w, h = det.props.bbox
            if not (x <= tcx < x + w and y <= tcy < y + h):
                continue
            dcx, dcy = det.props.centroid
            dist = (dcx - tcx) ** 2 + (dcy - tcy) ** 2
            if dist < best_dist:
                best = di
                best_dist = dist
        if best is None:
            matches.append((ti, None, False))
        else:
            used.add(best)
            matches.append((ti, best, detections[best].cls == t.cls))
    return matches


def evaluate_scene(name, truths, detections):
    matches = match_detections(truths, detections)
    correct = sum(1 for _, _, ok in matches if ok)
    card_truth_slots = {
        di for ti, di, _ in matches if di is not None and truths[ti].cls == CARD
    }
    false_cards = sum(
        1
        for di, det in enumerate(detections)
        if det.cls == CARD and di not in card_truth_slots
    )
    return SceneEval(
        name=name,
        truth_count=len(truths),
        detection_count=len(detections),
        correct=correct,
        false_cards=false_cards,
        matches=matches,
    )


def suit_recognition(templates, trials=10, seed=0, brightness_spread=0.2,
                     noise_sigma=4.0, sem_cfg=None):
    """Per-suit recognition rates over repeated jittered renders.

    Each of the 52 cards is rendered once and perturbed `trials` times with
    a seeded brightness gain in [1-spread, 1+spread] plus Gaussian pixel
    noise; a trial counts when both rank and suit read back correctly.
    """
    rates = {}
    total_ok = 0
    for si, suit in enumerate(SUIT_KEYS):
        ok = 0
        for ri, rank in enumerate(RANK_KEYS):
            base = render_card(rank, suit, 1.0)
            expected = (display_rank(rank), suit)
            for trial in range(trials):
                rng = np.random.default_rng([seed, si, ri, trial])
                gain = 1.0 - brightness_spread + 2 * brightness_spread * rng.random()
                noisy = jitter(base, gain, noise_sigma, seed=rng)
                try:
                    label = read_card(noisy, templates, sem_cfg)
                except (EmptyCornerError, LowConfidenceError):
                    continue
                if (label.rank, label.suit) == expected:
                    ok += 1
        rates[suit] = ok / float(len(RANK_KEYS) * trials)
        total_ok += ok
    rates["overall"] = total_ok / float(len(SUIT_KEYS) * len(RANK_KEYS) * trials)
    return rates


def scale_sweep(templates, suit="diamond", ratios=SWEEP_RATIOS, sem_cfg=None):
    """Read success per rank at reduced render sizes: {rank: [bool per ratio]}."""
    table = {}
    for rank in RANK_KEYS:
        row = []
        expected = (display_rank(rank), suit)
        for ratio in ratios:
            img = render_card(rank, suit, ratio)
            try:
                label = read_card(img, templates, sem_cfg)
                row.append((label.rank, label.suit) == expected)
            except (EmptyCornerError, LowConfidenceError):
                row.append(False)
        table[rank] = row
    return table


def run_scene_corpus(pairs, templates, det_cfg=None, sem_cfg=None):
    """Evaluate (name, scene image, truths) triples end to end."""
    results = []
    for name, scene, truths in pairs:
        detections = detect_and_read(scene, templates, det_cfg, sem_cfg)
        results.append(evaluate_scene(name, truths, detections))
    return results


def format_report(scene_evals, suit_rates, sweep, ratios=SWEEP_RATIOS):
    lines = []
    total_truth = sum(e.truth_count for e in scene_evals)
    total_correct = sum(e.correct for e in scene_evals)
    total_false = sum(e.false_cards for e in scene_evals)
    for e in scene_evals:
        lines.append(
            f"[detection] scene={e.name} objects={e.truth_count} "
            f"detections={e.detection_count} correct={e.correct} "
            f"false_cards={e.false_cards}"
        )
    if scene_evals:
        recall = total_correct / total_truth if total_truth else 1.0
        lines.append(
            f"[detection] total objects={total_truth} correct={total_correct} "
            f"recall={recall:.4f} false_cards={total_false}"
        )
    for suit in SUIT_KEYS:
        lines.append(f"[suits] {suit}={suit_rates[suit]:.4f}")
    lines.append(f"[suits] overall={suit_rates['overall']:.4f}")
    header = " ".join(f"{r:g}" for r in ratios)
    lines.append(f"[sweep] rank {header}")
    for rank in RANK_KEYS:
        cells = " ".join("Yes" if ok else "No" for ok in sweep[rank])
        lines.append(f"[sweep] {display_rank(rank)} {cells}")
    return "\n".join(lines) + "\n"
