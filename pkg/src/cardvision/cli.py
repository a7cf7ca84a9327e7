"""Command-line front end.

Commands: detect, read, templates build, synth, eval. Images are
exchanged as binary PPM/PGM. Exit codes: 0 success, 1 usage error,
2 I/O or file-format error, 3 pipeline error (empty corner or low
match confidence).
"""

import json
import os
import sys

import click
import numpy as np

from . import harness, io, synth, templates as template_store
from .detector import DetectorConfig, annotate, detect_and_read
from .errors import EmptyCornerError, LowConfidenceError, TemplateError
from .morphology import EdgeConfig
from .reader import SemanticsConfig, read_card
from .synth import display_rank

_DETECTOR_KEYS = (
    "fudge_factor",
    "min_area",
    "rect_fill_ratio_min",
    "card_aspect",
    "edge_strip_width",
    "tau_edge",
)
_SEMANTICS_KEYS = ("corner_frac", "min_confidence", "split_row_frac")


def _load_config(path):
    if path is None:
        return {}
    with open(path, encoding="utf-8") as f:
        try:
            cfg = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from None
    unknown = set(cfg) - set(_DETECTOR_KEYS) - set(_SEMANTICS_KEYS)
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {', '.join(sorted(unknown))}")
    return cfg


def _configs(config_path, fudge=None, min_area=None):
    raw = _load_config(config_path)
    if fudge is not None:
        raw["fudge_factor"] = fudge
    if min_area is not None:
        raw["min_area"] = min_area
    det = DetectorConfig(
        edge=EdgeConfig(fudge_factor=raw.get("fudge_factor", 0.5)),
        min_area=raw.get("min_area"),
        rect_fill_ratio_min=raw.get("rect_fill_ratio_min", 0.85),
        card_aspect=tuple(raw.get("card_aspect", (0.62, 0.80))),
        edge_strip_width=int(raw.get("edge_strip_width", 20)),
        tau_edge=raw.get("tau_edge", 0.12),
    )
    sem = SemanticsConfig(
        corner_frac=tuple(raw.get("corner_frac", (0.18, 0.28))),
        min_confidence=raw.get("min_confidence", 0.40),
        split_row_frac=raw.get("split_row_frac", 0.55),
    )
    return det, sem


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def _format_detections(detections):
    lines = []
    for i, det in enumerate(detections):
        x, y, w, h = det.props.bbox
        edge = f"{det.edge_score:.4f}" if det.edge_score is not None else "-"
        if det.label is not None:
            rank, suit = det.label.rank, det.label.suit
            rscore = f"{det.label.rank_score:.4f}"
            sscore = f"{det.label.suit_score:.4f}"
        else:
            rank = suit = rscore = sscore = "-"
        lines.append(
            f"index={i} class={det.cls} bbox={x},{y},{w},{h} "
            f"orientation_deg={det.props.orientation:.2f} edge_score={edge} "
            f"rank={rank} suit={suit} rank_score={rscore} suit_score={sscore}"
        )
    return "\n".join(lines) + ("\n" if lines else "")


@click.group()
def cli():
    """Playing-card detection and reading on table scenes."""


@cli.command("detect")
@click.argument("image_path", type=click.Path())
@click.option("--templates", "templates_dir", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path(), help="Annotated PPM output.")
@click.option("--report", "report_path", type=click.Path(), help="Detections report file.")
@click.option("--fudge", type=float, default=None, help="Edge threshold multiplier.")
@click.option("--min-area", type=int, default=None, help="Smallest kept component.")
@click.option("--config", "config_path", type=click.Path(), default=None)
def cmd_detect(image_path, templates_dir, out_path, report_path, fudge, min_area, config_path):
    """Detect objects in a scene, classify them, and read the cards."""
    det_cfg, sem_cfg = _configs(config_path, fudge, min_area)
    scene = io.read_rgb(image_path)
    ts = template_store.load(templates_dir)
    detections = detect_and_read(scene, ts, det_cfg, sem_cfg)
    if out_path:
        io.write_rgb(out_path, annotate(scene, detections))
    _emit(_format_detections(detections), report_path)


@cli.command("read")
@click.argument("image_path", type=click.Path())
@click.option("--templates", "templates_dir", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
def cmd_read(image_path, templates_dir, config_path):
    """Read the rank and suit of a single upright card image."""
    _, sem_cfg = _configs(config_path)
    card = io.read_gray(image_path)
    ts = template_store.load(templates_dir)
    label = read_card(card, ts, sem_cfg)
    click.echo(
        f"rank={label.rank} suit={label.suit} "
        f"rank_score={label.rank_score:.4f} suit_score={label.suit_score:.4f}"
    )


@cli.group("templates")
def cmd_templates():
    """Template set management."""


@cmd_templates.command("build")
@click.argument("cards_dir", type=click.Path(), required=False)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--synthetic", is_flag=True, help="Build from the built-in synthetic deck.")
@click.option("--config", "config_path", type=click.Path(), default=None)
def cmd_templates_build(cards_dir, out_dir, synthetic, config_path):
    """Build templates from a directory of labeled cards.

    CARDS_DIR must contain cards.tsv with lines `filename<TAB>rank<TAB>suit`
    naming PGM images. With --synthetic the internal renderer supplies a
    full deck instead.
    """
    det_cfg, sem_cfg = _configs(config_path)
    if synthetic:
        cards = [(synth.render_card(r, s), r, s) for r, s in synth.full_deck()]
    elif cards_dir is None:
        raise click.UsageError("either CARDS_DIR or --synthetic is required")
    else:
        manifest = os.path.join(cards_dir, "cards.tsv")
        if not os.path.isfile(manifest):
            raise FileNotFoundError(f"no cards.tsv manifest in {cards_dir}")
        cards = []
        with open(manifest, encoding="utf-8") as f:
            for raw in f:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise ValueError(f"{manifest}: malformed line {raw!r}")
                filename, rank, suit = fields
                cards.append((io.read_gray(os.path.join(cards_dir, filename)), rank, suit))
    ts = template_store.build_templates(
        cards, edge_strip_width=det_cfg.edge_strip_width, cfg=sem_cfg
    )
    template_store.save(ts, out_dir)
    click.echo(f"wrote templates to {out_dir}")


@cli.command("synth")
@click.argument("spec_path", type=click.Path())
@click.option("--out", "out_path", type=click.Path(), help="Scene PPM (default: spec stem + .ppm).")
@click.option("--truth", "truth_path", type=click.Path(), help="Ground-truth file (default: spec stem + .truth).")
def cmd_synth(spec_path, out_path, truth_path):
    """Render a synthetic scene description into a PPM plus ground truth."""
    with open(spec_path, encoding="utf-8") as f:
        spec = synth.parse_scene_spec(f.read())
    stem = os.path.splitext(spec_path)[0]
    out_path = out_path or stem + ".ppm"
    truth_path = truth_path or stem + ".truth"
    scene, truths = synth.render_scene(spec)
    io.write_rgb(out_path, scene)
    with open(truth_path, "w", encoding="utf-8") as f:
        f.write(synth.format_truths(truths))
    click.echo(f"wrote {out_path} and {truth_path}")


@cli.command("eval")
@click.argument("scenes_dir", type=click.Path())
@click.option("--templates", "templates_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=0, help="Seed for the jittered renders.")
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--config", "config_path", type=click.Path(), default=None)
def cmd_eval(scenes_dir, templates_dir, seed, report_path, config_path):
    """Score scene detection, suit recognition, and the scale sweep.

    SCENES_DIR holds pairs NAME.ppm / NAME.truth as written by `synth`.
    """
    det_cfg, sem_cfg = _configs(config_path)
    ts = template_store.load(templates_dir)
    pairs = []
    names = sorted(n for n in os.listdir(scenes_dir) if n.endswith(".ppm"))
    for name in names:
        stem = os.path.splitext(name)[0]
        truth_file = os.path.join(scenes_dir, stem + ".truth")
        if not os.path.isfile(truth_file):
            raise FileNotFoundError(f"missing ground truth for {name}: {truth_file}")
        with open(truth_file, encoding="utf-8") as f:
            truths = synth.parse_truths(f.read())
        pairs.append((stem, io.read_rgb(os.path.join(scenes_dir, name)), truths))
    scene_evals = harness.run_scene_corpus(pairs, ts, det_cfg, sem_cfg)
    rates = harness.suit_recognition(ts, seed=seed, sem_cfg=sem_cfg)
    sweep = harness.scale_sweep(ts, sem_cfg=sem_cfg)
    _emit(harness.format_report(scene_evals, rates, sweep), report_path)


def main(argv=None):
    """Entry point with explicit exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (EmptyCornerError, LowConfidenceError) as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        return 3
    except (OSError, ValueError, TemplateError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
