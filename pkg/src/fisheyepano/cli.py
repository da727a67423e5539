"""Command-line interface.

All angle flags are in degrees.  ``--config path.json`` supplies
defaults for the flags of a subcommand; explicit flags win.  Outputs are
written atomically (temp file + rename).  Exit codes: 0 success, 1 I/O
or processing failure (with a machine-readable ``error: ...`` line on
stderr), 2 usage error.
"""

from __future__ import annotations

import functools
import json
import math
import sys

import click
import numpy as np

from . import boxes as boxes_mod
from . import formats
from .camera import StereographicCamera
from .errors import FisheyePanoError
from .evaluation import EvalConfig, evaluate
from .geometry import annotation_distribution
from .localization import distance_bin, locate_from_box
from .panorama import EquirectSpec, build_remap_table, normalize_input, remap_image
from .significance import ScaleConfig, pdat_scale, per_tile_argmax
from .tiling import build_tiling

SUPPORTED_WIDTHS = (2048, 2560, 3072)
DEFAULT_WIDTH = 3072


def apply_config_defaults(ctx: click.Context, param, value):
    """Eager --config callback: JSON values become defaults for unset flags."""
    if not value:
        return value
    with open(value) as f:
        cfg = json.load(f)
    ctx.default_map = {**cfg, **(ctx.default_map or {})}
    return value


def config_option(func):
    return click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False),
        callback=apply_config_defaults,
        is_eager=True,
        expose_value=False,
        help="JSON file with default values for this command's flags.",
    )(func)


def handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (FisheyePanoError, OSError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def make_spec(width: int, azimuth_origin_deg: float) -> EquirectSpec:
    return EquirectSpec(width, width // 4, math.radians(azimuth_origin_deg))


@click.group()
def main():
    """Overhead-fisheye geometry toolkit."""


@main.command()
@config_option
@click.option("--width", type=int, default=DEFAULT_WIDTH, show_default=True,
              help=f"Panorama width; height is width/4. One of {SUPPORTED_WIDTHS}.")
@click.option("--azimuth-origin-deg", type=float, default=0.0, show_default=True)
@click.option("--circle-radius", type=float, default=None,
              help="Fisheye image-circle radius in px (default: half the short side).")
@click.argument("input_image", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_image", type=click.Path(dir_okay=False))
@handle_errors
def remap(width, azimuth_origin_deg, circle_radius, input_image, output_image):
    """Convert a fisheye image into an equirectangular panorama."""
    if width not in SUPPORTED_WIDTHS:
        raise click.UsageError(f"--width must be one of {SUPPORTED_WIDTHS}")
    img = formats.read_image(input_image)
    img = normalize_input(img, circle_radius)
    side = img.shape[0]
    cam = StereographicCamera.from_image_size(side, side, circle_radius_px=circle_radius)
    spec = make_spec(width, azimuth_origin_deg)
    table = build_remap_table(cam, spec)
    formats.write_image(output_image, remap_image(img, table))


@main.command("tile-viz")
@config_option
@click.option("--Hf", "hf", type=int, required=True, help="Feature map height.")
@click.option("--Wf", "wf", type=int, required=True, help="Feature map width.")
@click.option("--K", "k", type=int, default=5, show_default=True, help="Number of regions.")
@click.option("--scale", type=int, default=4, show_default=True,
              help="Upscaling factor of the overlay image.")
@click.argument("output_image", type=click.Path(dir_okay=False))
@click.argument("output_json", type=click.Path(dir_okay=False))
@handle_errors
def tile_viz(hf, wf, k, scale, output_image, output_json):
    """Render the tiling as a grid overlay PNG and dump tile bounds as JSON."""
    spec = build_tiling(hf, wf, k=k)
    canvas = np.full((hf * scale, wf * scale), 255, dtype=np.uint8)
    for t in spec.tiles:
        r0, r1, c0, c1 = (x * scale for x in t.bounds)
        canvas[r0, c0:c1] = 0
        canvas[r1 - 1, c0:c1] = 0
        canvas[r0:r1, c0] = 0
        canvas[r0:r1, c1 - 1] = 0
    formats.write_image(output_image, canvas)
    regions = []
    for region in spec.regions:
        regions.append(
            {
                "index": region.index,
                "row_start": region.row_start,
                "row_end": region.row_end,
                "tile_side": region.tile_side,
                "rows_of_tiles": region.rows_of_tiles,
                "tiles": [
                    list(t.bounds) for t in spec.tiles if t.region_index == region.index
                ],
            }
        )
    formats.write_json(output_json, {"feature_height": hf, "feature_width": wf,
                                     "num_regions": k, "regions": regions})


@main.command("pdat-scale")
@config_option
@click.option("--alpha", type=float, default=2.0, show_default=True)
@click.option("--K", "k", type=int, default=5, show_default=True)
@click.option("--coords-json", type=click.Path(dir_okay=False), default=None,
              help="Where to write boosted coordinates (default: OUTPUT + .boosts.json).")
@click.argument("input_map", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_map", type=click.Path(dir_okay=False))
@handle_errors
def pdat_scale_cmd(alpha, k, coords_json, input_map, output_map):
    """Boost per-tile maxima of a significance map (CSV grid or gray PNG)."""
    is_csv = input_map.lower().endswith(".csv")
    if is_csv:
        grid = formats.read_csv_grid(input_map)
    else:
        grid = formats.read_image(input_map).astype(np.float64)
        if grid.ndim == 3:
            raise click.UsageError("significance map PNG must be single-channel")
    tiling = build_tiling(grid.shape[0], grid.shape[1], k=k)
    scaled = pdat_scale(grid, tiling, ScaleConfig(alpha))
    if is_csv:
        formats.write_csv_grid(output_map, scaled)
    else:
        formats.write_image(output_map, scaled)
    records = per_tile_argmax(grid, tiling)
    coords = [
        {"region": t.region_index, "row": row, "col": col, "value": value}
        for t, row, col, value in records
    ]
    formats.write_json(coords_json or output_map + ".boosts.json", coords)


@main.command("project-boxes")
@config_option
@click.option("--direction", type=click.Choice(["to-pano", "to-fisheye"]), required=True)
@click.option("--camera", "camera_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Camera config JSON.")
@click.option("--width", type=int, default=DEFAULT_WIDTH, show_default=True)
@click.option("--azimuth-origin-deg", type=float, default=0.0, show_default=True)
@click.option("--auto-seam", is_flag=True,
              help="For to-pano: pick an azimuth origin that avoids splitting boxes.")
@click.argument("input_json", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_json", type=click.Path(dir_okay=False))
@handle_errors
def project_boxes(direction, camera_path, width, azimuth_origin_deg, auto_seam,
                  input_json, output_json):
    """Project boxes between the fisheye and panorama frames."""
    cam = formats.load_camera_config(camera_path)
    spec = make_spec(width, azimuth_origin_deg)
    ann = formats.load_annotations(input_json)
    out = []
    if direction == "to-pano":
        if auto_seam and ann.fisheye_boxes:
            origin = boxes_mod.choose_seam_azimuth(
                [r for _, r, _ in ann.fisheye_boxes], cam, spec
            )
            spec = EquirectSpec(spec.width, spec.height, origin)
        for image_id, rect, confidence in ann.fisheye_boxes:
            box = boxes_mod.fisheye_rect_to_pano_box(rect, cam, spec)
            entry = {"image_id": image_id, **formats.pano_box_to_json(box)}
            if confidence is not None:
                entry["confidence"] = confidence
            out.append(entry)
        result = {
            "images": ann.images,
            "azimuth_origin_deg": math.degrees(spec.azimuth_origin),
            "annotations": out,
        }
    else:
        for rec in ann.pano_ground_truth + ann.pano_detections:
            quad = boxes_mod.pano_box_to_fisheye_quad(rec.box, cam, spec)
            rect = boxes_mod.quad_to_rotated_rect(quad)
            entry = {"image_id": rec.image_id, "rbox": formats.rbox_to_json(rect)}
            if hasattr(rec, "confidence"):
                entry["confidence"] = rec.confidence
            out.append(entry)
        result = {"images": ann.images, "annotations": out}
    formats.write_json(output_json, result)


@main.command("analyze-dist")
@config_option
@click.option("--width", type=int, default=DEFAULT_WIDTH, show_default=True)
@click.argument("input_json", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_csv", type=click.Path(dir_okay=False))
@handle_errors
def analyze_dist(width, input_json, output_csv):
    """Bin panorama annotation boxes by incident angle; write dist_stats CSV."""
    ann = formats.load_annotations(input_json)
    spec = make_spec(width, 0.0)
    stats = annotation_distribution(
        [g.box for g in ann.pano_ground_truth] + [d.box for d in ann.pano_detections],
        spec,
    )
    formats.write_csv(
        output_csv,
        ["theta_deg", "count", "mean_h", "std_h", "mean_w", "std_w"],
        stats.rows(),
    )


@main.command()
@config_option
@click.option("--width", type=int, default=DEFAULT_WIDTH, show_default=True)
@click.option("--azimuth-origin-deg", type=float, default=0.0, show_default=True)
@click.option("--camera-height", type=float, default=None,
              help="Uniform camera height in meters (overrides per-image metadata).")
@click.argument("detections_json", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_csv", type=click.Path(dir_okay=False))
@handle_errors
def localize(width, azimuth_origin_deg, camera_height, detections_json, output_csv):
    """Estimate ground positions from detection boxes."""
    ann = formats.load_annotations(detections_json)
    spec = make_spec(width, azimuth_origin_deg)
    heights = ann.camera_heights()
    rows = []
    records = ann.pano_detections + ann.pano_ground_truth
    for det_id, rec in enumerate(records):
        h = camera_height if camera_height is not None else heights.get(rec.image_id)
        if h is None:
            raise FisheyePanoError(
                f"no camera height for image {rec.image_id!r}; add camera_height_m "
                "to its image entry or pass --camera-height"
            )
        pos = locate_from_box(rec.box, spec, h)
        rows.append(
            (rec.image_id, det_id, pos.x_m, pos.y_m, pos.distance_m,
             distance_bin(pos.distance_m))
        )
    formats.write_csv(output_csv, ["image_id", "det_id", "x_m", "y_m", "d_m", "bin"], rows)


@main.command("eval")
@config_option
@click.option("--gt", "gt_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--dets", "dets_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), required=True)
@click.option("--width", type=int, default=DEFAULT_WIDTH, show_default=True)
@click.option("--camera-height", type=float, default=None,
              help="Uniform camera height in meters; enables distance bins and PE.")
@handle_errors
def eval_cmd(gt_path, dets_path, report_path, width, camera_height):
    """Score detections against ground truth; write report JSON and CSV."""
    gt_ann = formats.load_annotations(gt_path)
    det_ann = formats.load_annotations(dets_path)
    config = EvalConfig(
        spec=make_spec(width, 0.0),
        camera_height_m=camera_height,
        camera_heights=gt_ann.camera_heights(),
        image_splits=gt_ann.splits(),
    )
    report = evaluate(det_ann.pano_detections, gt_ann.pano_ground_truth, config)
    formats.write_json(report_path, report.as_dict())
    csv_path = report_path.rsplit(".", 1)[0] + ".csv"
    flat = report.as_dict()
    rows = []
    for key, value in flat.items():
        if isinstance(value, dict):
            rows.extend((f"{key}.{k}", v) for k, v in value.items())
        elif key != "flags":
            rows.append((key, value))
    formats.write_csv(csv_path, ["metric", "value"], rows)


if __name__ == "__main__":
    main()
