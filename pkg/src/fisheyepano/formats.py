"""File formats: camera config, annotation/detection JSON, CSV and image I/O.

Annotation JSON schema::

    {
      "images": [{"id": ..., "file": ..., "width": ..., "height": ...,
                  "camera_height_m": ...,        # optional, for localization
                  "split": ...}],                # optional tag passthrough
      "annotations": [
        {"image_id": ..., "rbox": [cx, cy, w, h, angle_deg]},   # fisheye frame
        {"image_id": ..., "pano_box": [u_min, v_min, u_max, v_max],
         "wrap": false, "confidence": 0.9}       # panorama frame
      ]
    }

``confidence`` marks detection files; ground-truth entries omit it.
Optional ``position_m`` = [x, y] attaches a world position to a ground
truth record.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from .boxes import PanoBox, RotatedRect
from .camera import StereographicCamera
from .errors import ConfigurationError, InvalidArgumentError
from .evaluation import DetectionRecord, GroundTruthRecord
from .localization import GroundPosition


def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write via a temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_json(path: str, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def write_csv(path: str, header, rows) -> None:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def load_camera_config(path: str) -> StereographicCamera:
    """Camera from JSON: width, height, optional circle_radius_px / principal_point."""
    with open(path) as f:
        cfg = json.load(f)
    try:
        width = int(cfg["width"])
        height = int(cfg["height"])
    except KeyError as exc:
        raise ConfigurationError(f"camera config {path} missing field {exc}") from exc
    principal = cfg.get("principal_point")
    return StereographicCamera.from_image_size(
        width,
        height,
        circle_radius_px=cfg.get("circle_radius_px"),
        principal_point=tuple(principal) if principal else None,
    )


@dataclass
class AnnotationFile:
    """Parsed annotation/detection JSON."""

    images: list = field(default_factory=list)  # raw image dicts
    pano_detections: list = field(default_factory=list)  # DetectionRecord
    pano_ground_truth: list = field(default_factory=list)  # GroundTruthRecord
    fisheye_boxes: list = field(default_factory=list)  # (image_id, RotatedRect, confidence|None)

    def camera_heights(self) -> dict:
        return {
            img["id"]: img["camera_height_m"]
            for img in self.images
            if "camera_height_m" in img
        }

    def splits(self) -> dict:
        return {img["id"]: img["split"] for img in self.images if "split" in img}


def load_annotations(path: str) -> AnnotationFile:
    with open(path) as f:
        data = json.load(f)
    out = AnnotationFile(images=data.get("images", []))
    for ann in data.get("annotations", []):
        image_id = ann["image_id"]
        confidence = ann.get("confidence")
        if "rbox" in ann:
            cx, cy, w, h, angle_deg = ann["rbox"]
            rect = RotatedRect(cx, cy, w, h, math.radians(angle_deg))
            out.fisheye_boxes.append((image_id, rect, confidence))
        elif "pano_box" in ann:
            u_min, v_min, u_max, v_max = ann["pano_box"]
            box = PanoBox(u_min, v_min, u_max, v_max, wrap=bool(ann.get("wrap", False)))
            if confidence is not None:
                out.pano_detections.append(DetectionRecord(image_id, box, confidence))
            else:
                position = None
                if "position_m" in ann:
                    x, y = ann["position_m"]
                    position = GroundPosition(x, y)
                out.pano_ground_truth.append(GroundTruthRecord(image_id, box, position))
        else:
            raise InvalidArgumentError(
                f"annotation for image {image_id!r} has neither 'rbox' nor 'pano_box'"
            )
    return out


def pano_box_to_json(box: PanoBox) -> dict:
    entry = {"pano_box": [box.u_min, box.v_min, box.u_max, box.v_max]}
    if box.wrap:
        entry["wrap"] = True
    return entry


def rbox_to_json(rect: RotatedRect) -> list:
    return [rect.cx, rect.cy, rect.w, rect.h, math.degrees(rect.angle)]


def read_image(path: str) -> np.ndarray:
    """Load a PNG/PPM/PGM image as uint8, gray or RGB."""
    with Image.open(path) as img:
        if img.mode not in ("L", "RGB"):
            img = img.convert("RGB" if "A" in img.mode or img.mode == "P" else "L")
        return np.asarray(img)


def write_image(path: str, data: np.ndarray) -> None:
    arr = np.asarray(data)
    if not np.issubdtype(arr.dtype, np.integer):
        arr = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
    img = Image.fromarray(arr.astype(np.uint8))
    import io

    buf = io.BytesIO()
    fmt = "PPM" if path.lower().endswith((".ppm", ".pgm")) else "PNG"
    img.save(buf, format=fmt)
    atomic_write_bytes(path, buf.getvalue())


def read_csv_grid(path: str) -> np.ndarray:
    with open(path) as f:
        rows = [[float(x) for x in row] for row in csv.reader(f) if row]
    return np.asarray(rows, dtype=np.float64)


def write_csv_grid(path: str, grid: np.ndarray) -> None:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    for row in np.asarray(grid):
        writer.writerow([repr(float(x)) for x in row])
    atomic_write_text(path, buf.getvalue())
