"""Closed-form scene geometry for an overhead camera and a standing person.

Angles here are measured from the horizontal plane at the camera
(phi = 90 deg - theta): a person at horizontal distance ``d`` subtends
``phi_foot = atan(c / d)`` at the feet and ``phi_head = atan((c - s) / d)``
at the head, with camera height ``c`` and person height ``s``.  The
panorama box height is the angular gap times ``lambda`` pixels per
radian (panorama_height / (pi/2)); for distant persons the exact height
is well approximated by the linear form (s / (c - s)) * lambda * phi_head.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .panorama import HALF_PI, EquirectSpec

NUM_THETA_BINS = 90  # 1-degree bins over [0, 90)


@dataclass(frozen=True)
class SceneConfig:
    """Camera height ``c``, person height ``s`` and horizontal distance ``d`` (meters)."""

    camera_height_m: float
    person_height_m: float
    distance_m: float

    def __post_init__(self):
        c, s, d = self.camera_height_m, self.person_height_m, self.distance_m
        if not (c > 0 and d > 0 and 0 <= s < c):
            raise InvalidArgumentError(
                f"require c > s >= 0 and d > 0, got c={c}, s={s}, d={d}"
            )


def pixels_per_radian(spec_or_height: EquirectSpec | int) -> float:
    """Linear angle-to-pixel factor of a hemispherical panorama."""
    height = spec_or_height.height if isinstance(spec_or_height, EquirectSpec) else spec_or_height
    return height / HALF_PI


def box_angles(scene: SceneConfig) -> tuple[float, float]:
    """(phi_head, phi_foot) in radians, measured from the horizontal plane."""
    c, s, d = scene.camera_height_m, scene.person_height_m, scene.distance_m
    return math.atan((c - s) / d), math.atan(c / d)


def exact_box_height(scene: SceneConfig, lambda_px_per_rad: float) -> float:
    """Panorama box height lambda * (phi_foot - phi_head), in pixels."""
    if not lambda_px_per_rad > 0:
        raise InvalidArgumentError("lambda must be positive")
    phi_head, phi_foot = box_angles(scene)
    return lambda_px_per_rad * (phi_foot - phi_head)


def linearized_box_height(scene: SceneConfig, lambda_px_per_rad: float) -> float:
    """Small-angle approximation (s / (c - s)) * lambda * phi_head.

    Accurate to a few percent while phi_foot stays below ~10 degrees;
    degrades as the person approaches the camera.
    """
    if not lambda_px_per_rad > 0:
        raise InvalidArgumentError("lambda must be positive")
    c, s = scene.camera_height_m, scene.person_height_m
    if c == s:
        raise ZeroDivisionError("person as tall as the camera: c - s = 0")
    phi_head, _ = box_angles(scene)
    return (s / (c - s)) * lambda_px_per_rad * phi_head


def ground_interval_width(camera_height_m: float, theta: float, delta_theta: float) -> float:
    """Ground distance spanned by the incident-angle bin [theta - dt/2, theta + dt/2].

    c * (tan(theta + dt/2) - tan(theta - dt/2)); strictly increasing in
    theta, which is why peripheral bins cover far more floor area.
    """
    if delta_theta < 0:
        raise InvalidArgumentError("delta_theta must be non-negative")
    lo = theta - delta_theta / 2.0
    hi = theta + delta_theta / 2.0
    if not (0.0 < lo and hi < HALF_PI):
        raise InvalidArgumentError(
            f"theta +- delta_theta/2 must stay inside (0, pi/2), got [{lo}, {hi}]"
        )
    return camera_height_m * (math.tan(hi) - math.tan(lo))


@dataclass
class DistributionStats:
    """Per-1-degree-bin statistics of panorama box heights and widths."""

    count: np.ndarray  # (90,) int
    mean_h: np.ndarray
    std_h: np.ndarray  # sample std, NaN where count < 2
    mean_w: np.ndarray
    std_w: np.ndarray

    def rows(self):
        """Yield CSV-ready rows: (theta_deg, count, mean_h, std_h, mean_w, std_w)."""
        for k in range(NUM_THETA_BINS):
            yield (
                k,
                int(self.count[k]),
                float(self.mean_h[k]),
                float(self.std_h[k]),
                float(self.mean_w[k]),
                float(self.std_w[k]),
            )


def annotation_distribution(boxes, spec: EquirectSpec) -> DistributionStats:
    """Bin panorama boxes by the incident angle of their center row.

    ``boxes`` is an iterable of objects with u_min/v_min/u_max/v_max
    attributes (see :class:`fisheyepano.boxes.PanoBox`).  Bins are
    left-closed 1-degree intervals [k, k+1).
    """
    heights = [[] for _ in range(NUM_THETA_BINS)]
    widths = [[] for _ in range(NUM_THETA_BINS)]
    for box in boxes:
        v_center = (box.v_min + box.v_max) / 2.0
        if not (0.0 <= v_center <= spec.height):
            raise InvalidArgumentError(f"box center row {v_center} outside panorama")
        theta_deg = 90.0 * (1.0 - v_center / spec.height)
        k = min(int(theta_deg), NUM_THETA_BINS - 1)
        heights[k].append(box.v_max - box.v_min)
        widths[k].append(box.width())

    count = np.array([len(h) for h in heights], dtype=np.int64)
    mean_h = np.full(NUM_THETA_BINS, np.nan)
    std_h = np.full(NUM_THETA_BINS, np.nan)
    mean_w = np.full(NUM_THETA_BINS, np.nan)
    std_w = np.full(NUM_THETA_BINS, np.nan)
    for k in range(NUM_THETA_BINS):
        if count[k] >= 1:
            mean_h[k] = np.mean(heights[k])
            mean_w[k] = np.mean(widths[k])
        if count[k] >= 2:
            std_h[k] = np.std(heights[k], ddof=1)
            std_w[k] = np.std(widths[k], ddof=1)
    return DistributionStats(count, mean_h, std_h, mean_w, std_w)
