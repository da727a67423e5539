"""Ground-plane person localization from panorama boxes.

The foot ray through the bottom-center of a detected box meets the
ground at horizontal distance d = camera_height * tan(theta_foot); the
azimuth fixes the direction, giving a camera-centered planar position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .boxes import PanoBox
from .errors import HorizonError, InvalidArgumentError
from .panorama import EquirectSpec, sphere_from_pano_coords

NEAR_BIN = "near"
MID_BIN = "mid"
FAR_BIN = "far"


@dataclass(frozen=True)
class GroundPosition:
    """Camera-centered horizontal position in meters."""

    x_m: float
    y_m: float

    @property
    def distance_m(self) -> float:
        return math.hypot(self.x_m, self.y_m)


def locate_from_box(
    box: PanoBox, spec: EquirectSpec, camera_height_m: float
) -> GroundPosition:
    """Intersect the foot ray (bottom-center of the box) with the ground."""
    if not camera_height_m > 0:
        raise InvalidArgumentError(f"camera height must be positive, got {camera_height_m}")
    if box.wrap:
        u_foot = (box.u_min + box.width(spec.width) / 2.0) % spec.width
    else:
        u_foot = (box.u_min + box.u_max) / 2.0
    sp = sphere_from_pano_coords(spec, u_foot, box.v_max)
    if sp.theta >= math.pi / 2:
        raise HorizonError("foot ray at 90 degrees is parallel to the ground")
    d = camera_height_m * math.tan(sp.theta)
    return GroundPosition(d * math.cos(sp.phi), d * math.sin(sp.phi))


def position_error(est: GroundPosition, gt: GroundPosition) -> float:
    """Euclidean distance between two ground positions, in meters."""
    return math.hypot(est.x_m - gt.x_m, est.y_m - gt.y_m)


def distance_bin(d_m: float) -> str:
    """Bin a horizontal distance: near [0, 10), mid [10, 20), far [20, inf)."""
    if d_m < 0:
        raise InvalidArgumentError(f"distance must be non-negative, got {d_m}")
    if d_m < 10.0:
        return NEAR_BIN
    if d_m < 20.0:
        return MID_BIN
    return FAR_BIN
