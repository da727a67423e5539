"""Stereographic fisheye camera model.

The model maps a viewing direction, given as an incident angle ``theta``
(0 at the nadir / optical axis, pi/2 at the horizon) and an azimuth
``phi``, to a radial image distance

    gamma = 2 * f * tan(theta / 2)

measured from the principal point, with ``f`` the focal length in pixel
units (sensor pitch folded in).  The azimuth convention used everywhere
in this package: phi = 0 points along +u, and phi increases from +u
toward +v (atan2(dv, du) on image offsets).  At theta = 0 the azimuth is
undefined; backprojection returns phi = 0 there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, OutOfCircleError

TWO_PI = 2.0 * math.pi

# Slack (in pixels) accepted when checking that a coordinate lies inside
# the image circle, so boundary pixels survive rounding.
CIRCLE_TOLERANCE_PX = 0.5


def normalize_azimuth(phi: float) -> float:
    """Wrap an azimuth into [0, 2*pi)."""
    phi = math.fmod(phi, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    return phi if phi < TWO_PI else 0.0


@dataclass(frozen=True)
class SpherePoint:
    """Viewing direction: incident angle ``theta`` in [0, pi/2], azimuth ``phi``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 2):
            raise InvalidArgumentError(f"theta {self.theta} outside [0, pi/2]")
        object.__setattr__(self, "phi", normalize_azimuth(self.phi))


@dataclass(frozen=True)
class PixelCoord:
    """Continuous image coordinate, origin top-left, u rightward, v downward."""

    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise InvalidArgumentError("pixel coordinates must be finite")


def fit_focal_from_circle(radius_px: float) -> float:
    """Focal length (pixel units) from the image-circle radius.

    The circle edge corresponds to theta = 90 degrees, so
    2 * f * tan(45 deg) = radius, i.e. f = radius / 2.
    """
    if not (radius_px > 0):
        raise InvalidArgumentError(f"image circle radius must be positive, got {radius_px}")
    return radius_px / 2.0


@dataclass(frozen=True)
class StereographicCamera:
    """Intrinsics of a stereographic fisheye camera.

    All fields are in pixel units.  ``focal_length_px`` is derived from the
    image circle and must equal ``image_circle_radius_px / 2``.
    """

    image_size: tuple[int, int]  # (width, height)
    image_circle_radius_px: float
    principal_point: tuple[float, float]
    focal_length_px: float = field(default=0.0)

    def __post_init__(self):
        w, h = self.image_size
        if w <= 0 or h <= 0:
            raise InvalidArgumentError(f"image size must be positive, got {self.image_size}")
        if not (self.image_circle_radius_px > 0):
            raise InvalidArgumentError("image circle radius must be positive")
        if self.image_circle_radius_px > min(w, h) / 2.0 + 0.5:
            raise InvalidArgumentError(
                f"image circle radius {self.image_circle_radius_px} exceeds half the short side"
            )
        cu, cv = self.principal_point
        if not (0.0 <= cu < w and 0.0 <= cv < h):
            raise InvalidArgumentError(f"principal point {self.principal_point} outside image")
        if self.focal_length_px == 0.0:
            object.__setattr__(
                self, "focal_length_px", fit_focal_from_circle(self.image_circle_radius_px)
            )
        elif not math.isclose(
            self.focal_length_px, self.image_circle_radius_px / 2.0, rel_tol=1e-9
        ):
            raise InvalidArgumentError(
                "focal length inconsistent with image circle (expected radius / 2)"
            )

    @classmethod
    def from_image_size(
        cls,
        width: int,
        height: int,
        circle_radius_px: float | None = None,
        principal_point: tuple[float, float] | None = None,
    ) -> "StereographicCamera":
        """Camera with defaults: centered principal point, circle radius min(W, H)/2."""
        if circle_radius_px is None:
            circle_radius_px = min(width, height) / 2.0
        if principal_point is None:
            principal_point = (width / 2.0, height / 2.0)
        return cls(
            image_size=(width, height),
            image_circle_radius_px=circle_radius_px,
            principal_point=principal_point,
        )

    def radial_distance(self, theta: float) -> float:
        """gamma(theta) = 2 f tan(theta / 2)."""
        return 2.0 * self.focal_length_px * math.tan(theta / 2.0)

    def project(self, p: SpherePoint) -> PixelCoord:
        """Map a viewing direction to image coordinates."""
        gamma = self.radial_distance(p.theta)
        cu, cv = self.principal_point
        return PixelCoord(cu + gamma * math.cos(p.phi), cv + gamma * math.sin(p.phi))

    def backproject(self, px: PixelCoord) -> SpherePoint:
        """Inverse of :meth:`project`.

        Raises :class:`OutOfCircleError` when the pixel lies outside the
        image circle (beyond a half-pixel tolerance).
        """
        cu, cv = self.principal_point
        du = px.u - cu
        dv = px.v - cv
        gamma = math.hypot(du, dv)
        if gamma > self.image_circle_radius_px + CIRCLE_TOLERANCE_PX:
            raise OutOfCircleError(
                f"pixel ({px.u}, {px.v}) is {gamma:.3f} px from the principal point, "
                f"outside the image circle of radius {self.image_circle_radius_px}"
            )
        if gamma == 0.0:
            return SpherePoint(0.0, 0.0)
        theta = min(2.0 * math.atan(gamma / (2.0 * self.focal_length_px)), math.pi / 2)
        phi = normalize_azimuth(math.atan2(dv, du))
        return SpherePoint(theta, phi)

    # Vectorized counterparts used by the remap-table builder and the box
    # projections; same conventions as the scalar methods.

    def project_rays(self, theta: np.ndarray, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        gamma = 2.0 * self.focal_length_px * np.tan(np.asarray(theta) / 2.0)
        cu, cv = self.principal_point
        return cu + gamma * np.cos(phi), cv + gamma * np.sin(phi)

    def backproject_pixels(self, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        cu, cv = self.principal_point
        du = np.asarray(u) - cu
        dv = np.asarray(v) - cv
        gamma = np.hypot(du, dv)
        theta = np.minimum(2.0 * np.arctan(gamma / (2.0 * self.focal_length_px)), math.pi / 2)
        phi = np.mod(np.arctan2(dv, du), TWO_PI)
        return theta, phi
