"""Fisheye <-> equirectangular remapping.

Panorama layout (fixed): row 0 corresponds to an incident angle of 90
degrees (the horizon) and the bottom row approaches 0 degrees (the
nadir); columns span the full azimuth range, so width = 4 * height for a
hemispherical panorama.  Pixel centers sit at half-integer coordinates,
which keeps the top-row samples strictly inside the image circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .camera import TWO_PI, PixelCoord, SpherePoint, StereographicCamera, normalize_azimuth
from .errors import InvalidArgumentError

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class EquirectSpec:
    """Geometry of a hemispherical equirectangular panorama."""

    width: int
    height: int
    azimuth_origin: float = 0.0  # world azimuth mapped to column 0, radians

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise InvalidArgumentError("panorama dimensions must be positive")
        if self.width != 4 * self.height:
            raise InvalidArgumentError(
                f"hemispherical panorama requires width = 4 * height, got {self.width}x{self.height}"
            )
        object.__setattr__(self, "azimuth_origin", normalize_azimuth(self.azimuth_origin))


def sphere_from_pano_coords(spec: EquirectSpec, u: float, v: float) -> SpherePoint:
    """Continuous panorama coordinate -> viewing direction (no pixel-center offset)."""
    theta = HALF_PI * (1.0 - v / spec.height)
    phi = spec.azimuth_origin + TWO_PI * u / spec.width
    return SpherePoint(min(max(theta, 0.0), HALF_PI), phi)


def pano_coords_from_sphere(spec: EquirectSpec, p: SpherePoint) -> PixelCoord:
    """Inverse of :func:`sphere_from_pano_coords`; u wrapped into [0, width)."""
    v = spec.height * (1.0 - p.theta / HALF_PI)
    u = (normalize_azimuth(p.phi - spec.azimuth_origin) / TWO_PI) * spec.width
    return PixelCoord(u % spec.width, v)


def pano_to_sphere(spec: EquirectSpec, px: PixelCoord) -> SpherePoint:
    """Viewing direction sampled at a panorama pixel (half-integer center)."""
    if not (0 <= px.u < spec.width and 0 <= px.v < spec.height):
        raise InvalidArgumentError(
            f"pixel ({px.u}, {px.v}) outside panorama {spec.width}x{spec.height}"
        )
    return sphere_from_pano_coords(spec, px.u + 0.5, px.v + 0.5)


def sphere_to_pano(spec: EquirectSpec, p: SpherePoint) -> PixelCoord:
    """Panorama pixel (center convention) whose sample direction is ``p``."""
    c = pano_coords_from_sphere(spec, p)
    return PixelCoord((c.u - 0.5) % spec.width, c.v - 0.5)


def shift_azimuth_origin(spec: EquirectSpec, delta: float) -> EquirectSpec:
    """New spec with the azimuth origin rotated by ``delta`` radians.

    Remapping under the shifted spec equals a horizontal circular shift of
    the original panorama by delta / (2 pi) * width columns (exact when
    delta is an integer number of columns).
    """
    return EquirectSpec(spec.width, spec.height, spec.azimuth_origin + delta)


@dataclass(frozen=True)
class RemapTable:
    """Precomputed fisheye sample coordinate for every panorama pixel.

    ``valid`` marks samples inside the image circle; invalid samples
    produce zero pixels when remapping.
    """

    spec: EquirectSpec
    fisheye_size: tuple[int, int]  # (width, height) of the source fisheye image
    sample_u: np.ndarray
    sample_v: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        shape = (self.spec.height, self.spec.width)
        for arr in (self.sample_u, self.sample_v, self.valid):
            if arr.shape != shape:
                raise InvalidArgumentError(
                    f"table arrays must be {shape}, got {arr.shape}"
                )


def build_remap_table(cam: StereographicCamera, spec: EquirectSpec) -> RemapTable:
    """Sample coordinates for converting a fisheye image to a panorama."""
    v_idx, u_idx = np.mgrid[0 : spec.height, 0 : spec.width]
    theta = HALF_PI * (1.0 - (v_idx + 0.5) / spec.height)
    phi = spec.azimuth_origin + TWO_PI * (u_idx + 0.5) / spec.width
    su, sv = cam.project_rays(theta, phi)
    cu, cv = cam.principal_point
    gamma = np.hypot(su - cu, sv - cv)
    valid = gamma <= cam.image_circle_radius_px + 0.5
    return RemapTable(
        spec=spec,
        fisheye_size=cam.image_size,
        sample_u=su,
        sample_v=sv,
        valid=valid,
    )


def _as_float_image(img: np.ndarray) -> np.ndarray:
    if img.ndim not in (2, 3):
        raise InvalidArgumentError(f"expected a 2D or 3D image array, got ndim={img.ndim}")
    if img.ndim == 3 and img.shape[2] not in (1, 3):
        raise InvalidArgumentError(f"expected 1 or 3 channels, got {img.shape[2]}")
    return np.asarray(img, dtype=np.float64)


def normalize_input(img: np.ndarray, circle_radius_px: float | None = None) -> np.ndarray:
    """Center-crop / zero-pad a fisheye frame to a square.

    Target side is 2 * circle_radius_px when the radius is given (so a
    truncated image circle is restored by symmetric zero padding),
    otherwise min(width, height).  Each dimension is center-cropped if
    larger than the target and zero-padded if smaller.
    """
    img = np.asarray(img)
    if img.size == 0:
        raise InvalidArgumentError("empty image")
    h, w = img.shape[:2]
    if circle_radius_px is not None:
        target = int(round(2 * circle_radius_px))
    else:
        target = min(h, w)

    def fit(length: int, data: np.ndarray, axis: int) -> np.ndarray:
        if length > target:
            lo = (length - target) // 2
            return np.take(data, np.arange(lo, lo + target), axis=axis)
        if length < target:
            pad = target - length
            widths = [(0, 0)] * data.ndim
            widths[axis] = (pad // 2, pad - pad // 2)
            return np.pad(data, widths)
        return data

    out = fit(h, img, axis=0)
    out = fit(w, out, axis=1)
    return out


def remap_image(img: np.ndarray, table: RemapTable) -> np.ndarray:
    """Resample a fisheye image into a panorama via bilinear interpolation.

    Samples outside the image circle or the image bounds contribute zero.
    Output dtype follows the input (uint8 is rounded back to uint8).
    """
    src = _as_float_image(img)
    h, w = src.shape[:2]
    tw, th = table.fisheye_size
    if (w, h) != (tw, th):
        raise InvalidArgumentError(
            f"image is {w}x{h} but the table was built for {tw}x{th}"
        )
    if src.ndim == 2:
        src = src[:, :, None]

    u = table.sample_u
    v = table.sample_v
    u0 = np.floor(u).astype(np.int64)
    v0 = np.floor(v).astype(np.int64)
    fu = u - u0
    fv = v - v0

    out = np.zeros((table.spec.height, table.spec.width, src.shape[2]), dtype=np.float64)
    for dv in (0, 1):
        for du in (0, 1):
            uu = u0 + du
            vv = v0 + dv
            weight = (fu if du else 1.0 - fu) * (fv if dv else 1.0 - fv)
            inside = (uu >= 0) & (uu < w) & (vv >= 0) & (vv < h)
            weight = np.where(inside & table.valid, weight, 0.0)
            vals = src[np.clip(vv, 0, h - 1), np.clip(uu, 0, w - 1)]
            out += vals * weight[:, :, None]

    if img.ndim == 2:
        out = out[:, :, 0]
    if np.issubdtype(np.asarray(img).dtype, np.integer):
        info = np.iinfo(np.asarray(img).dtype)
        out = np.clip(np.rint(out), info.min, info.max).astype(img.dtype)
    return out
