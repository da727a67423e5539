"""Bounding boxes in panorama and fisheye frames, and projections between them.

A panorama box is an axis-aligned rectangle in equirectangular
coordinates; its horizontal extent is an azimuth interval, so a box may
wrap around the seam (column 0).  Projected into the fisheye frame, the
box's four corners form a rotated trapezoid whose parallel sides are the
images of the box's top and bottom edges; for rectangle-based
evaluation the trapezoid reduces to a rotated rectangle whose width is
the mean of the parallel sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .camera import TWO_PI, PixelCoord, StereographicCamera, normalize_azimuth
from .errors import DegenerateBoxError, InvalidArgumentError
from .panorama import (
    EquirectSpec,
    pano_coords_from_sphere,
    sphere_from_pano_coords,
)


@dataclass(frozen=True)
class PanoBox:
    """Axis-aligned panorama rectangle.

    When ``wrap`` is set the horizontal interval is [u_min, width) plus
    [0, u_max); otherwise u_min < u_max as usual.
    """

    u_min: float
    v_min: float
    u_max: float
    v_max: float
    wrap: bool = False

    def __post_init__(self):
        if not self.v_min <= self.v_max:
            raise InvalidArgumentError(f"v_min {self.v_min} > v_max {self.v_max}")
        if not self.wrap and not self.u_min <= self.u_max:
            raise InvalidArgumentError(
                f"u_min {self.u_min} > u_max {self.u_max} for a non-wrapped box"
            )

    def width(self, pano_width: float | None = None) -> float:
        if self.wrap:
            if pano_width is None:
                raise InvalidArgumentError("wrapped box width requires the panorama width")
            return (pano_width - self.u_min) + self.u_max
        return self.u_max - self.u_min

    def height(self) -> float:
        return self.v_max - self.v_min

    def corners(self, pano_width: float | None = None) -> list[tuple[float, float]]:
        """(u, v) corners ordered head-left, head-right, foot-right, foot-left.

        The top edge (smaller v, larger incident angle) is the head side.
        For wrapped boxes the u of the right corners exceeds the panorama
        width (unwrapped representation).
        """
        u_hi = self.u_max
        if self.wrap:
            if pano_width is None:
                raise InvalidArgumentError("wrapped box corners require the panorama width")
            u_hi = self.u_max + pano_width
        return [
            (self.u_min, self.v_min),
            (u_hi, self.v_min),
            (u_hi, self.v_max),
            (self.u_min, self.v_max),
        ]


@dataclass(frozen=True)
class RotatedRect:
    """Rotated rectangle in fisheye coordinates.

    ``angle`` is the orientation of the height axis (head to foot)
    measured from +u, increasing toward +v; 0 means the height axis
    points along +u.
    """

    cx: float
    cy: float
    w: float
    h: float
    angle: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise InvalidArgumentError(f"rectangle sides must be positive, got {self.w}x{self.h}")

    def corners(self) -> list[PixelCoord]:
        """Corners ordered head-left, head-right, foot-right, foot-left."""
        hx, hy = math.cos(self.angle), math.sin(self.angle)  # height axis
        wx, wy = -hy, hx  # width axis
        pts = []
        for sh, sw in ((-1, -1), (-1, 1), (1, 1), (1, -1)):
            pts.append(
                PixelCoord(
                    self.cx + sh * hx * self.h / 2 + sw * wx * self.w / 2,
                    self.cy + sh * hy * self.h / 2 + sw * wy * self.w / 2,
                )
            )
        return pts


@dataclass(frozen=True)
class FisheyeQuad:
    """Projected panorama box: four fisheye corners.

    Ordered head-left, head-right, foot-right, foot-left; the head and
    foot edges are the trapezoid's parallel sides.
    """

    corners: tuple[PixelCoord, PixelCoord, PixelCoord, PixelCoord]

    @property
    def head_edge(self) -> tuple[PixelCoord, PixelCoord]:
        return self.corners[0], self.corners[1]

    @property
    def foot_edge(self) -> tuple[PixelCoord, PixelCoord]:
        return self.corners[3], self.corners[2]


def _dist(a: PixelCoord, b: PixelCoord) -> float:
    return math.hypot(a.u - b.u, a.v - b.v)


def pano_box_to_fisheye_quad(
    box: PanoBox, cam: StereographicCamera, spec: EquirectSpec
) -> FisheyeQuad:
    """Project a panorama box's corners into the fisheye frame."""
    pts = []
    for u, v in box.corners(spec.width):
        sp = sphere_from_pano_coords(spec, u, v)
        pts.append(cam.project(sp))
    return FisheyeQuad(corners=tuple(pts))


def quad_to_rotated_rect(q: FisheyeQuad) -> RotatedRect:
    """Reduce a trapezoid to a rotated rectangle.

    Width is the mean of the two parallel sides, height the distance
    between their midpoints, the angle the orientation of the
    midpoint-to-midpoint (head to foot) axis.
    """
    hl, hr = q.head_edge
    fl, fr = q.foot_edge
    m_head = ((hl.u + hr.u) / 2, (hl.v + hr.v) / 2)
    m_foot = ((fl.u + fr.u) / 2, (fl.v + fr.v) / 2)
    h = math.hypot(m_foot[0] - m_head[0], m_foot[1] - m_head[1])
    if h == 0.0:
        raise DegenerateBoxError("trapezoid has zero height")
    w = (_dist(hl, hr) + _dist(fl, fr)) / 2.0
    if w == 0.0:
        raise DegenerateBoxError("trapezoid has zero width")
    angle = math.atan2(m_foot[1] - m_head[1], m_foot[0] - m_head[0])
    return RotatedRect(
        cx=(m_head[0] + m_foot[0]) / 2,
        cy=(m_head[1] + m_foot[1]) / 2,
        w=w,
        h=h,
        angle=angle,
    )


def _pano_box_from_points(points, spec: EquirectSpec) -> PanoBox:
    """Axis-aligned hull of panorama points with seam-aware azimuth handling."""
    us = [p.u for p in points]
    vs = [p.v for p in points]
    v_min, v_max = min(vs), max(vs)
    span_plain = max(us) - min(us)
    if span_plain <= spec.width / 2.0:
        return PanoBox(min(us), v_min, max(us), v_max, wrap=False)
    # Try the wrapped interpretation: shift small-u points by one turn.
    shifted = [u + spec.width if u < spec.width / 2.0 else u for u in us]
    span_wrapped = max(shifted) - min(shifted)
    if span_wrapped >= span_plain:
        return PanoBox(min(us), v_min, max(us), v_max, wrap=False)
    return PanoBox(
        min(shifted) % spec.width,
        v_min,
        max(shifted) % spec.width,
        v_max,
        wrap=True,
    )


def fisheye_rect_to_pano_box(
    r: RotatedRect, cam: StereographicCamera, spec: EquirectSpec
) -> PanoBox:
    """Backproject a fisheye rectangle and take its panorama hull.

    The four corners plus the four edge midpoints are backprojected; the
    midpoints bound the bulge of edges that map to arcs.  Wraps at the
    seam when that yields the tighter interval.
    """
    corners = r.corners()
    samples = list(corners)
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        samples.append(PixelCoord((a.u + b.u) / 2, (a.v + b.v) / 2))
    pano_pts = []
    for px in samples:
        sp = cam.backproject(px)  # raises OutOfCircleError if outside
        pano_pts.append(pano_coords_from_sphere(spec, sp))
    return _pano_box_from_points(pano_pts, spec)


def _azimuth_interval(r: RotatedRect, cam: StereographicCamera) -> tuple[float, float]:
    """Minimal azimuth interval (start, extent) covering a fisheye rect."""
    phis = sorted(normalize_azimuth(cam.backproject(c).phi) for c in r.corners())
    # Largest gap between consecutive azimuths; its complement is the interval.
    best_gap = TWO_PI - (phis[-1] - phis[0])
    best_start = phis[-1]
    for i in range(len(phis) - 1):
        gap = phis[i + 1] - phis[i]
        if gap > best_gap:
            best_gap = gap
            best_start = phis[i]
    start = (best_start + best_gap) % TWO_PI if best_gap != TWO_PI else phis[0]
    return start, TWO_PI - best_gap


def choose_seam_azimuth(
    boxes, cam: StereographicCamera, spec: EquirectSpec, grid_deg: float = 1.0
) -> float:
    """Azimuth origin placing the panorama seam outside every box.

    Returns the midpoint of the largest azimuth gap not covered by any
    box interval; if the whole circle is covered, the origin minimizing
    the number of crossed boxes on a 1-degree grid (ties: smallest
    angle).  Empty input returns 0.
    """
    boxes = list(boxes)
    if not boxes:
        return 0.0
    intervals = [_azimuth_interval(b, cam) for b in boxes]
    events = []  # (angle, +1 open / -1 close) on the unwrapped circle
    for start, extent in intervals:
        events.append((start, 1))
        events.append(((start + extent) % TWO_PI, -1))

    # Scan for gaps: angles where no interval is active.
    def covered(phi: float) -> int:
        n = 0
        for start, extent in intervals:
            offset = (phi - start) % TWO_PI
            if offset < extent:
                n += 1
        return n

    boundaries = sorted({e[0] for e in events})
    best_mid = None
    best_gap = -1.0
    for i, b0 in enumerate(boundaries):
        b1 = boundaries[(i + 1) % len(boundaries)]
        gap = (b1 - b0) % TWO_PI
        if gap == 0.0:
            gap = TWO_PI
        mid = (b0 + gap / 2.0) % TWO_PI
        if covered(mid) == 0 and gap > best_gap:
            best_gap = gap
            best_mid = mid
    if best_mid is not None:
        return best_mid
    # No seam-free origin exists: minimize crossings on a coarse grid.
    step = math.radians(grid_deg)
    best_phi = 0.0
    best_count = None
    phi = 0.0
    while phi < TWO_PI:
        n = covered(phi)
        if best_count is None or n < best_count:
            best_count = n
            best_phi = phi
        phi += step
    return best_phi
