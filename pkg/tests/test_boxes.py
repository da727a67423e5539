import math

import numpy as np
import pytest

from fisheyepano import (
    DegenerateBoxError,
    EquirectSpec,
    FisheyeQuad,
    OutOfCircleError,
    PanoBox,
    PixelCoord,
    RotatedRect,
    StereographicCamera,
    choose_seam_azimuth,
    fisheye_rect_to_pano_box,
    iou_axis_aligned,
    pano_box_to_fisheye_quad,
    quad_to_rotated_rect,
)
from fisheyepano.panorama import sphere_from_pano_coords

CAM = StereographicCamera.from_image_size(1024, 1024)
SPEC = EquirectSpec(3072, 768)


def box_from_angles(theta_lo_deg, theta_hi_deg, phi_lo_deg, phi_hi_deg):
    """Panorama box spanning the given incident-angle and azimuth ranges."""
    v_min = SPEC.height * (1 - theta_hi_deg / 90.0)
    v_max = SPEC.height * (1 - theta_lo_deg / 90.0)
    u_min = SPEC.width * phi_lo_deg / 360.0
    u_max = SPEC.width * phi_hi_deg / 360.0
    return PanoBox(u_min, v_min, u_max, v_max)


class TestPanoBoxToQuad:
    def test_degenerate_box_collapses(self):
        box = PanoBox(100.0, 200.0, 100.0, 200.0)
        quad = pano_box_to_fisheye_quad(box, CAM, SPEC)
        pts = quad.corners
        assert all(p.u == pts[0].u and p.v == pts[0].v for p in pts)

    def test_constant_theta_band_is_equidistant_arc(self):
        box = box_from_angles(75.0, 75.0, 0.0, 360.0)
        quad = pano_box_to_fisheye_quad(box, CAM, SPEC)
        gammas = [math.hypot(p.u - 512, p.v - 512) for p in quad.corners]
        assert max(gammas) - min(gammas) < 1e-9

    def test_corner_radii_match_projection(self):
        box = box_from_angles(70.0, 80.0, 355.0, 365.0)  # 10 deg wide at azimuth 0
        quad = pano_box_to_fisheye_quad(box, CAM, SPEC)
        g_head = CAM.radial_distance(math.radians(80))
        g_foot = CAM.radial_distance(math.radians(70))
        hl, hr = quad.head_edge
        fl, fr = quad.foot_edge
        for p in (hl, hr):
            assert math.hypot(p.u - 512, p.v - 512) == pytest.approx(g_head, abs=1e-9)
        for p in (fl, fr):
            assert math.hypot(p.u - 512, p.v - 512) == pytest.approx(g_foot, abs=1e-9)

    def test_corner_fidelity(self):
        box = box_from_angles(60.0, 82.0, 33.0, 41.0)
        quad = pano_box_to_fisheye_quad(box, CAM, SPEC)
        for (u, v), got in zip(box.corners(SPEC.width), quad.corners):
            expected = CAM.project(sphere_from_pano_coords(SPEC, u, v))
            assert got.u == pytest.approx(expected.u, abs=1e-9)
            assert got.v == pytest.approx(expected.v, abs=1e-9)


class TestQuadToRotatedRect:
    def test_isosceles_trapezoid_width_is_mean(self):
        quad = FisheyeQuad(
            corners=(
                PixelCoord(-5.0, 0.0),
                PixelCoord(5.0, 0.0),
                PixelCoord(3.0, 20.0),
                PixelCoord(-3.0, 20.0),
            )
        )
        rect = quad_to_rotated_rect(quad)
        assert rect.w == 8.0
        assert rect.h == 20.0

    def test_rectangle_preserved(self):
        src = RotatedRect(cx=300.0, cy=400.0, w=12.0, h=40.0, angle=0.7)
        quad = FisheyeQuad(corners=tuple(src.corners()))
        rect = quad_to_rotated_rect(quad)
        assert rect.cx == pytest.approx(src.cx)
        assert rect.cy == pytest.approx(src.cy)
        assert rect.w == pytest.approx(src.w)
        assert rect.h == pytest.approx(src.h)
        assert rect.angle == pytest.approx(src.angle)

    def test_round_trip_overlap(self):
        # pano box -> quad -> rect -> pano footprint overlaps the original
        for theta_lo, theta_hi in [(60, 70), (70, 80), (75, 85)]:
            box = box_from_angles(theta_lo, theta_hi, 100.0, 104.0)
            quad = pano_box_to_fisheye_quad(box, CAM, SPEC)
            rect = quad_to_rotated_rect(quad)
            back = fisheye_rect_to_pano_box(rect, CAM, SPEC)
            assert iou_axis_aligned(box, back, SPEC.width) >= 0.9

    def test_zero_height_rejected(self):
        quad = FisheyeQuad(
            corners=(
                PixelCoord(0.0, 0.0),
                PixelCoord(4.0, 0.0),
                PixelCoord(4.0, 0.0),
                PixelCoord(0.0, 0.0),
            )
        )
        with pytest.raises(DegenerateBoxError):
            quad_to_rotated_rect(quad)


class TestFisheyeRectToPanoBox:
    def test_radius_aligned_rect_at_azimuth_90(self):
        # height axis along +v (radial at azimuth 90), away from the seam
        rect = RotatedRect(cx=512.0, cy=800.0, w=30.0, h=60.0, angle=math.pi / 2)
        box = fisheye_rect_to_pano_box(rect, CAM, SPEC)
        assert not box.wrap
        center_u = (box.u_min + box.u_max) / 2
        assert center_u == pytest.approx(SPEC.width / 4, abs=2.0)

    def test_seam_straddling_rect_wraps(self):
        rect = RotatedRect(cx=800.0, cy=512.0, w=80.0, h=60.0, angle=0.0)
        box = fisheye_rect_to_pano_box(rect, CAM, SPEC)
        assert box.wrap
        assert box.width(SPEC.width) < SPEC.width / 2

    def test_round_trip_containment(self):
        box = box_from_angles(65.0, 80.0, 40.0, 48.0)
        quad = pano_box_to_fisheye_quad(box, CAM, SPEC)
        rect = quad_to_rotated_rect(quad)
        hull = fisheye_rect_to_pano_box(rect, CAM, SPEC)
        # hull of the exact corners contains most of the original box
        assert iou_axis_aligned(box, hull, SPEC.width) > 0.5

    def test_corner_outside_circle_raises(self):
        rect = RotatedRect(cx=1000.0, cy=512.0, w=100.0, h=100.0, angle=0.0)
        with pytest.raises(OutOfCircleError):
            fisheye_rect_to_pano_box(rect, CAM, SPEC)


def rect_at_azimuth(phi_deg, theta_deg=75.0, w=20.0, h=40.0):
    """Radius-aligned fisheye rect centered at the given direction."""
    theta = math.radians(theta_deg)
    phi = math.radians(phi_deg)
    gamma = CAM.radial_distance(theta)
    return RotatedRect(
        cx=512.0 + gamma * math.cos(phi),
        cy=512.0 + gamma * math.sin(phi),
        w=w,
        h=h,
        angle=phi,
    )


class TestChooseSeamAzimuth:
    def test_empty(self):
        assert choose_seam_azimuth([], CAM, SPEC) == 0.0

    def test_single_interval_gap_midpoint(self):
        # one box spanning roughly azimuth [10, 20] degrees
        boxes = [rect_at_azimuth(15.0)]
        origin = math.degrees(choose_seam_azimuth(boxes, CAM, SPEC))
        assert 160.0 < origin < 230.0  # near the gap midpoint ~195 deg

    def test_no_box_crosses_chosen_seam(self):
        boxes = [rect_at_azimuth(phi) for phi in (15.0, 80.0, 200.0, 310.0)]
        origin = choose_seam_azimuth(boxes, CAM, SPEC)
        shifted = EquirectSpec(SPEC.width, SPEC.height, origin)
        wrapped = [fisheye_rect_to_pano_box(r, CAM, shifted).wrap for r in boxes]
        assert not any(wrapped)

    def test_matches_exhaustive_grid(self):
        boxes = [rect_at_azimuth(phi) for phi in (15.0, 80.0, 200.0)]
        origin = choose_seam_azimuth(boxes, CAM, SPEC)

        def crossings(phi0):
            shifted = EquirectSpec(SPEC.width, SPEC.height, phi0)
            return sum(fisheye_rect_to_pano_box(r, CAM, shifted).wrap for r in boxes)

        assert crossings(origin) == 0
        grid = [math.radians(g) for g in range(360)]
        assert min(crossings(g) for g in grid) == 0

    def test_full_coverage_minimizes_crossings(self):
        # 36 wide boxes covering all azimuths
        boxes = [rect_at_azimuth(phi, w=120.0) for phi in np.arange(0, 360, 10.0)]
        origin = choose_seam_azimuth(boxes, CAM, SPEC)

        def crossings(phi0):
            shifted = EquirectSpec(SPEC.width, SPEC.height, phi0)
            return sum(fisheye_rect_to_pano_box(r, CAM, shifted).wrap for r in boxes)

        grid_best = min(crossings(math.radians(g)) for g in range(360))
        assert crossings(origin) <= grid_best
