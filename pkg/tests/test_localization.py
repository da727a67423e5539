import math

import pytest

from fisheyepano import (
    EquirectSpec,
    GroundPosition,
    HorizonError,
    InvalidArgumentError,
    PanoBox,
    distance_bin,
    locate_from_box,
    position_error,
)

SPEC = EquirectSpec(3072, 768)


def box_with_foot(theta_deg, phi_deg, height_px=40.0, width_px=16.0):
    """Panorama box whose bottom-center lands at the given direction."""
    v_foot = SPEC.height * (1 - theta_deg / 90.0)
    u_center = SPEC.width * phi_deg / 360.0
    return PanoBox(
        u_center - width_px / 2, v_foot - height_px, u_center + width_px / 2, v_foot
    )


class TestLocateFromBox:
    def test_forty_five_degrees(self):
        pos = locate_from_box(box_with_foot(45.0, 0.0), SPEC, 3.0)
        assert pos.distance_m == pytest.approx(3.0, abs=1e-12)
        assert pos.x_m == pytest.approx(3.0, abs=1e-12)
        assert pos.y_m == pytest.approx(0.0, abs=1e-12)

    def test_three_four_five_triangle(self):
        theta = math.degrees(math.atan2(4.0, 3.0))
        pos = locate_from_box(box_with_foot(theta, 90.0), SPEC, 3.0)
        assert pos.distance_m == pytest.approx(4.0, abs=1e-9)
        assert pos.x_m == pytest.approx(0.0, abs=1e-9)
        assert pos.y_m == pytest.approx(4.0, abs=1e-9)

    def test_nadir_limit(self):
        pos = locate_from_box(box_with_foot(0.0, 0.0), SPEC, 3.0)
        assert pos.distance_m == pytest.approx(0.0, abs=1e-12)

    def test_horizon_raises(self):
        box = PanoBox(0.0, -40.0, 16.0, 0.0)  # foot exactly on the horizon row edge
        with pytest.raises(HorizonError):
            locate_from_box(box, SPEC, 3.0)

    def test_azimuth_equivariance(self):
        base = locate_from_box(box_with_foot(60.0, 0.0), SPEC, 3.0)
        for phi in (30.0, 120.0, 275.0):
            pos = locate_from_box(box_with_foot(60.0, phi), SPEC, 3.0)
            assert pos.distance_m == pytest.approx(base.distance_m, abs=1e-9)
            expected_dir = math.radians(phi)
            assert math.atan2(pos.y_m, pos.x_m) % (2 * math.pi) == pytest.approx(
                expected_dir, abs=1e-9
            )

    def test_forward_model_round_trip(self):
        # place a person at known distance, synthesize the foot row, recover d
        for c in (2.5, 3.0, 4.0):
            for d in (5.0, 15.0, 30.0):
                theta = math.degrees(math.atan2(d, c))
                pos = locate_from_box(box_with_foot(theta, 10.0), SPEC, c)
                # one panorama row corresponds to this much ground distance
                row_rad = (math.pi / 2) / SPEC.height
                slack = c * (
                    math.tan(math.radians(theta) + row_rad)
                    - math.tan(math.radians(theta) - row_rad)
                )
                assert abs(pos.distance_m - d) <= slack

    def test_height_scaling(self):
        a = locate_from_box(box_with_foot(70.0, 0.0), SPEC, 2.0)
        b = locate_from_box(box_with_foot(70.0, 0.0), SPEC, 4.0)
        assert b.distance_m == pytest.approx(2 * a.distance_m)

    def test_wrapped_box_center(self):
        # wrapped box centered on the seam, foot at 45 degrees
        v_foot = SPEC.height * (1 - 45.0 / 90.0)
        box = PanoBox(SPEC.width - 8.0, v_foot - 40.0, 8.0, v_foot, wrap=True)
        pos = locate_from_box(box, SPEC, 3.0)
        assert pos.distance_m == pytest.approx(3.0, abs=1e-9)
        assert pos.y_m == pytest.approx(0.0, abs=1e-6)

    def test_invalid_height(self):
        with pytest.raises(InvalidArgumentError):
            locate_from_box(box_with_foot(45.0, 0.0), SPEC, 0.0)


class TestPositionError:
    def test_zero(self):
        p = GroundPosition(1.0, 2.0)
        assert position_error(p, p) == 0.0

    def test_pythagorean(self):
        assert position_error(GroundPosition(0.0, 0.0), GroundPosition(3.0, 4.0)) == 5.0

    def test_symmetry(self):
        a, b = GroundPosition(1.0, -2.0), GroundPosition(-0.5, 3.0)
        assert position_error(a, b) == position_error(b, a)


class TestDistanceBin:
    @pytest.mark.parametrize(
        "d,expected",
        [
            (0.0, "near"),
            (9.999, "near"),
            (10.0, "mid"),
            (19.999, "mid"),
            (20.0, "far"),
            (25.0, "far"),
            (1e6, "far"),
        ],
    )
    def test_boundaries(self, d, expected):
        assert distance_bin(d) == expected

    def test_negative_rejected(self):
        with pytest.raises(InvalidArgumentError):
            distance_bin(-0.1)
