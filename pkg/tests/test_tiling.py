from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fisheyepano import (
    InvalidArgumentError,
    UnsupportedConfigurationError,
    build_tiling,
    tile_of,
    w_coefficient,
)


def exhaustive_coverage(spec):
    """Brute force: count how many tiles claim each cell."""
    counts = np.zeros((spec.feature_height, spec.feature_width), dtype=np.int32)
    for t in spec.tiles:
        counts[t.row_start : t.row_end, t.col_start : t.col_end] += 1
    return counts


class TestBuildTiling:
    def test_128x512(self):
        spec = build_tiling(128, 512, k=5)
        assert [r.tile_side for r in spec.regions] == [2, 4, 8, 16, 32]
        assert [r.height for r in spec.regions] == [4, 4, 8, 16, 96]
        assert np.all(exhaustive_coverage(spec) == 1)

    def test_192x768(self):
        spec = build_tiling(192, 768, k=5)
        assert [r.tile_side for r in spec.regions] == [3, 6, 12, 24, 48]
        assert [r.height for r in spec.regions] == [6, 6, 12, 24, 144]
        assert np.all(exhaustive_coverage(spec) == 1)

    def test_minimal_two_regions(self):
        spec = build_tiling(8, 8, k=2)
        assert [r.tile_side for r in spec.regions] == [1, 2]
        assert [r.height for r in spec.regions] == [2, 6]
        assert spec.regions[1].rows_of_tiles == 3
        assert spec.regions[0].rows_of_tiles == 2
        assert np.all(exhaustive_coverage(spec) == 1)

    def test_region_shape_rules(self):
        spec = build_tiling(192, 768, k=5)
        assert spec.regions[0].rows_of_tiles == 2
        for r in spec.regions[1:-1]:
            assert r.rows_of_tiles == 1
            assert r.height == r.tile_side
        assert spec.regions[-1].rows_of_tiles == 3
        assert spec.regions[-1].height == 3 * spec.regions[-1].tile_side

    def test_halving_between_regions(self):
        spec = build_tiling(128, 512, k=5)
        sides = [r.tile_side for r in spec.regions]
        for a, b in zip(sides, sides[1:]):
            assert 2 * a == b

    def test_smallest_to_largest_ratio(self):
        for k in (3, 4, 5):
            spec = build_tiling(256, 1024, k=k)
            assert spec.regions[0].tile_side * 2 ** (k - 1) == spec.regions[-1].tile_side

    def test_column_remainder_tile(self):
        spec = build_tiling(128, 500, k=5)
        bottom = spec.tiles_in_region(5)
        widths = {t.col_end - t.col_start for t in bottom}
        assert widths == {32, 500 - 15 * 32}
        assert np.all(exhaustive_coverage(spec) == 1)

    def test_rounded_boundaries_still_cover(self):
        spec = build_tiling(160, 640, k=5)
        assert np.all(exhaustive_coverage(spec) == 1)

    def test_height_not_divisible_by_four(self):
        with pytest.raises(InvalidArgumentError):
            build_tiling(130, 512)

    def test_unsupported_m(self):
        with pytest.raises(UnsupportedConfigurationError):
            build_tiling(128, 512, m=3)

    def test_unsupported_k(self):
        with pytest.raises(UnsupportedConfigurationError):
            build_tiling(128, 512, k=1)

    @given(
        h4=st.sampled_from([32, 48, 64, 96, 128]),
        w=st.integers(16, 800),
        k=st.integers(2, 5),
    )
    @settings(max_examples=60, deadline=None)
    def test_partition_property(self, h4, w, k):
        assume(h4 // 4 >= 2 ** (k - 1))  # smallest tiles must stay >= 1 cell
        spec = build_tiling(h4, w, k=k)
        assert sum(t.area for t in spec.tiles) == h4 * w
        assert np.all(exhaustive_coverage(spec) == 1)


class TestTileOf:
    def test_origin(self):
        spec = build_tiling(128, 512, k=5)
        t = tile_of(spec, 0, 0)
        assert t.region_index == 1 and t.row_index == 0 and t.col_index == 0

    def test_bottom_right(self):
        spec = build_tiling(128, 512, k=5)
        t = tile_of(spec, 127, 511)
        assert t.region_index == 5
        assert t.row_end == 128 and t.col_end == 512

    def test_out_of_bounds(self):
        spec = build_tiling(128, 512, k=5)
        with pytest.raises(InvalidArgumentError):
            tile_of(spec, 128, 0)

    def test_matches_linear_scan(self):
        spec = build_tiling(64, 200, k=4)
        rng = np.random.default_rng(2)
        for _ in range(100):
            row = int(rng.integers(0, 64))
            col = int(rng.integers(0, 200))
            t = tile_of(spec, row, col)
            matches = [
                tile
                for tile in spec.tiles
                if tile.row_start <= row < tile.row_end
                and tile.col_start <= col < tile.col_end
            ]
            assert matches == [t]


class TestWCoefficient:
    def test_half_split(self):
        assert w_coefficient(2) == Fraction(1, 3)

    def test_third_split(self):
        assert w_coefficient(3) == Fraction(1, 2)

    def test_formula(self):
        assert w_coefficient(9) == Fraction(8, 10)

    def test_argmin_at_two(self):
        assert all(w_coefficient(2) < w_coefficient(m) for m in range(3, 101))

    def test_strictly_increasing(self):
        values = [w_coefficient(m) for m in range(2, 50)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_invalid(self):
        with pytest.raises(InvalidArgumentError):
            w_coefficient(1)
