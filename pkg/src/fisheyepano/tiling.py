"""Self-similar tiling of a panoramic feature map.

The feature map is split into K horizontal regions.  The bottom region
covers the lower three quarters with three rows of square tiles of side
H/4.  The top quarter is subdivided top-down into regions whose tile
sides halve toward the top: region k uses side a_k = a_K / 2^(K-k), one
tile row each, except region 1 which stacks two rows of the smallest
tiles.  For H divisible by 2^(K-1) the strip heights tile the top
quarter exactly; otherwise boundaries are rounded and the residual is
absorbed by region 1's top tile row.  Columns are tiled left to right at
stride a_k with a narrower remainder tile at the right edge when the
width does not divide evenly.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidArgumentError, UnsupportedConfigurationError


def w_coefficient(m: int) -> Fraction:
    """Slope (M - 1) / (M + 1) of the line through adjacent tile centers.

    Smaller is better (adjacent regions differ less in tile size); the
    minimum over M >= 2 is attained at M = 2.
    """
    if not isinstance(m, int) or m < 2:
        raise InvalidArgumentError(f"division factor must be an integer >= 2, got {m}")
    return Fraction(m - 1, m + 1)


@dataclass(frozen=True)
class Tile:
    """One square (or edge-remainder) tile, bounds half-open in feature rows/cols."""

    region_index: int  # 1-based
    row_index: int
    col_index: int
    row_start: int
    row_end: int
    col_start: int
    col_end: int

    @property
    def bounds(self) -> tuple[int, int, int, int]:
        return (self.row_start, self.row_end, self.col_start, self.col_end)

    @property
    def area(self) -> int:
        return (self.row_end - self.row_start) * (self.col_end - self.col_start)


@dataclass(frozen=True)
class RegionSpec:
    """A horizontal strip with a single tile side."""

    index: int  # 1-based, top to bottom
    row_start: int
    row_end: int
    tile_side: int
    rows_of_tiles: int
    band_bounds: tuple[tuple[int, int], ...]  # row bounds of each tile row, top to bottom

    @property
    def height(self) -> int:
        return self.row_end - self.row_start


@dataclass(frozen=True)
class TilingSpec:
    """The full tiling: K regions covering a feature map with no gaps."""

    feature_height: int
    feature_width: int
    num_regions: int
    division_factor: int
    regions: tuple[RegionSpec, ...]
    tiles: tuple[Tile, ...] = field(repr=False)

    def tiles_in_region(self, index: int) -> list[Tile]:
        return [t for t in self.tiles if t.region_index == index]


def _column_edges(width: int, side: int) -> list[int]:
    edges = list(range(0, width, side))
    edges.append(width)
    return edges


def build_tiling(h_f: int, w_f: int, k: int = 5, m: int = 2) -> TilingSpec:
    """Construct the K-region tiling of an ``h_f`` x ``w_f`` feature map."""
    if h_f <= 0 or w_f <= 0:
        raise InvalidArgumentError(f"feature map must be non-empty, got {h_f}x{w_f}")
    if h_f % 4 != 0:
        raise InvalidArgumentError(f"feature height must be divisible by 4, got {h_f}")
    if not isinstance(k, int) or k < 2:
        raise UnsupportedConfigurationError(f"number of regions must be an integer >= 2, got {k}")
    if m != 2:
        raise UnsupportedConfigurationError(f"only division factor 2 is supported, got {m}")

    a_bottom = h_f // 4
    # Ideal (possibly fractional) tile sides for regions 1..K.
    ideal_sides = [a_bottom / 2 ** (k - idx) for idx in range(1, k + 1)]
    sides = [max(1, round(s)) for s in ideal_sides]
    if sides[0] >= sides[1] and k > 2:
        raise UnsupportedConfigurationError(
            f"feature height {h_f} too small for {k} regions"
        )

    # Strip boundaries, bottom-up inside the top quarter so any rounding
    # residual lands in region 1 at the very top.
    top_quarter = h_f // 4
    row = top_quarter
    bands_per_region: dict[int, list[tuple[int, int]]] = {}
    starts = {}
    for idx in range(k - 1, 1, -1):
        start = row - sides[idx - 1]
        if start < 0:
            raise UnsupportedConfigurationError(
                f"rounded strips exceed the top quarter for {h_f}x{w_f}, K={k}"
            )
        starts[idx] = (start, row)
        bands_per_region[idx] = [(start, row)]
        row = start
    if row < m:
        raise UnsupportedConfigurationError(
            f"no rows left for region 1 in {h_f}x{w_f}, K={k}"
        )
    # Region 1: two tile rows of the smallest side, counted from its bottom;
    # the top row absorbs the rounding residual.
    a1 = sides[0]
    r1_bands = [(max(0, row - 2 * a1), row - a1), (row - a1, row)]
    if r1_bands[0][0] != 0:
        r1_bands[0] = (0, row - a1)
    starts[1] = (0, row)
    bands_per_region[1] = r1_bands
    # Bottom region: three uniform tile rows.
    starts[k] = (top_quarter, h_f)
    bands_per_region[k] = [
        (top_quarter + i * a_bottom, top_quarter + (i + 1) * a_bottom) for i in range(3)
    ]

    regions = []
    tiles = []
    for idx in range(1, k + 1):
        start, end = starts[idx]
        bands = bands_per_region[idx]
        side = sides[idx - 1]
        col_edges = _column_edges(w_f, side)
        for row_i, (r0, r1) in enumerate(bands):
            for col_i in range(len(col_edges) - 1):
                tiles.append(
                    Tile(
                        region_index=idx,
                        row_index=row_i,
                        col_index=col_i,
                        row_start=r0,
                        row_end=r1,
                        col_start=col_edges[col_i],
                        col_end=col_edges[col_i + 1],
                    )
                )
        regions.append(
            RegionSpec(
                index=idx,
                row_start=start,
                row_end=end,
                tile_side=side,
                rows_of_tiles=len(bands),
                band_bounds=tuple(bands),
            )
        )

    return TilingSpec(
        feature_height=h_f,
        feature_width=w_f,
        num_regions=k,
        division_factor=m,
        regions=tuple(regions),
        tiles=tuple(tiles),
    )


def tile_of(spec: TilingSpec, row: int, col: int) -> Tile:
    """The unique tile containing feature cell (row, col)."""
    if not (0 <= row < spec.feature_height and 0 <= col < spec.feature_width):
        raise InvalidArgumentError(
            f"cell ({row}, {col}) outside feature map "
            f"{spec.feature_height}x{spec.feature_width}"
        )
    region = next(r for r in spec.regions if r.row_start <= row < r.row_end)
    band_starts = [b[0] for b in region.band_bounds]
    row_i = bisect_right(band_starts, row) - 1
    col_edges = _column_edges(spec.feature_width, region.tile_side)
    col_i = min(bisect_right(col_edges, col) - 1, len(col_edges) - 2)
    for t in spec.tiles:
        if (
            t.region_index == region.index
            and t.row_index == row_i
            and t.col_index == col_i
        ):
            return t
    raise AssertionError("tiling is gap-free; unreachable")
