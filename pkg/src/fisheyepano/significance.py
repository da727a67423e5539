"""Per-tile max boosting of a significance map.

For every tile of a :class:`~fisheyepano.tiling.TilingSpec`, the single
entry holding the tile's maximum (first in row-major order on ties) is
multiplied by a scale factor alpha >= 1; all other entries pass through
unchanged.  This keeps one high-significance cell alive per tile so that
small, low-peak responses are not drowned out by large ones elsewhere.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .tiling import TilingSpec


@dataclass(frozen=True)
class ScaleConfig:
    """Boost factor for per-tile maxima."""

    alpha: float = 2.0

    def __post_init__(self):
        if not self.alpha >= 1.0:
            raise InvalidArgumentError(f"alpha must be >= 1, got {self.alpha}")
        if self.alpha > 3.0:
            warnings.warn(
                f"alpha={self.alpha} is larger than the useful range (<= 3); "
                "overly strong boosts unbalance the map",
                stacklevel=2,
            )


def _check_map(s: np.ndarray, tiling: TilingSpec) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape != (tiling.feature_height, tiling.feature_width):
        raise InvalidArgumentError(
            f"significance map must be {tiling.feature_height}x{tiling.feature_width}, "
            f"got shape {s.shape}"
        )
    if np.any(s < 0):
        raise InvalidArgumentError("significance values must be non-negative")
    return s


def per_tile_argmax(s: np.ndarray, tiling: TilingSpec) -> list[tuple]:
    """One (tile, row, col, value) record per tile.

    (row, col) is the first row-major cell attaining the tile maximum, in
    feature-map coordinates.
    """
    s = _check_map(s, tiling)
    records = []
    for tile in tiling.tiles:
        block = s[tile.row_start : tile.row_end, tile.col_start : tile.col_end]
        flat = int(np.argmax(block))
        r, c = divmod(flat, block.shape[1])
        records.append(
            (tile, tile.row_start + r, tile.col_start + c, float(block[r, c]))
        )
    return records


def argmax_coordinates(s: np.ndarray, tiling: TilingSpec) -> tuple[np.ndarray, np.ndarray]:
    """Row and column arrays of all per-tile argmax positions (tile order).

    Vectorized per uniform tile row so scaling large batches of maps stays
    cheap; equivalent to collecting the positions from
    :func:`per_tile_argmax`.
    """
    s = _check_map(s, tiling)
    rows = []
    cols = []
    for region in tiling.regions:
        side = region.tile_side
        w = tiling.feature_width
        n_full = w // side
        rem = w - n_full * side
        for r0, r1 in region.band_bounds:
            band_h = r1 - r0
            if n_full:
                block = s[r0:r1, : n_full * side]
                # (band_h, n_full, side) -> (n_full, band_h * side) row-major per tile
                block = block.reshape(band_h, n_full, side).transpose(1, 0, 2)
                flat = block.reshape(n_full, band_h * side).argmax(axis=1)
                rows.append(r0 + flat // side)
                cols.append(np.arange(n_full) * side + flat % side)
            if rem:
                block = s[r0:r1, n_full * side :]
                flat = int(np.argmax(block))
                rows.append(np.array([r0 + flat // rem]))
                cols.append(np.array([n_full * side + flat % rem]))
    return np.concatenate(rows), np.concatenate(cols)


def pdat_scale(s: np.ndarray, tiling: TilingSpec, cfg: ScaleConfig) -> np.ndarray:
    """Multiply each tile's maximum entry by alpha; everything else unchanged."""
    s = _check_map(s, tiling)
    rows, cols = argmax_coordinates(s, tiling)
    out = s.copy()
    out[rows, cols] *= cfg.alpha
    return out
