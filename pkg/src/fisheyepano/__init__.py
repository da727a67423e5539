"""Geometric core of overhead-fisheye person detection.

Stereographic fisheye <-> equirectangular remapping, distortion-aware
feature-map tiling with per-tile significance boosting, box projection
between coordinate frames, ray-ground localization, and COCO-style
detection metrics.
"""

from .boxes import (
    FisheyeQuad,
    PanoBox,
    RotatedRect,
    choose_seam_azimuth,
    fisheye_rect_to_pano_box,
    pano_box_to_fisheye_quad,
    quad_to_rotated_rect,
)
from .camera import (
    PixelCoord,
    SpherePoint,
    StereographicCamera,
    fit_focal_from_circle,
)
from .errors import (
    ConfigurationError,
    DegenerateBoxError,
    FisheyePanoError,
    HorizonError,
    InvalidArgumentError,
    OutOfCircleError,
    UnsupportedConfigurationError,
)
from .evaluation import (
    DetectionRecord,
    EvalConfig,
    EvalReport,
    GroundTruthRecord,
    average_precision,
    evaluate,
    iou_axis_aligned,
)
from .geometry import (
    DistributionStats,
    SceneConfig,
    annotation_distribution,
    box_angles,
    exact_box_height,
    ground_interval_width,
    linearized_box_height,
    pixels_per_radian,
)
from .localization import (
    GroundPosition,
    distance_bin,
    locate_from_box,
    position_error,
)
from .panorama import (
    EquirectSpec,
    RemapTable,
    build_remap_table,
    normalize_input,
    pano_to_sphere,
    remap_image,
    shift_azimuth_origin,
    sphere_to_pano,
)
from .significance import ScaleConfig, pdat_scale, per_tile_argmax
from .tiling import RegionSpec, Tile, TilingSpec, build_tiling, tile_of, w_coefficient

__all__ = [name for name in dir() if not name.startswith("_")]
