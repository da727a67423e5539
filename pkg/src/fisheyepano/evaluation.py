"""Detection and localization scoring.

COCO-style average precision on axis-aligned panorama boxes (101-point
interpolated PR curve, greedy one-to-one matching by descending
confidence), optionally restricted to ground-truth distance bins, plus
precision / recall / F1 at a confidence threshold and mean position
error over matched pairs.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boxes import PanoBox
from .errors import ConfigurationError, InvalidArgumentError
from .localization import GroundPosition, distance_bin, locate_from_box, position_error
from .panorama import EquirectSpec

COCO_IOU_THRESHOLDS = tuple(np.round(np.arange(0.50, 0.96, 0.05), 2))
RECALL_GRID = np.linspace(0.0, 1.0, 101)
DISTANCE_BINS = ("near", "mid", "far")


@dataclass(frozen=True)
class DetectionRecord:
    """A scored detection in panorama coordinates."""

    image_id: str
    box: PanoBox
    confidence: float

    def __post_init__(self):
        if not (0.0 <= self.confidence <= 1.0):
            raise InvalidArgumentError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class GroundTruthRecord:
    """A ground-truth box, optionally with a known world position."""

    image_id: str
    box: PanoBox
    position: GroundPosition | None = None


@dataclass
class EvalConfig:
    """Evaluation settings and the camera metadata needed for distances."""

    spec: EquirectSpec | None = None
    camera_height_m: float | None = None  # uniform height; per-image overrides below
    camera_heights: dict = field(default_factory=dict)
    confidence_threshold: float = 0.3
    pe_iou_threshold: float = 0.5
    image_splits: dict = field(default_factory=dict)  # image_id -> split tag

    def height_for(self, image_id: str) -> float:
        h = self.camera_heights.get(image_id, self.camera_height_m)
        if h is None:
            raise ConfigurationError(
                f"camera height requested for image {image_id!r} but none configured"
            )
        return h


@dataclass
class EvalReport:
    """Detection and localization metrics; NaN where a metric is undefined."""

    map: float
    ap50: float
    ap75: float
    ap_by_bin: dict
    precision: float
    recall: float
    f1: float
    mpe: float
    pe_by_bin: dict
    ap_by_split: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "mAP": self.map,
            "AP50": self.ap50,
            "AP75": self.ap75,
            "AP_by_bin": dict(self.ap_by_bin),
            "precision": self.precision,
            "recall": self.recall,
            "F1": self.f1,
            "mPE": self.mpe,
            "PE_by_bin": dict(self.pe_by_bin),
            "AP_by_split": dict(self.ap_by_split),
            "flags": list(self.flags),
        }


def iou_axis_aligned(a: PanoBox, b: PanoBox, pano_width: float | None = None) -> float:
    """Intersection over union; wrapped boxes are unwrapped at the seam."""
    v_overlap = max(0.0, min(a.v_max, b.v_max) - max(a.v_min, b.v_min))
    if v_overlap == 0.0:
        return 0.0
    if not a.wrap and not b.wrap:
        u_overlap = max(0.0, min(a.u_max, b.u_max) - max(a.u_min, b.u_min))
        area_a = a.width() * a.height()
        area_b = b.width() * b.height()
    else:
        if pano_width is None:
            raise InvalidArgumentError("wrapped boxes require the panorama width")
        w = pano_width
        sa, ea = a.u_min, a.u_min + a.width(w)
        sb, eb = b.u_min, b.u_min + b.width(w)
        u_overlap = 0.0
        for shift in (-w, 0.0, w):
            u_overlap += max(0.0, min(ea, eb + shift) - max(sa, sb + shift))
        area_a = a.width(w) * a.height()
        area_b = b.width(w) * b.height()
    inter = u_overlap * v_overlap
    union = area_a + area_b - inter
    return inter / union if union > 0 else 0.0


def _group_by_image(records):
    grouped: dict = {}
    for i, r in enumerate(records):
        grouped.setdefault(r.image_id, []).append((i, r))
    return grouped


def _match(dets, gts, iou_threshold, pano_width=None, gt_ignored=None):
    """Greedy one-to-one matching by descending confidence.

    Returns (det_flags, matched_gt_index) where det_flags[i] is "tp",
    "fp" or "ignored" for the i-th detection in rank order, and the
    rank order itself (indices into ``dets``).  Ties in confidence are
    broken by (image_id, original index) for determinism.
    """
    if gt_ignored is None:
        gt_ignored = [False] * len(gts)
    order = sorted(
        range(len(dets)), key=lambda i: (-dets[i].confidence, dets[i].image_id, i)
    )
    gt_by_image = _group_by_image(gts)
    taken = [False] * len(gts)
    det_flags = []
    matched_gt = []
    for i in order:
        det = dets[i]
        candidates = gt_by_image.get(det.image_id, [])
        best_j = -1
        best_iou = iou_threshold
        best_ignored_j = -1
        best_ignored_iou = iou_threshold
        for j, gt in candidates:
            if taken[j]:
                continue
            iou = iou_axis_aligned(det.box, gt.box, pano_width)
            if gt_ignored[j]:
                if iou >= best_ignored_iou:
                    best_ignored_iou = iou
                    best_ignored_j = j
            elif iou >= best_iou:
                best_iou = iou
                best_j = j
        if best_j >= 0:
            taken[best_j] = True
            det_flags.append("tp")
            matched_gt.append(best_j)
        elif best_ignored_j >= 0:
            taken[best_ignored_j] = True
            det_flags.append("ignored")
            matched_gt.append(best_ignored_j)
        else:
            det_flags.append("fp")
            matched_gt.append(-1)
    return order, det_flags, matched_gt


def _ap_from_flags(det_flags, num_gt) -> float:
    """101-point interpolated AP from ranked tp/fp flags."""
    if num_gt == 0:
        return 0.0
    tp = fp = 0
    precisions = []
    recalls = []
    for flag in det_flags:
        if flag == "ignored":
            continue
        if flag == "tp":
            tp += 1
        else:
            fp += 1
        precisions.append(tp / (tp + fp))
        recalls.append(tp / num_gt)
    if not precisions:
        return 0.0
    precisions = np.array(precisions)
    recalls = np.array(recalls)
    # Precision envelope: running max from the right.
    envelope = np.maximum.accumulate(precisions[::-1])[::-1]
    idx = np.searchsorted(recalls, RECALL_GRID, side="left")
    sampled = np.where(idx < len(envelope), envelope[np.minimum(idx, len(envelope) - 1)], 0.0)
    return float(sampled.mean())


def average_precision(dets, gts, iou_threshold: float, pano_width: float | None = None,
                      gt_ignored=None) -> float:
    """COCO-style AP at a single IoU threshold.

    With no ground truth the AP is defined as 0 and a warning is issued.
    """
    gts = list(gts)
    dets = list(dets)
    if gt_ignored is None:
        gt_ignored = [False] * len(gts)
    num_gt = sum(1 for ig in gt_ignored if not ig)
    if num_gt == 0:
        warnings.warn("average precision over empty ground truth is defined as 0", stacklevel=2)
        return 0.0
    _, det_flags, _ = _match(dets, gts, iou_threshold, pano_width, gt_ignored)
    return _ap_from_flags(det_flags, num_gt)


def _gt_position(gt: GroundTruthRecord, config: EvalConfig) -> GroundPosition:
    if gt.position is not None:
        return gt.position
    if config.spec is None:
        raise ConfigurationError("panorama spec required to localize ground truth boxes")
    return locate_from_box(gt.box, config.spec, config.height_for(gt.image_id))


def _map_over_thresholds(dets, gts, pano_width, gt_ignored, max_workers: int):
    def one(thr):
        _, flags, _ = _match(dets, gts, thr, pano_width, gt_ignored)
        num_gt = sum(1 for ig in gt_ignored if not ig)
        return _ap_from_flags(flags, num_gt)

    if max_workers > 1 and len(dets) > 1000:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            aps = list(pool.map(one, COCO_IOU_THRESHOLDS))
    else:
        aps = [one(t) for t in COCO_IOU_THRESHOLDS]
    return aps


def evaluate(dets, gts, config: EvalConfig) -> EvalReport:
    """Full report: mAP / AP50 / AP75, per-bin AP and PE, P/R/F1, mPE."""
    dets = list(dets)
    gts = list(gts)
    flags: list[str] = []
    pano_width = config.spec.width if config.spec is not None else None
    max_workers = max(1, int(os.environ.get("TOOL_THREADS", "1")))

    no_ignore = [False] * len(gts)
    if gts:
        aps = _map_over_thresholds(dets, gts, pano_width, no_ignore, max_workers)
        mean_ap = float(np.mean(aps))
        ap50 = aps[0]
        ap75 = aps[5]
    else:
        flags.append("no-ground-truth")
        mean_ap = ap50 = ap75 = 0.0

    # Distance-binned AP: ground truth outside the bin is ignored, so
    # detections matching it count neither as TP nor FP.
    ap_by_bin: dict = {}
    pe_by_bin: dict = {}
    want_bins = config.camera_height_m is not None or config.camera_heights or any(
        gt.position is not None for gt in gts
    )
    if gts and want_bins:
        gt_bins = [distance_bin(_gt_position(gt, config).distance_m) for gt in gts]
        for name in DISTANCE_BINS:
            ignored = [b != name for b in gt_bins]
            if all(ignored):
                ap_by_bin[name] = float("nan")
                continue
            bin_aps = _map_over_thresholds(dets, gts, pano_width, ignored, max_workers)
            ap_by_bin[name] = float(np.mean(bin_aps))

    # Precision / recall / F1 at the confidence threshold.
    conf_dets = [d for d in dets if d.confidence >= config.confidence_threshold]
    if gts and conf_dets:
        _, det_flags, _ = _match(conf_dets, gts, 0.5, pano_width, no_ignore)
        tp = det_flags.count("tp")
        fp = det_flags.count("fp")
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / len(gts)
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    else:
        if not conf_dets:
            flags.append("no-detections-above-threshold")
        precision = recall = f1 = 0.0

    # Position error over pairs matched at the PE IoU threshold.
    mpe = float("nan")
    if gts and dets and want_bins:
        if config.spec is None:
            raise ConfigurationError("panorama spec required for position errors")
        order, det_flags, matched_gt = _match(
            dets, gts, config.pe_iou_threshold, pano_width, no_ignore
        )
        errors: dict[str, list[float]] = {name: [] for name in DISTANCE_BINS}
        all_errors = []
        for rank, flag in enumerate(det_flags):
            if flag != "tp":
                continue
            det = dets[order[rank]]
            gt = gts[matched_gt[rank]]
            gt_pos = _gt_position(gt, config)
            est = locate_from_box(det.box, config.spec, config.height_for(det.image_id))
            err = position_error(est, gt_pos)
            all_errors.append(err)
            errors[distance_bin(gt_pos.distance_m)].append(err)
        if all_errors:
            mpe = float(np.mean(all_errors))
        pe_by_bin = {
            name: (float(np.mean(errs)) if errs else float("nan"))
            for name, errs in errors.items()
        }

    # Optional seen/unseen style split passthrough.
    ap_by_split: dict = {}
    if config.image_splits and gts:
        for split in sorted(set(config.image_splits.values())):
            ids = {i for i, s in config.image_splits.items() if s == split}
            split_gts = [g for g in gts if g.image_id in ids]
            split_dets = [d for d in dets if d.image_id in ids]
            if not split_gts:
                ap_by_split[split] = float("nan")
                continue
            split_aps = _map_over_thresholds(
                split_dets, split_gts, pano_width, [False] * len(split_gts), max_workers
            )
            ap_by_split[split] = float(np.mean(split_aps))

    return EvalReport(
        map=mean_ap,
        ap50=ap50,
        ap75=ap75,
        ap_by_bin=ap_by_bin,
        precision=precision,
        recall=recall,
        f1=f1,
        mpe=mpe,
        pe_by_bin=pe_by_bin,
        ap_by_split=ap_by_split,
        flags=flags,
    )
