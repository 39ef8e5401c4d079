"""Phrasal grounding: region boxes, union IOU, bipartite matching and mean IOU."""
import json
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .assignment import lexicographic_max_matching
from .exceptions import AtlasError, UnresolvableRegionError
from .extract import FFLPattern
from .lexicon import RegionCatalog

logger = logging.getLogger(__name__)

ATLAS_FORMAT_VERSION = 1


@dataclass(frozen=True)
class BBox:
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        coords = (self.x1, self.y1, self.x2, self.y2)
        if not all(math.isfinite(c) and c >= 0 for c in coords):
            raise ValueError(f"box coordinates must be finite and non-negative: {coords}")
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError(f"box needs x1 < x2 and y1 < y2: {coords}")

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def as_list(self) -> List[float]:
        return [self.x1, self.y1, self.x2, self.y2]

    def shifted(self, dx: float, dy: float) -> "BBox":
        return BBox(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)


class RegionAtlas:
    """Per-image region boxes: ``image_id -> region name -> BBox``."""

    def __init__(self, images: Mapping[str, Mapping[str, BBox]], catalog: Optional[RegionCatalog] = None):
        self.images: Dict[str, Dict[str, BBox]] = {str(k): dict(v) for k, v in images.items()}
        if catalog is not None:
            known = set(catalog.regions)
            for image_id, regions in self.images.items():
                unknown = sorted(set(regions) - known)
                if unknown:
                    raise AtlasError(f"image {image_id!r} has regions outside the catalog: {unknown}")

    def __contains__(self, image_id):
        return image_id in self.images

    def __len__(self):
        return len(self.images)

    def regions(self, image_id: str) -> Dict[str, BBox]:
        try:
            return self.images[image_id]
        except KeyError:
            raise AtlasError(f"image {image_id!r} is not in the atlas") from None

    def to_dict(self) -> dict:
        return {
            "format_version": ATLAS_FORMAT_VERSION,
            "images": {
                image_id: {name: box.as_list() for name, box in regions.items()}
                for image_id, regions in self.images.items()
            },
        }

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")


def load_atlas(path: Union[str, Path], catalog: Optional[RegionCatalog] = None) -> RegionAtlas:
    """Read an atlas file ``{"format_version": 1, "images": {id: {region: [x1, y1, x2, y2]}}}``."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AtlasError(f"line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != ATLAS_FORMAT_VERSION:
        raise AtlasError(f"atlas must be an object with format_version {ATLAS_FORMAT_VERSION}")
    images = {}
    for image_id, regions in doc.get("images", {}).items():
        try:
            images[image_id] = {name: BBox(*map(float, coords)) for name, coords in regions.items()}
        except (TypeError, ValueError) as exc:
            raise AtlasError(f"image {image_id!r}: {exc}") from exc
    return RegionAtlas(images, catalog)


@dataclass(frozen=True)
class GroundedPattern:
    pattern: FFLPattern
    boxes: Tuple[BBox, ...]
    regions: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.boxes:
            raise ValueError("a grounded pattern needs at least one box")


def ground(patterns: Iterable[FFLPattern], image_id: str, atlas: RegionAtlas, catalog: RegionCatalog,
           skipped: Optional[list] = None) -> List[GroundedPattern]:
    """Attach region boxes to every pattern whose anatomy resolves in this image.

    Patterns without anatomy, with an anatomy the catalog cannot resolve, or
    resolving to regions missing from the image are skipped; when ``skipped``
    is a list, ``(pattern, reason)`` tuples are appended to it.

    Raises:
        AtlasError: ``image_id`` is not in the atlas.
    """
    boxes_by_region = atlas.regions(image_id)
    out = []
    for p in patterns:
        reason = None
        if p.anatomy is None:
            reason = "no anatomy"
        else:
            try:
                names = catalog.resolve(p.anatomy, p.laterality)
            except UnresolvableRegionError as exc:
                reason = str(exc)
            else:
                missing = [n for n in names if n not in boxes_by_region]
                if missing:
                    reason = f"regions {missing} absent for image {image_id!r}"
                else:
                    out.append(GroundedPattern(p, tuple(boxes_by_region[n] for n in names), tuple(names)))
        if reason is not None:
            logger.debug("not grounding %s: %s", p, reason)
            if skipped is not None:
                skipped.append((p, reason))
    return out


def _coverage(boxes, xs, ys):
    cx = (xs[:-1] + xs[1:]) / 2
    cy = (ys[:-1] + ys[1:]) / 2
    mask = np.zeros((cy.size, cx.size), dtype=bool)
    for b in boxes:
        mask |= ((cy > b.y1) & (cy < b.y2))[:, None] & ((cx > b.x1) & (cx < b.x2))[None, :]
    return mask


def _grid(boxes):
    xs = np.unique(np.array([c for b in boxes for c in (b.x1, b.x2)], dtype=float))
    ys = np.unique(np.array([c for b in boxes for c in (b.y1, b.y2)], dtype=float))
    cell_area = np.outer(np.diff(ys), np.diff(xs))
    return xs, ys, cell_area


def union_area(boxes: Sequence[BBox]) -> float:
    """Exact area of the planar union of axis-aligned boxes."""
    if not boxes:
        return 0.0
    if len(boxes) == 1:
        return boxes[0].area
    xs, ys, cell_area = _grid(boxes)
    return float(cell_area[_coverage(boxes, xs, ys)].sum())


def iou(a: Sequence[BBox], b: Sequence[BBox]) -> float:
    """Intersection over union of the planar unions of two box sets.

    Uses coordinate compression over every box edge, so the result is exact up
    to floating-point rounding.
    """
    a, b = tuple(a), tuple(b)
    if not a or not b:
        raise ValueError("iou needs two non-empty box sets")
    if len(a) == 1 and len(b) == 1:
        p, q = a[0], b[0]
        w = min(p.x2, q.x2) - max(p.x1, q.x1)
        h = min(p.y2, q.y2) - max(p.y1, q.y1)
        inter = w * h if w > 0 and h > 0 else 0.0
        return inter / (p.area + q.area - inter)
    xs, ys, cell_area = _grid(a + b)
    in_a = _coverage(a, xs, ys)
    in_b = _coverage(b, xs, ys)
    inter = cell_area[in_a & in_b].sum()
    union = cell_area[in_a | in_b].sum()
    return float(inter / union)


@dataclass
class MatchResult:
    pairs: List[Tuple[int, int, float]] = field(default_factory=list)
    total_weight: float = 0.0
    unmatched_gt: List[int] = field(default_factory=list)
    unmatched_pred: List[int] = field(default_factory=list)


def _core_key(g: GroundedPattern):
    return g.pattern.key[:3]


def max_weight_matching(gt: Sequence[GroundedPattern], pred: Sequence[GroundedPattern], tol: float = 1e-12) -> MatchResult:
    """Maximum-IOU matching between grounded patterns sharing type, polarity and core finding.

    Edges only join patterns with the same (T, N, C) prefix, so the problem
    splits into one dense assignment per prefix. Zero-IOU edges are valid
    candidates. Among optimal matchings the lexicographically smallest
    ``(gt index, pred index)`` sequence is returned.
    """
    groups = defaultdict(lambda: ([], []))
    for i, g in enumerate(gt):
        groups[_core_key(g)][0].append(i)
    for j, p in enumerate(pred):
        groups[_core_key(p)][1].append(j)

    pairs = []
    for rows, cols in groups.values():
        if not rows or not cols:
            continue
        weights = [[iou(gt[i].boxes, pred[j].boxes) for j in cols] for i in rows]
        _, local = lexicographic_max_matching(weights, tol)
        pairs.extend((rows[r], cols[c], weights[r][c]) for r, c in local)
    pairs.sort()
    matched_gt = {i for i, _, _ in pairs}
    matched_pred = {j for _, j, _ in pairs}
    return MatchResult(
        pairs=pairs,
        total_weight=math.fsum(w for _, _, w in pairs),
        unmatched_gt=[i for i in range(len(gt)) if i not in matched_gt],
        unmatched_pred=[j for j in range(len(pred)) if j not in matched_pred],
    )


def miou(gt: Sequence[GroundedPattern], pred: Sequence[GroundedPattern], matching: Optional[MatchResult] = None) -> float:
    """Twice the maximum matching weight over the number of grounded patterns on both sides.

    Both sides empty scores 1.0; exactly one side empty scores 0.0.
    """
    if not gt and not pred:
        return 1.0
    if not gt or not pred:
        return 0.0
    if matching is None:
        matching = max_weight_matching(gt, pred)
    return min(1.0, 2.0 * matching.total_weight / (len(gt) + len(pred)))
