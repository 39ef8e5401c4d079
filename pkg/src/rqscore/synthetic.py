"""Synthetic region atlases and report corpora for tests, demos and the sensitivity study."""
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .extract import ABSENT, PRESENT, FFLPattern
from .grounding import BBox, RegionAtlas
from .lexicon import (
    ANATOMY,
    CORE_FINDING,
    LATERALITY,
    SEVERITY,
    Lexicon,
)

# Rough frontal chest radiograph layout on a 1024 x 1024 image.
# The patient's right side is on the image left.
CANONICAL_LAYOUT = {
    "right lung": (100, 150, 480, 800),
    "right upper lung zone": (100, 150, 480, 366),
    "right mid lung zone": (100, 366, 480, 583),
    "right lower lung zone": (100, 583, 480, 800),
    "right hilar structures": (330, 350, 470, 520),
    "right apical zone": (150, 150, 430, 260),
    "right costophrenic angle": (100, 720, 200, 820),
    "right cardiophrenic angle": (380, 680, 480, 780),
    "right hemidiaphragm": (100, 720, 480, 830),
    "left lung": (544, 150, 924, 800),
    "left upper lung zone": (544, 150, 924, 366),
    "left mid lung zone": (544, 366, 924, 583),
    "left lower lung zone": (544, 583, 924, 800),
    "left hilar structures": (554, 350, 694, 520),
    "left apical zone": (594, 150, 874, 260),
    "left costophrenic angle": (824, 720, 924, 820),
    "left cardiophrenic angle": (544, 680, 660, 780),
    "left hemidiaphragm": (544, 740, 924, 850),
    "trachea": (482, 80, 542, 380),
    "spine": (462, 80, 562, 1000),
    "right clavicle": (120, 120, 480, 200),
    "left clavicle": (544, 120, 904, 200),
    "aortic arch": (500, 280, 620, 360),
    "mediastinum": (380, 150, 644, 780),
    "upper mediastinum": (400, 150, 624, 380),
    "svc": (420, 200, 492, 420),
    "cardiac silhouette": (380, 420, 760, 780),
    "left cardiac silhouette": (512, 420, 760, 780),
    "right cardiac silhouette": (380, 420, 512, 780),
    "cavoatrial junction": (430, 400, 500, 460),
    "right atrium": (380, 450, 512, 700),
    "descending aorta": (540, 350, 620, 800),
    "left upper abdomen": (544, 800, 950, 1000),
    "right upper abdomen": (74, 800, 480, 1000),
    "abdomen": (74, 800, 950, 1000),
    "carina": (472, 360, 552, 420),
}


def make_atlas(image_ids: Sequence[str], seed: int = 0, jitter: float = 0.03,
               regions: Optional[Sequence[str]] = None) -> RegionAtlas:
    """An atlas whose images are randomly scaled and shifted copies of the canonical layout.

    Every box is additionally jittered by up to ``jitter`` of its own size.
    """
    rng = random.Random(seed)
    names = list(regions) if regions is not None else list(CANONICAL_LAYOUT)
    images: Dict[str, Dict[str, BBox]] = {}
    for image_id in image_ids:
        scale = rng.uniform(0.85, 1.15)
        dx, dy = rng.uniform(0, 60), rng.uniform(0, 60)
        boxes = {}
        for name in names:
            x1, y1, x2, y2 = CANONICAL_LAYOUT[name]
            w, h = x2 - x1, y2 - y1
            j = [rng.uniform(-jitter, jitter) for _ in range(4)]
            boxes[name] = BBox(
                round(max(0.0, (x1 + j[0] * w) * scale + dx), 2),
                round(max(0.0, (y1 + j[1] * h) * scale + dy), 2),
                round((x2 + j[2] * w) * scale + dx, 2),
                round((y2 + j[3] * h) * scale + dy, 2),
            )
        images[image_id] = boxes
    return RegionAtlas(images)


@dataclass
class ReportRecord:
    image_id: str
    ground_truth: str
    prediction: Optional[str] = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"image_id": self.image_id, "ground_truth": self.ground_truth}
        if self.prediction is not None:
            out["prediction"] = self.prediction
        if self.metadata:
            out["metadata"] = self.metadata
        return out


def _phrase(lexicon, category, name, rng):
    entry = lexicon.get(category, name)
    return rng.choice(entry.surface_forms)


def random_patterns(lexicon: Lexicon, rng: random.Random, n_findings: int) -> List[FFLPattern]:
    """Random, mutually distinct finding patterns with resolvable anatomy."""
    findings = rng.sample(lexicon.by_category(CORE_FINDING), n_findings)
    anatomies = lexicon.catalog.anatomies
    severities = [e.canonical_name for e in lexicon.by_category(SEVERITY)]
    out = []
    for f in findings:
        polarity = ABSENT if rng.random() < 0.35 else PRESENT
        anatomy = rng.choice(anatomies)
        intrinsic = lexicon.get(ANATOMY, anatomy).laterality
        if intrinsic:
            laterality = intrinsic
        elif lexicon.catalog.is_lateralized(anatomy):
            laterality = rng.choice(["left", "right", "bilateral"])
        else:
            laterality = None
        severity = rng.choice(severities) if polarity == PRESENT and rng.random() < 0.7 else None
        out.append(FFLPattern(f.finding_type, polarity, f.canonical_name, anatomy, laterality, severity))
    return out


def describe(pattern: FFLPattern, lexicon: Lexicon, rng: random.Random) -> str:
    """A free-text sentence for one pattern, with varied phrasing and synonyms."""
    finding = _phrase(lexicon, CORE_FINDING, pattern.core_finding, rng)
    place = ""
    if pattern.anatomy:
        anatomy = lexicon.get(ANATOMY, pattern.anatomy)
        side = ""
        if pattern.laterality and not anatomy.laterality:
            side = _phrase(lexicon, LATERALITY, pattern.laterality, rng) + " "
        place = f" in the {side}{rng.choice(anatomy.surface_forms)}"
    if pattern.polarity == ABSENT:
        cue = rng.choice(["no", "no evidence of", "without", "negative for"])
        text = rng.choice([f"{cue} {finding}{place}", f"there is {cue} {finding}{place}"])
    else:
        sev = _phrase(lexicon, SEVERITY, pattern.severity, rng) + " " if pattern.severity else ""
        text = rng.choice([
            f"there is {sev}{finding}{place}",
            f"{sev}{finding} is seen{place}",
            f"{sev}{finding}{place}",
        ])
    return text[:1].upper() + text[1:] + "."


def make_report(patterns: Sequence[FFLPattern], lexicon: Lexicon, rng: random.Random) -> str:
    return " ".join(describe(p, lexicon, rng) for p in patterns)


def _degrade(patterns, lexicon, rng):
    # a plausible generated report: drop, add, or alter some findings
    out = list(patterns)
    pool = [e for e in lexicon.by_category(CORE_FINDING) if e.canonical_name not in {p.core_finding for p in out}]
    if len(out) > 1 and rng.random() < 0.5:
        out.pop(rng.randrange(len(out)))
    if rng.random() < 0.5 and pool:
        extra = random_patterns(lexicon, rng, 1)[0]
        out.append(extra)
    for i, p in enumerate(out):
        roll = rng.random()
        if roll < 0.15 and p.polarity == PRESENT:
            out[i] = FFLPattern(p.finding_type, ABSENT, p.core_finding, p.anatomy, p.laterality, None)
        elif roll < 0.35:
            anatomy = rng.choice(lexicon.catalog.anatomies)
            intrinsic = lexicon.get(ANATOMY, anatomy).laterality
            lat = intrinsic or (p.laterality if lexicon.catalog.is_lateralized(anatomy) else None)
            out[i] = FFLPattern(p.finding_type, p.polarity, p.core_finding, anatomy, lat, p.severity)
    return out


def make_corpus(lexicon: Lexicon, n_reports: int, seed: int = 0, with_predictions: bool = False,
                min_findings: int = 2, max_findings: int = 5, prefix: str = "img") -> List[ReportRecord]:
    """Randomly generated ground-truth reports, optionally with degraded predictions."""
    rng = random.Random(seed)
    records = []
    for k in range(n_reports):
        patterns = random_patterns(lexicon, rng, rng.randint(min_findings, max_findings))
        gt = make_report(patterns, lexicon, rng)
        pred = make_report(_degrade(patterns, lexicon, rng), lexicon, rng) if with_predictions else None
        records.append(ReportRecord(f"{prefix}{k:04d}", gt, pred))
    return records
