"""Per-pair and corpus-level report quality (RQ) scores."""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from .extract import DEFAULT_NEGATION_WINDOW, extract_ffl
from .grounding import RegionAtlas, ground, miou
from .lexical import LEVELS, Granularity, LexicalScore, lexical_score
from .lexicon import Lexicon

DEFAULT_LEVEL = Granularity.ANATOMY


def combine(f1: float, miou_value: float) -> float:
    """RQ of one pair: the mean of lexical F1 and MIOU."""
    return (f1 + miou_value) / 2


@dataclass(frozen=True)
class PairScore:
    image_id: str
    lexical: Dict[Granularity, LexicalScore]
    miou: float
    rq: float
    level: Granularity = DEFAULT_LEVEL
    diagnostics: Dict[str, int] = field(default_factory=dict)

    def precision(self, level) -> float:
        return self.lexical[Granularity(level)].precision

    def recall(self, level) -> float:
        return self.lexical[Granularity(level)].recall

    def f1(self, level=None) -> float:
        return self.lexical[Granularity(level or self.level)].f1

    def to_dict(self) -> dict:
        row = {"image_id": self.image_id}
        for level in LEVELS:
            s = self.lexical[level]
            row[f"precision_{level.value}"] = s.precision
            row[f"recall_{level.value}"] = s.recall
            row[f"f1_{level.value}"] = s.f1
        row["miou"] = self.miou
        row["rq"] = self.rq
        return row


@dataclass(frozen=True)
class CorpusScore:
    n_pairs: int
    precision: Dict[Granularity, float]
    recall: Dict[Granularity, float]
    f1: Dict[Granularity, float]
    miou: float
    rq: float

    def to_dict(self) -> dict:
        row = {"n_pairs": self.n_pairs}
        for level in LEVELS:
            row[f"precision_{level.value}"] = self.precision[level]
            row[f"recall_{level.value}"] = self.recall[level]
            row[f"f1_{level.value}"] = self.f1[level]
        row["miou"] = self.miou
        row["rq"] = self.rq
        return row


def rq_pair(gt_report: str, pred_report: str, image_id: str, lexicon: Lexicon, atlas: RegionAtlas,
            level=DEFAULT_LEVEL, negation_window: int = DEFAULT_NEGATION_WINDOW) -> PairScore:
    """Score one generated report against its ground truth.

    ``level`` picks the F1 that enters RQ; the anatomy level is the default.

    Raises:
        AtlasError: ``image_id`` is not in the atlas.
    """
    gt = extract_ffl(gt_report, lexicon, negation_window)
    pred = extract_ffl(pred_report, lexicon, negation_window)
    return score_patterns(gt, pred, image_id, lexicon, atlas, level)


def score_patterns(gt, pred, image_id: str, lexicon: Lexicon, atlas: RegionAtlas, level=DEFAULT_LEVEL) -> PairScore:
    level = Granularity(level)
    lexical = {lv: lexical_score(gt, pred, lv) for lv in LEVELS}
    gt_skipped: list = []
    pred_skipped: list = []
    gt_grounded = ground(gt, image_id, atlas, lexicon.catalog, gt_skipped)
    pred_grounded = ground(pred, image_id, atlas, lexicon.catalog, pred_skipped)
    m = miou(gt_grounded, pred_grounded)
    diagnostics = {
        "gt_patterns": len(gt),
        "pred_patterns": len(pred),
        "gt_grounded": len(gt_grounded),
        "pred_grounded": len(pred_grounded),
        "gt_skipped": len(gt_skipped),
        "pred_skipped": len(pred_skipped),
    }
    return PairScore(image_id, lexical, m, combine(lexical[level].f1, m), level, diagnostics)


def _mean(values: List[float]) -> float:
    # fsum is exactly rounded, so the mean does not depend on pair order
    return math.fsum(values) / len(values)


def aggregate(scores: Sequence[PairScore]) -> CorpusScore:
    if not scores:
        raise ValueError("no pairs to aggregate")
    return CorpusScore(
        n_pairs=len(scores),
        precision={lv: _mean([s.lexical[lv].precision for s in scores]) for lv in LEVELS},
        recall={lv: _mean([s.lexical[lv].recall for s in scores]) for lv in LEVELS},
        f1={lv: _mean([s.lexical[lv].f1 for s in scores]) for lv in LEVELS},
        miou=_mean([s.miou for s in scores]),
        rq=_mean([s.rq for s in scores]),
    )


def rq_corpus(pairs: Iterable[Tuple[str, str, str]], lexicon: Lexicon, atlas: RegionAtlas,
              level=DEFAULT_LEVEL, negation_window: int = DEFAULT_NEGATION_WINDOW) -> CorpusScore:
    """Mean scores over ``(gt_report, pred_report, image_id)`` triples."""
    scores = [rq_pair(g, p, i, lexicon, atlas, level, negation_window) for g, p, i in pairs]
    if not scores:
        raise ValueError("no pairs")
    return aggregate(scores)
