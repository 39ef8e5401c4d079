"""Report quality scoring from fine-grained finding patterns and anatomical grounding."""
from .baselines import BleuScore, bleu, corpus_bleu
from .estimators import FFLExtractor, ReportQualityScorer
from .exceptions import AtlasError, LexiconError, PerturbationError, RQScoreError, UnresolvableRegionError
from .extract import ABSENT, PRESENT, FFLPattern, detect_negation, extract_ffl, render_pattern, render_report
from .grounding import (
    BBox,
    GroundedPattern,
    MatchResult,
    RegionAtlas,
    ground,
    iou,
    load_atlas,
    max_weight_matching,
    miou,
    union_area,
)
from .lexical import Granularity, LexicalScore, lexical_score, make_prefix
from .lexicon import CompletionRule, Lexicon, LexiconEntry, RegionCatalog, default_lexicon, load_lexicon, lookup, resolve_region
from .perturb import PerturbationSpec, SensitivityResult, perturb_report, sensitivity_study
from .rq import CorpusScore, PairScore, combine, rq_corpus, rq_pair
from .text import Sentence, split_sentences, tokenize

__version__ = "0.1.0"

__all__ = [
    "ABSENT",
    "AtlasError",
    "BBox",
    "bleu",
    "BleuScore",
    "combine",
    "CompletionRule",
    "corpus_bleu",
    "CorpusScore",
    "default_lexicon",
    "detect_negation",
    "extract_ffl",
    "FFLExtractor",
    "FFLPattern",
    "Granularity",
    "ground",
    "GroundedPattern",
    "iou",
    "lexical_score",
    "LexicalScore",
    "Lexicon",
    "LexiconEntry",
    "LexiconError",
    "load_atlas",
    "load_lexicon",
    "lookup",
    "make_prefix",
    "MatchResult",
    "max_weight_matching",
    "miou",
    "PairScore",
    "perturb_report",
    "PerturbationError",
    "PerturbationSpec",
    "PRESENT",
    "RegionAtlas",
    "RegionCatalog",
    "render_pattern",
    "render_report",
    "ReportQualityScorer",
    "resolve_region",
    "rq_corpus",
    "rq_pair",
    "RQScoreError",
    "sensitivity_study",
    "SensitivityResult",
    "Sentence",
    "split_sentences",
    "tokenize",
    "union_area",
    "UnresolvableRegionError",
]
