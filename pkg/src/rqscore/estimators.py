"""scikit-learn compatible wrappers around extraction and RQ scoring."""
from typing import List, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    check_consistent_length,
    check_level,
    check_reports,
    check_window,
    resolve_atlas,
    resolve_lexicon,
)
from .extract import DEFAULT_NEGATION_WINDOW, FFLPattern, extract_ffl
from .rq import CorpusScore, PairScore, aggregate, score_patterns


class FFLExtractor(TransformerMixin, BaseEstimator):
    """Turn report texts into lists of FFL patterns.

    Parameters
    ----------
    lexicon : Lexicon, path or None
        Vocabulary to match against; None loads the bundled fixture lexicon.
    negation_window : int
        Tokens after a negation cue that fall in its scope.
    as_strings : bool
        Emit ``"T|N|C|A|L|S"`` strings instead of :class:`FFLPattern` objects.
    """

    def __init__(self, lexicon=None, negation_window=DEFAULT_NEGATION_WINDOW, as_strings=False):
        self.lexicon = lexicon
        self.negation_window = negation_window
        self.as_strings = as_strings

    def fit(self, X=None, y=None):
        self.lexicon_ = resolve_lexicon(self.lexicon)
        self.negation_window_ = check_window(self.negation_window)
        return self

    def transform(self, X) -> List[list]:
        check_is_fitted(self, "lexicon_")
        out = []
        for text in check_reports(X):
            patterns = extract_ffl(text, self.lexicon_, self.negation_window_)
            out.append([str(p) for p in patterns] if self.as_strings else patterns)
        return out


class ReportQualityScorer(BaseEstimator):
    """Score generated reports against ground truth with lexical F1, MIOU and RQ.

    ``fit`` only loads the lexicon and atlas; nothing is learned. ``X`` holds
    generated reports and ``y`` the matching ground-truth reports, following
    the ``score(X, y)`` convention.
    """

    def __init__(self, atlas=None, lexicon=None, level="anatomy", negation_window=DEFAULT_NEGATION_WINDOW):
        self.atlas = atlas
        self.lexicon = lexicon
        self.level = level
        self.negation_window = negation_window

    def fit(self, X=None, y=None):
        if self.atlas is None:
            raise ValueError("ReportQualityScorer needs an atlas")
        self.lexicon_ = resolve_lexicon(self.lexicon)
        self.atlas_ = resolve_atlas(self.atlas, self.lexicon_)
        self.level_ = check_level(self.level)
        self.negation_window_ = check_window(self.negation_window)
        return self

    def _patterns(self, texts) -> List[List[FFLPattern]]:
        return [extract_ffl(t, self.lexicon_, self.negation_window_) for t in texts]

    def score_pairs(self, X, y, image_ids: Sequence[str]) -> List[PairScore]:
        check_is_fitted(self, "atlas_")
        pred = check_reports(X, "X")
        gt = check_reports(y, "y")
        ids = [str(i) for i in image_ids]
        check_consistent_length(pred, gt, ids)
        return [
            score_patterns(g, p, i, self.lexicon_, self.atlas_, self.level_)
            for g, p, i in zip(self._patterns(gt), self._patterns(pred), ids)
        ]

    def score_corpus(self, X, y, image_ids: Sequence[str]) -> CorpusScore:
        return aggregate(self.score_pairs(X, y, image_ids))

    def rq_values(self, X, y, image_ids: Sequence[str]) -> np.ndarray:
        """Per-pair RQ values."""
        return np.array([s.rq for s in self.score_pairs(X, y, image_ids)])

    def score(self, X, y, image_ids: Optional[Sequence[str]] = None) -> float:
        """Corpus RQ; ``image_ids`` is required in practice and is keyword-style for sklearn compatibility."""
        if image_ids is None:
            raise ValueError("image_ids is required")
        return self.score_corpus(X, y, image_ids).rq
