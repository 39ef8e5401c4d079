"""Prefix patterns and set-overlap precision/recall/F1 between two reports."""
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

from .extract import FFLPattern


class Granularity(str, Enum):
    """Matching level, ordered CORE < ANATOMY < ALL."""

    CORE = "core"
    ANATOMY = "anatomy"
    ALL = "all"

    @property
    def width(self) -> int:
        return _WIDTH[self]

    def __lt__(self, other):
        return self.width < Granularity(other).width

    def __le__(self, other):
        return self.width <= Granularity(other).width

    def __gt__(self, other):
        return self.width > Granularity(other).width

    def __ge__(self, other):
        return self.width >= Granularity(other).width


# number of leading (T, N, C, A, L, S) fields retained
_WIDTH = {Granularity.CORE: 3, Granularity.ANATOMY: 5, Granularity.ALL: 6}

LEVELS = (Granularity.CORE, Granularity.ANATOMY, Granularity.ALL)

PrefixPattern = Tuple


def make_prefix(pattern: FFLPattern, level) -> PrefixPattern:
    """Truncate a pattern to the fields retained at ``level``."""
    return pattern.key[:Granularity(level).width]


@dataclass(frozen=True)
class LexicalScore:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


def _ratio(num, den, empty):
    return num / den if den else empty


def score_counts(tp: int, fp: int, fn: int) -> LexicalScore:
    """Precision/recall/F1 from counts.

    Both sides empty scores 1 across the board; a zero denominator with one
    side non-empty scores 0.
    """
    if tp == fp == fn == 0:
        return LexicalScore(0, 0, 0, 1.0, 1.0, 1.0)
    return LexicalScore(
        tp, fp, fn,
        precision=_ratio(tp, tp + fp, 0.0),
        recall=_ratio(tp, tp + fn, 0.0),
        f1=2 * tp / (2 * tp + fp + fn),
    )


def lexical_score(gt: Iterable[FFLPattern], pred: Iterable[FFLPattern], level=Granularity.ANATOMY) -> LexicalScore:
    """Overlap score of two pattern collections at one granularity.

    Full patterns are deduplicated per side, then truncated to ``level``.
    ``tp`` is the size of the multiset intersection of the truncated patterns,
    i.e. the largest one-to-one pairing of patterns with equal prefixes, and
    ``fp = |P| - tp``, ``fn = |G| - tp``. Coarser levels can only add pairings,
    so ``tp`` never decreases from ``all`` to ``core``.
    """
    level = Granularity(level)
    g = Counter(make_prefix(p, level) for p in _distinct(gt))
    p = Counter(make_prefix(q, level) for q in _distinct(pred))
    tp = sum((g & p).values())
    return score_counts(tp, sum(p.values()) - tp, sum(g.values()) - tp)


def _distinct(patterns):
    return {p.key: p for p in patterns}.values()
