"""BLEU-4 word-overlap baseline, computed on the shared report tokenizer."""
import math
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .text import tokenize

MAX_ORDER = 4


@dataclass(frozen=True)
class BleuScore:
    score: float
    n_gram_precisions: Tuple[float, ...]
    brevity_penalty: float


def _words(text):
    return [t.text for t in tokenize(text)]


def _ngrams(words, n):
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def _closest_ref_length(c, ref_lengths):
    return min(ref_lengths, key=lambda r: (abs(r - c), r))


def _sentence_stats(cand, refs):
    """Clipped matches and totals per order, candidate and effective reference length."""
    matches, totals = [], []
    for n in range(1, MAX_ORDER + 1):
        counts = _ngrams(cand, n)
        max_ref = Counter()
        for ref in refs:
            max_ref |= _ngrams(ref, n)
        matches.append(sum(min(c, max_ref[g]) for g, c in counts.items()))
        totals.append(max(len(cand) - n + 1, 0))
    return matches, totals, len(cand), _closest_ref_length(len(cand), [len(r) for r in refs])


def _combine(matches, totals, c, r):
    # orders longer than the candidate have no n-grams and are left out
    precisions = tuple(matches[n] / totals[n] for n in range(MAX_ORDER) if totals[n] > 0)
    bp = 1.0 if c > r else math.exp(1 - r / c)
    if any(p == 0 for p in precisions):
        return BleuScore(0.0, precisions, bp)
    log_mean = math.fsum(math.log(p) for p in precisions) / len(precisions)
    return BleuScore(bp * math.exp(log_mean), precisions, bp)


def _prepare(candidate, references):
    cand = _words(candidate)
    refs = [_words(r) for r in references]
    if not cand:
        raise ValueError("candidate has no tokens")
    if not refs or not any(refs):
        raise ValueError("at least one non-empty reference is required")
    return cand, [r for r in refs if r]


def bleu(candidate: str, references: Sequence[str]) -> BleuScore:
    """Sentence BLEU with uniform weights, per-reference clipping and no smoothing.

    For candidates shorter than four tokens the geometric mean runs over the
    orders that exist. Any zero precision makes the score 0.
    """
    cand, refs = _prepare(candidate, references)
    return _combine(*_sentence_stats(cand, refs))


def corpus_bleu(candidates: Sequence[str], references: Sequence[Sequence[str]]) -> BleuScore:
    """BLEU over pooled n-gram counts and lengths of a whole corpus."""
    if len(candidates) != len(references) or not candidates:
        raise ValueError("need one non-empty reference list per candidate")
    matches: List[int] = [0] * MAX_ORDER
    totals: List[int] = [0] * MAX_ORDER
    c_total = r_total = 0
    for candidate, refs in zip(candidates, references):
        cand, ref_words = _prepare(candidate, refs)
        m, t, c, r = _sentence_stats(cand, ref_words)
        matches = [a + b for a, b in zip(matches, m)]
        totals = [a + b for a, b in zip(totals, t)]
        c_total += c
        r_total += r
    return _combine(matches, totals, c_total, r_total)
