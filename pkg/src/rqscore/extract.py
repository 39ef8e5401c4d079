"""Fine-grained finding (FFL) pattern extraction from report text."""
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .lexicon import (
    ANATOMY,
    CORE_FINDING,
    LATERALITY,
    NEGATION_CUE,
    SEVERITY,
    Lexicon,
    LexiconEntry,
)
from .text import Sentence, split_sentences

PRESENT = "present"
ABSENT = "absent"

DEFAULT_NEGATION_WINDOW = 6
SCOPE_TERMINATOR_WORDS = frozenset({"but", "however"})
SCOPE_TERMINATOR_CHARS = frozenset(";,")


@dataclass(frozen=True)
class FFLPattern:
    """One finding: type, polarity, core finding, anatomy, laterality, severity.

    Equality and hashing use those six fields only; ``source_sentence_index`` is
    provenance.
    """

    finding_type: str
    polarity: str
    core_finding: str
    anatomy: Optional[str] = None
    laterality: Optional[str] = None
    severity: Optional[str] = None
    source_sentence_index: int = field(default=-1, compare=False)

    def __post_init__(self):
        if self.polarity not in (PRESENT, ABSENT):
            raise ValueError(f"polarity must be {PRESENT!r} or {ABSENT!r}, got {self.polarity!r}")
        if not self.core_finding or not self.finding_type:
            raise ValueError("finding_type and core_finding are required")
        if self.severity is not None and self.polarity == ABSENT:
            raise ValueError("an absent finding cannot carry a severity")

    @property
    def key(self) -> Tuple[Optional[str], ...]:
        return (self.finding_type, self.polarity, self.core_finding,
                self.anatomy, self.laterality, self.severity)

    def __str__(self):
        return "|".join("" if v is None else v for v in self.key)

    @classmethod
    def from_string(cls, text: str, source_sentence_index: int = -1) -> "FFLPattern":
        parts = text.split("|")
        if len(parts) != 6:
            raise ValueError(f"expected 6 pipe-separated fields, got {text!r}")
        t, n, c, a, lat, s = (p or None for p in parts)
        return cls(t, n, c, a, lat, s, source_sentence_index)

    def to_dict(self) -> dict:
        return {
            "finding_type": self.finding_type,
            "polarity": self.polarity,
            "core_finding": self.core_finding,
            "anatomy": self.anatomy,
            "laterality": self.laterality,
            "severity": self.severity,
        }


class Mention(NamedTuple):
    entry: LexiconEntry
    start: int
    end: int  # exclusive token index


def find_mentions(sentence: Sentence, lexicon: Lexicon) -> List[Mention]:
    """Left-to-right, non-overlapping longest matches of lexicon phrases."""
    tokens = sentence.tokens
    mentions = []
    i = 0
    while i < len(tokens):
        hit = lexicon.lookup(tokens, i)
        if hit is None:
            i += 1
            continue
        entry, span = hit
        mentions.append(Mention(entry, i, i + span))
        i += span
    return mentions


def _gap(a_start, a_end, b_start, b_end):
    # number of tokens strictly between two spans
    return max(b_start - a_end, a_start - b_end, 0)


def _in_scope(sentence, cue, finding_start, window):
    if finding_start < cue.end or finding_start - cue.end >= window:
        return False
    tokens = sentence.tokens
    if any(t.text in SCOPE_TERMINATOR_WORDS for t in tokens[cue.end:finding_start]):
        return False
    between = sentence.text[tokens[cue.end - 1].end:tokens[finding_start].start]
    return not any(ch in SCOPE_TERMINATOR_CHARS for ch in between)


def _polarity(sentence, cues, span, window):
    start = span[0]
    for cue in cues:
        if cue.end <= start and _in_scope(sentence, cue, start, window):
            return ABSENT
    return PRESENT


def detect_negation(sentence: Sentence, lexicon: Lexicon, finding_span: Tuple[int, int],
                    window: int = DEFAULT_NEGATION_WINDOW) -> str:
    """Polarity of the finding at token range ``finding_span`` (end exclusive).

    The finding is absent when a negation cue ends before it, the finding
    starts within ``window`` tokens after the cue, and no scope terminator
    ("but", "however", ";", ",") sits in between.
    """
    start, end = finding_span
    if not 0 <= start < end <= len(sentence.tokens):
        raise ValueError(f"finding span {finding_span} outside sentence of {len(sentence.tokens)} tokens")
    cues = [m for m in find_mentions(sentence, lexicon) if m.entry.category == NEGATION_CUE]
    return _polarity(sentence, cues, finding_span, window)


def _nearest(mentions, target):
    # nearest by token gap, leftmost on ties
    best = None
    for m in mentions:
        d = _gap(m.start, m.end, target.start, target.end)
        if best is None or d < best[0] or (d == best[0] and m.start < best[1].start):
            best = (d, m)
    return None if best is None else best[1]


def _sentence_patterns(sentence, index, lexicon, window):
    mentions = find_mentions(sentence, lexicon)
    findings = [m for m in mentions if m.entry.category == CORE_FINDING]
    if not findings:
        return []
    cues = [m for m in mentions if m.entry.category == NEGATION_CUE]

    attached = {id(f): {ANATOMY: [], LATERALITY: [], SEVERITY: []} for f in findings}
    for m in mentions:
        if m.entry.category in (ANATOMY, LATERALITY, SEVERITY):
            owner = _nearest(findings, m)
            attached[id(owner)][m.entry.category].append(m)

    out = []
    for f in findings:
        mods = attached[id(f)]
        polarity = _polarity(sentence, cues, (f.start, f.end), window)
        lat = _nearest(mods[LATERALITY], f)
        laterality = lat.entry.canonical_name if lat else None
        sev = _nearest(mods[SEVERITY], f)
        severity = sev.entry.canonical_name if sev and polarity == PRESENT else None
        anatomies = [(a.entry.canonical_name, a.entry.laterality) for a in mods[ANATOMY]]
        if not anatomies:
            rule = lexicon.completion_rules.get(f.entry.canonical_name)
            if rule is not None:
                default_side = laterality if laterality is not None else rule.default_laterality
                anatomy_entry = lexicon.get(ANATOMY, rule.default_anatomy)
                anatomies = [(rule.default_anatomy, anatomy_entry.laterality or default_side)]
                laterality = anatomies[0][1]
        if not anatomies:
            anatomies = [(None, None)]
        for anatomy, intrinsic in anatomies:
            out.append(FFLPattern(
                finding_type=f.entry.finding_type,
                polarity=polarity,
                core_finding=f.entry.canonical_name,
                anatomy=anatomy,
                laterality=intrinsic or laterality,
                severity=severity,
                source_sentence_index=index,
            ))
    return out


def extract_ffl(report_text: str, lexicon: Lexicon, negation_window: int = DEFAULT_NEGATION_WINDOW) -> List[FFLPattern]:
    """Extract the deduplicated FFL patterns of a report, in sentence then token order.

    Each core-finding mention yields one pattern per attached anatomy. Every
    anatomy, laterality and severity mention attaches to its nearest core
    finding in the same sentence. A finding with no anatomy gets the default
    from its completion rule, if it has one.
    """
    seen = set()
    patterns = []
    for index, sentence in enumerate(split_sentences(report_text)):
        for p in _sentence_patterns(sentence, index, lexicon, negation_window):
            if p not in seen:
                seen.add(p)
                patterns.append(p)
    return patterns


def render_pattern(pattern: FFLPattern, lexicon: Lexicon) -> str:
    """Render a pattern as "(No )(severity )(finding)( in the (laterality )anatomy)."."""
    words = []
    if pattern.polarity == ABSENT:
        words.append("no")
    if pattern.severity:
        words.append(_form(lexicon, SEVERITY, pattern.severity))
    words.append(_form(lexicon, CORE_FINDING, pattern.core_finding))
    if pattern.anatomy:
        words.append("in the")
        anatomy = lexicon.get(ANATOMY, pattern.anatomy)
        if pattern.laterality and not (anatomy is not None and anatomy.laterality):
            words.append(_form(lexicon, LATERALITY, pattern.laterality))
        words.append(_form(lexicon, ANATOMY, pattern.anatomy))
    text = " ".join(words)
    return text[:1].upper() + text[1:] + "."


def render_report(patterns: Sequence[FFLPattern], lexicon: Lexicon) -> str:
    return " ".join(render_pattern(p, lexicon) for p in patterns)


def _form(lexicon, category, name):
    entry = lexicon.get(category, name)
    return entry.display_form if entry is not None else name
