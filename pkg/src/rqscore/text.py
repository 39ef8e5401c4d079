"""Sentence splitting and word tokenization shared by extraction and BLEU."""
import re
from dataclasses import dataclass, field
from typing import List, NamedTuple


class Token(NamedTuple):
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: List[Token] = field(default_factory=list)

    @property
    def words(self) -> List[str]:
        return [t.text for t in self.tokens]


_WORD = re.compile(r"[A-Za-z0-9]+")
# a terminator only ends a sentence when followed by whitespace or end of line,
# so "3.5 cm" stays intact
_TERMINATOR = re.compile(r"[.!?]+(?=\s|$)")
_LIST_MARKER = re.compile(r"^\s*(?:\d+[.)]|[-*•])\s*")


def tokenize(text: str) -> List[Token]:
    """Lowercase alphanumeric runs with their character offsets into ``text``."""
    return [Token(m.group().lower(), m.start(), m.end()) for m in _WORD.finditer(text)]


def split_sentences(report_text: str) -> List[Sentence]:
    """Split a report into sentences.

    Lines are split first so that newline-delimited list items become their own
    sentences; a leading list marker such as ``1.`` or ``-`` is stripped. Each
    line is then split on ``.``, ``!`` and ``?``. Segments without a single
    word character are dropped.
    """
    sentences = []
    for line in report_text.splitlines():
        marker = _LIST_MARKER.match(line)
        if marker:
            line = line[marker.end():]
        pos = 0
        for m in _TERMINATOR.finditer(line):
            _append(sentences, line[pos:m.start()])
            pos = m.end()
        _append(sentences, line[pos:])
    return sentences


def _append(sentences, segment):
    segment = segment.strip()
    tokens = tokenize(segment)
    if tokens:
        sentences.append(Sentence(segment, tokens))
