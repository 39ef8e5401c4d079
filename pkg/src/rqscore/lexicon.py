"""Normalized vocabulary, anatomical region catalog and completion rules.

The lexicon file is UTF-8 JSON with the layout::

    {
      "format_version": 1,
      "entries": [
        {"canonical_name": "opacity", "category": "core_finding",
         "finding_type": "anatomicalfinding",
         "surface_forms": ["opacity", "opacification"]},
        {"canonical_name": "left lower lobe", "category": "anatomy",
         "laterality": "left", "surface_forms": ["left lower lobe", "lll"]},
        ...
      ],
      "completion_rules": [
        {"trigger_core_finding": "pneumothorax", "default_anatomy": "lung",
         "default_laterality": "bilateral"}
      ],
      "regions": ["right lung", "left lung", ...],
      "laterality_map": [
        {"anatomy": "lung", "laterality": "left", "regions": ["left lung"]},
        {"anatomy": "mediastinum", "laterality": null, "regions": ["mediastinum"]}
      ]
    }

``laterality`` on an anatomy entry is optional and marks an anatomy whose name
already fixes the side.
"""
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import LexiconError, UnresolvableRegionError
from .text import tokenize

FORMAT_VERSION = 1

CORE_FINDING = "core_finding"
ANATOMY = "anatomy"
LATERALITY = "laterality"
SEVERITY = "severity"
NEGATION_CUE = "negation_cue"

# lookup tie-break order, highest priority first
CATEGORIES = (CORE_FINDING, ANATOMY, LATERALITY, SEVERITY, NEGATION_CUE)
_PRIORITY = {c: i for i, c in enumerate(CATEGORIES)}

LEFT, RIGHT, BILATERAL = "left", "right", "bilateral"


@dataclass(frozen=True)
class LexiconEntry:
    canonical_name: str
    category: str
    surface_forms: Tuple[str, ...]
    finding_type: Optional[str] = None
    laterality: Optional[str] = None

    @property
    def display_form(self) -> str:
        """Surface form used when rendering the entry back to text."""
        if self.canonical_name in self.surface_forms:
            return self.canonical_name
        return self.surface_forms[0]


@dataclass(frozen=True)
class CompletionRule:
    trigger_core_finding: str
    default_anatomy: str
    default_laterality: Optional[str] = None


@dataclass(frozen=True)
class RegionCatalog:
    """The named anatomical regions boxes can exist for, and how anatomy maps onto them."""

    regions: Tuple[str, ...]
    laterality_map: Mapping[Tuple[str, Optional[str]], Tuple[str, ...]]
    bilateral_union: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.regions)
        for key, targets in self.laterality_map.items():
            if not targets:
                raise LexiconError(f"laterality_map entry {key} has no regions")
            for t in targets:
                if t not in known:
                    raise LexiconError(f"laterality_map entry {key} targets unknown region {t!r}")
        if not self.bilateral_union:
            union = {}
            for anatomy in {a for a, _ in self.laterality_map}:
                left = self.laterality_map.get((anatomy, LEFT))
                right = self.laterality_map.get((anatomy, RIGHT))
                if left and right:
                    union[anatomy] = tuple(dict.fromkeys(left + right))
            object.__setattr__(self, "bilateral_union", union)

    @property
    def anatomies(self) -> List[str]:
        return sorted({a for a, _ in self.laterality_map})

    def is_lateralized(self, anatomy: str) -> bool:
        return anatomy in self.bilateral_union

    def resolve(self, anatomy: str, laterality: Optional[str] = None) -> List[str]:
        exact = self.laterality_map.get((anatomy, laterality))
        if exact:
            return list(exact)
        if laterality in (None, BILATERAL) and anatomy in self.bilateral_union:
            return list(self.bilateral_union[anatomy])
        unsided = self.laterality_map.get((anatomy, None))
        if unsided:
            return list(unsided)
        sides = [v for (a, _), v in self.laterality_map.items() if a == anatomy]
        if len(sides) == 1:
            return list(sides[0])
        raise UnresolvableRegionError(
            f"no region for anatomy {anatomy!r} with laterality {laterality!r}"
        )


def resolve_region(catalog: RegionCatalog, anatomy: str, laterality: Optional[str] = None) -> List[str]:
    """Map a canonical anatomy (and optional laterality) to catalog region names.

    A lateralized anatomy with an explicit side resolves to that side's region;
    ``bilateral`` or no laterality resolves to both sides. A non-lateralized
    anatomy always resolves to its own region(s).

    Raises:
        UnresolvableRegionError: the anatomy is not in the catalog.
    """
    return catalog.resolve(anatomy, laterality)


class Lexicon:
    """An indexed, immutable vocabulary supporting longest-phrase lookup."""

    def __init__(self, entries: Sequence[LexiconEntry], completion_rules: Sequence[CompletionRule] = (),
                 catalog: Optional[RegionCatalog] = None):
        self.entries = tuple(entries)
        self.catalog = catalog if catalog is not None else RegionCatalog((), {})
        self._by_name: Dict[Tuple[str, str], LexiconEntry] = {}
        self._index: Dict[Tuple[str, ...], Dict[str, LexiconEntry]] = {}
        self.max_span = 0
        for entry in self.entries:
            _check_entry(entry)
            key = (entry.category, entry.canonical_name)
            if key in self._by_name:
                raise LexiconError(f"duplicate canonical name {entry.canonical_name!r} in category {entry.category}")
            self._by_name[key] = entry
            for form in entry.surface_forms:
                words = tuple(t.text for t in tokenize(form))
                if not words:
                    raise LexiconError(f"surface form {form!r} of {entry.canonical_name!r} has no word characters")
                slot = self._index.setdefault(words, {})
                other = slot.get(entry.category)
                if other is not None and other is not entry:
                    raise LexiconError(
                        f"surface form {form!r} is claimed by both {other.canonical_name!r} "
                        f"and {entry.canonical_name!r} ({entry.category})"
                    )
                slot[entry.category] = entry
                self.max_span = max(self.max_span, len(words))

        self.completion_rules: Dict[str, CompletionRule] = {}
        for rule in completion_rules:
            self._check_rule(rule)
            self.completion_rules[rule.trigger_core_finding] = rule

    def _check_rule(self, rule):
        where = f"completion rule for {rule.trigger_core_finding!r}"
        if self.get(CORE_FINDING, rule.trigger_core_finding) is None:
            raise LexiconError(f"{where}: unknown core finding {rule.trigger_core_finding!r}")
        if self.get(ANATOMY, rule.default_anatomy) is None:
            raise LexiconError(f"{where}: unknown anatomy {rule.default_anatomy!r}")
        if rule.default_laterality is not None and self.get(LATERALITY, rule.default_laterality) is None:
            raise LexiconError(f"{where}: unknown laterality {rule.default_laterality!r}")

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"Lexicon({len(self.entries)} entries, {len(self.catalog.regions)} regions)"

    def get(self, category: str, canonical_name: str) -> Optional[LexiconEntry]:
        return self._by_name.get((category, canonical_name))

    def by_category(self, category: str) -> List[LexiconEntry]:
        return [e for e in self.entries if e.category == category]

    def lookup(self, tokens: Sequence, start: int) -> Optional[Tuple[LexiconEntry, int]]:
        """Longest surface form matching ``tokens`` at ``start``.

        ``tokens`` may hold plain strings or :class:`~rqscore.text.Token`.
        Comparison is case-insensitive. When one phrase belongs to several
        categories the highest-priority category wins.
        """
        words = [t.text if hasattr(t, "text") else str(t).lower() for t in
                 tokens[start:start + self.max_span]]
        words = [w.lower() for w in words]
        for span in range(len(words), 0, -1):
            slot = self._index.get(tuple(words[:span]))
            if slot:
                category = min(slot, key=_PRIORITY.__getitem__)
                return slot[category], span
        return None


def lookup(lexicon: Lexicon, tokens: Sequence, start: int) -> Optional[Tuple[LexiconEntry, int]]:
    return lexicon.lookup(tokens, start)


def _check_entry(entry):
    if entry.category not in _PRIORITY:
        raise LexiconError(f"entry {entry.canonical_name!r} has unknown category {entry.category!r}")
    if not entry.canonical_name.strip():
        raise LexiconError("entry with empty canonical_name")
    if not entry.surface_forms or any(not f.strip() for f in entry.surface_forms):
        raise LexiconError(f"entry {entry.canonical_name!r} needs non-empty surface forms")
    if (entry.finding_type is not None) != (entry.category == CORE_FINDING):
        raise LexiconError(f"entry {entry.canonical_name!r}: finding_type is required for core findings only")
    if entry.laterality is not None and entry.category != ANATOMY:
        raise LexiconError(f"entry {entry.canonical_name!r}: only anatomy entries carry a laterality")


def _parse(doc) -> Lexicon:
    if not isinstance(doc, dict):
        raise LexiconError("top level must be an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise LexiconError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    raw_entries = doc.get("entries") or []
    if not raw_entries:
        raise LexiconError("no entries")
    try:
        entries = [
            LexiconEntry(
                canonical_name=e["canonical_name"].strip().lower(),
                category=e["category"],
                surface_forms=tuple(f.strip().lower() for f in e["surface_forms"]),
                finding_type=e.get("finding_type"),
                laterality=e.get("laterality"),
            )
            for e in raw_entries
        ]
        rules = [
            CompletionRule(r["trigger_core_finding"], r["default_anatomy"], r.get("default_laterality"))
            for r in doc.get("completion_rules", [])
        ]
        laterality_map = {}
        for m in doc.get("laterality_map", []):
            key = (m["anatomy"], m.get("laterality"))
            if key in laterality_map:
                raise LexiconError(f"duplicate laterality_map entry {key}")
            laterality_map[key] = tuple(m["regions"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise LexiconError(f"malformed lexicon record: {exc!r}") from exc
    regions = tuple(doc.get("regions", []))
    if len(set(regions)) != len(regions):
        raise LexiconError("duplicate region names")
    catalog = RegionCatalog(regions, laterality_map)
    lexicon = Lexicon(entries, rules, catalog)
    for anatomy, _ in laterality_map:
        if lexicon.get(ANATOMY, anatomy) is None:
            raise LexiconError(f"laterality_map references unknown anatomy {anatomy!r}")
    return lexicon


def load_lexicon(path: Union[str, Path, None] = None) -> Lexicon:
    """Load and validate a lexicon file; the bundled fixture lexicon when ``path`` is None.

    Raises:
        FileNotFoundError: ``path`` does not exist.
        LexiconError: parse failure (with line number) or a violated invariant.
    """
    if path is None:
        text = resources.files("rqscore").joinpath("data/lexicon.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        raise LexiconError("no entries")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LexiconError(exc.msg, line=exc.lineno) from exc
    return _parse(doc)


def default_lexicon() -> Lexicon:
    return load_lexicon(None)
