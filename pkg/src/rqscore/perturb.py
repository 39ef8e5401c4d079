"""Factual-error injection on FFL patterns and metric sensitivity measurement."""
import dataclasses
import math
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .baselines import bleu
from .exceptions import PerturbationError
from .extract import ABSENT, DEFAULT_NEGATION_WINDOW, PRESENT, FFLPattern, extract_ffl, render_report
from .grounding import RegionAtlas
from .lexical import Granularity
from .lexicon import ANATOMY, BILATERAL, CORE_FINDING, LEFT, RIGHT, Lexicon
from .rq import rq_pair

NEGATION_FLIP = "negation_flip"
FINDING_SUBSTITUTION = "finding_substitution"
LOCATION_ALTERATION = "location_alteration"
SEVERITY_ALTERATION = "severity_alteration"
KINDS = (NEGATION_FLIP, FINDING_SUBSTITUTION, LOCATION_ALTERATION, SEVERITY_ALTERATION)

METRICS = ("rq", "f1", "miou", "bleu")

_NEXT_SEVERITY = {"mild": "moderate", "moderate": "severe", "severe": "mild"}
_INSERTED_SEVERITY = "moderate"


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str
    count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown perturbation kind {self.kind!r}; expected one of {KINDS}")
        if self.count < 1:
            raise ValueError("count must be at least 1")


@dataclass
class SensitivityResult:
    kind: str
    baseline_score: Dict[str, float]
    perturbed_score: Dict[str, float]
    delta: Dict[str, float]
    n_scored: int = 0
    n_skipped: int = 0


def _eligible(patterns, kind):
    if kind == SEVERITY_ALTERATION:
        return [i for i, p in enumerate(patterns) if p.polarity == PRESENT]
    return list(range(len(patterns)))


def _flip(p, rng, lexicon):
    if p.polarity == PRESENT:
        return dataclasses.replace(p, polarity=ABSENT, severity=None)
    return dataclasses.replace(p, polarity=PRESENT)


def _substitute(p, rng, lexicon):
    choices = [e for e in lexicon.by_category(CORE_FINDING) if e.canonical_name != p.core_finding]
    if not choices:
        raise PerturbationError("finding substitution needs at least two core findings")
    new = rng.choice(choices)
    return dataclasses.replace(p, core_finding=new.canonical_name, finding_type=new.finding_type)


def _relocate(p, rng, lexicon):
    catalog = lexicon.catalog
    choices = [a for a in catalog.anatomies if a != p.anatomy]
    if not choices:
        raise PerturbationError("location alteration needs at least two resolvable anatomies")
    anatomy = rng.choice(choices)
    intrinsic = lexicon.get(ANATOMY, anatomy).laterality
    if intrinsic:
        laterality = intrinsic
    elif catalog.is_lateralized(anatomy) and p.laterality in (LEFT, RIGHT, BILATERAL):
        laterality = p.laterality
    else:
        laterality = None
    return dataclasses.replace(p, anatomy=anatomy, laterality=laterality)


def _reseverity(p, rng, lexicon):
    return dataclasses.replace(p, severity=_NEXT_SEVERITY.get(p.severity, _INSERTED_SEVERITY))


_APPLY = {
    NEGATION_FLIP: _flip,
    FINDING_SUBSTITUTION: _substitute,
    LOCATION_ALTERATION: _relocate,
    SEVERITY_ALTERATION: _reseverity,
}


def perturb_report(gt_patterns: Sequence[FFLPattern], spec: PerturbationSpec, lexicon: Lexicon,
                   rng: Optional[random.Random] = None) -> Tuple[List[FFLPattern], str]:
    """Inject ``spec.count`` errors of one kind and render the result as text.

    Patterns to alter are sampled uniformly among the eligible ones (severity
    alterations only touch present findings). Each output pattern is rendered
    as one templated sentence.

    Raises:
        PerturbationError: empty input, no eligible pattern, or too few
            eligible patterns for ``spec.count``.
    """
    if not gt_patterns:
        raise PerturbationError("cannot perturb an empty pattern list")
    if spec.count > len(gt_patterns):
        raise PerturbationError(f"count {spec.count} exceeds the {len(gt_patterns)} available patterns")
    eligible = _eligible(gt_patterns, spec.kind)
    if not eligible:
        raise PerturbationError("no eligible pattern")
    if spec.count > len(eligible):
        raise PerturbationError(f"only {len(eligible)} eligible patterns for count {spec.count}")
    rng = rng if rng is not None else random.Random(spec.seed)
    chosen = sorted(rng.sample(eligible, spec.count))
    out = list(gt_patterns)
    for i in chosen:
        out[i] = _APPLY[spec.kind](out[i], rng, lexicon)
    return out, render_report(out, lexicon)


def variant_seed(seed: int, report_index: int, variant: int = 0) -> int:
    """Independent per-report seed, so generation order does not matter."""
    return int(np.random.SeedSequence([seed, report_index, variant]).generate_state(1)[0])


def _metrics(gt_text, pred_text, image_id, lexicon, atlas, level, window):
    score = rq_pair(gt_text, pred_text, image_id, lexicon, atlas, level, window)
    return {
        "rq": score.rq,
        "f1": score.f1(level),
        "miou": score.miou,
        "bleu": bleu(pred_text, [gt_text]).score,
    }


def sensitivity_study(corpus: Sequence[Tuple[str, str]], specs: Sequence[PerturbationSpec], lexicon: Lexicon,
                      atlas: RegionAtlas, n_variants: int = 1, level=Granularity.ALL,
                      negation_window: int = DEFAULT_NEGATION_WINDOW,
                      on_variant=None) -> List[SensitivityResult]:
    """Mean score drop of every metric when each kind of error is injected.

    ``corpus`` holds ``(ground_truth_text, image_id)`` pairs. Each ground
    truth is reduced to its patterns and re-rendered, so the unperturbed and
    perturbed texts share one template and BLEU only sees the injected error.
    ``level`` selects the F1 entering RQ; the full pattern is the default
    because severity errors are invisible at coarser levels.

    ``on_variant(kind, report_index, variant, image_id, text)`` is called for
    every generated variant.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    if n_variants < 1:
        raise ValueError("n_variants must be at least 1")
    level = Granularity(level)

    prepared = []
    for gt_text, image_id in corpus:
        patterns = extract_ffl(gt_text, lexicon, negation_window)
        rendered = render_report(patterns, lexicon)
        prepared.append((patterns, rendered, image_id))

    results = []
    for spec in specs:
        base, pert = {m: [] for m in METRICS}, {m: [] for m in METRICS}
        skipped = 0
        for r, (patterns, rendered, image_id) in enumerate(prepared):
            if not patterns:
                skipped += n_variants
                continue
            reference = _metrics(rendered, rendered, image_id, lexicon, atlas, level, negation_window)
            for v in range(n_variants):
                variant = dataclasses.replace(spec, seed=variant_seed(spec.seed, r, v))
                try:
                    _, text = perturb_report(patterns, variant, lexicon)
                except PerturbationError:
                    skipped += 1
                    continue
                if on_variant is not None:
                    on_variant(spec.kind, r, v, image_id, text)
                scored = _metrics(rendered, text, image_id, lexicon, atlas, level, negation_window)
                for m in METRICS:
                    base[m].append(reference[m])
                    pert[m].append(scored[m])
        n = len(pert["rq"])
        baseline = {m: math.fsum(base[m]) / n if n else math.nan for m in METRICS}
        perturbed = {m: math.fsum(pert[m]) / n if n else math.nan for m in METRICS}
        delta = {m: baseline[m] - perturbed[m] for m in METRICS}
        results.append(SensitivityResult(spec.kind, baseline, perturbed, delta, n, skipped))
    return results
