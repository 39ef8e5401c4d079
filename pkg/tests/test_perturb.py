import pytest

from rqscore import FFLPattern, PerturbationError, PerturbationSpec, extract_ffl, perturb_report, sensitivity_study
from rqscore.lexicon import Lexicon, LexiconEntry
from rqscore.perturb import KINDS, variant_seed
from rqscore.synthetic import make_atlas, make_corpus

A = "anatomicalfinding"
OPACITY = FFLPattern(A, "present", "opacity", "lung", "left", "mild")
PNEUMO = FFLPattern(A, "absent", "pneumothorax", "lung", "bilateral")


class TestSpec:
    def test_count_must_be_positive(self):
        with pytest.raises(ValueError):
            PerturbationSpec("negation_flip", count=0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            PerturbationSpec("typo")


class TestPerturbReport:
    def test_negation_flip_clears_severity(self, lexicon):
        (p,), text = perturb_report([OPACITY], PerturbationSpec("negation_flip"), lexicon)
        assert p == FFLPattern(A, "absent", "opacity", "lung", "left", None)
        assert text == "No opacity in the left lung."

    def test_negation_flip_absent_to_present(self, lexicon):
        (p,), _ = perturb_report([PNEUMO], PerturbationSpec("negation_flip"), lexicon)
        assert p.polarity == "present"

    def test_severity_cycles(self, lexicon):
        spec = PerturbationSpec("severity_alteration")
        assert perturb_report([OPACITY], spec, lexicon)[0][0].severity == "moderate"
        severe = FFLPattern(A, "present", "opacity", "lung", "left", "severe")
        assert perturb_report([severe], spec, lexicon)[0][0].severity == "mild"
        bare = FFLPattern(A, "present", "opacity", "lung", "left")
        assert perturb_report([bare], spec, lexicon)[0][0].severity == "moderate"

    def test_severity_skips_absent_findings(self, lexicon):
        out, _ = perturb_report([PNEUMO, OPACITY], PerturbationSpec("severity_alteration"), lexicon)
        assert out[0] == PNEUMO and out[1].severity == "moderate"

    def test_severity_without_eligible_pattern(self, lexicon):
        with pytest.raises(PerturbationError, match="no eligible pattern"):
            perturb_report([PNEUMO], PerturbationSpec("severity_alteration"), lexicon)

    @pytest.mark.parametrize("seed", range(20))
    def test_location_changes_anatomy(self, lexicon, seed):
        (p,), _ = perturb_report([OPACITY], PerturbationSpec("location_alteration", seed=seed), lexicon)
        assert p.anatomy != "lung"
        assert p.anatomy in lexicon.catalog.anatomies
        intrinsic = lexicon.get("anatomy", p.anatomy).laterality
        if intrinsic:
            assert p.laterality == intrinsic

    @pytest.mark.parametrize("seed", range(20))
    def test_substitution_changes_finding(self, lexicon, seed):
        (p,), _ = perturb_report([OPACITY], PerturbationSpec("finding_substitution", seed=seed), lexicon)
        entry = lexicon.get("core_finding", p.core_finding)
        assert p.core_finding != "opacity" and p.finding_type == entry.finding_type

    def test_substitution_needs_two_findings(self):
        lex = Lexicon([LexiconEntry("opacity", "core_finding", ("opacity",), finding_type=A)])
        with pytest.raises(PerturbationError):
            perturb_report([OPACITY], PerturbationSpec("finding_substitution"), lex)

    def test_empty(self, lexicon):
        with pytest.raises(PerturbationError):
            perturb_report([], PerturbationSpec("negation_flip"), lexicon)

    def test_count_too_large(self, lexicon):
        with pytest.raises(PerturbationError):
            perturb_report([OPACITY], PerturbationSpec("negation_flip", count=2), lexicon)

    def test_count_selects_distinct_patterns(self, lexicon):
        out, _ = perturb_report([OPACITY, PNEUMO], PerturbationSpec("negation_flip", count=2), lexicon)
        assert [p.polarity for p in out] == ["absent", "present"]

    def test_seeded(self, lexicon):
        patterns = [OPACITY, PNEUMO, FFLPattern(A, "present", "nodule", "apical zone", "right")]
        spec = PerturbationSpec("location_alteration", count=2, seed=11)
        assert perturb_report(patterns, spec, lexicon) == perturb_report(patterns, spec, lexicon)

    def test_rendered_text_extracts_back(self, lexicon):
        patterns = [OPACITY, PNEUMO]
        for kind in KINDS:
            out, text = perturb_report(patterns, PerturbationSpec(kind, seed=5), lexicon)
            assert extract_ffl(text, lexicon) == out


def test_variant_seed_is_stable():
    assert variant_seed(42, 3, 1) == variant_seed(42, 3, 1)
    assert len({variant_seed(42, r, v) for r in range(20) for v in range(5)}) == 100


@pytest.fixture(scope="module")
def small_corpus(lexicon):
    records = make_corpus(lexicon, 15, seed=9)
    atlas = make_atlas([r.image_id for r in records], seed=9)
    return [(r.ground_truth, r.image_id) for r in records], atlas


class TestSensitivity:
    def test_single_finding_flip(self, lexicon, atlas):
        corpus = [("Mild opacity in the left lung.", "img1")]
        (res,) = sensitivity_study(corpus, [PerturbationSpec("negation_flip")], lexicon, atlas)
        assert res.baseline_score["f1"] == 1
        assert res.delta["f1"] == 1 and res.delta["miou"] == 1 and res.delta["rq"] == 1

    def test_single_finding_flip_every_level(self, lexicon, atlas):
        corpus = [("Mild opacity in the left lung.", "img1")]
        for level in ("core", "anatomy", "all"):
            (res,) = sensitivity_study(corpus, [PerturbationSpec("negation_flip")], lexicon, atlas, level=level)
            assert res.delta["f1"] == 1

    def test_reproducible(self, lexicon, small_corpus):
        corpus, atlas = small_corpus
        specs = [PerturbationSpec(k, seed=4) for k in KINDS]
        texts_a, texts_b = [], []
        a = sensitivity_study(corpus, specs, lexicon, atlas, 2, on_variant=lambda *v: texts_a.append(v))
        b = sensitivity_study(corpus, specs, lexicon, atlas, 2, on_variant=lambda *v: texts_b.append(v))
        assert a == b and texts_a == texts_b

    def test_deltas_non_negative_and_ordered(self, lexicon, small_corpus):
        corpus, atlas = small_corpus
        results = sensitivity_study(corpus, [PerturbationSpec(k, seed=1) for k in KINDS], lexicon, atlas, 4)
        by_kind = {r.kind: r for r in results}
        for r in results:
            assert all(r.baseline_score[m] == 1 for m in r.baseline_score)
            assert all(d >= 0 for d in r.delta.values())
        assert (by_kind["negation_flip"].delta["rq"] >= by_kind["location_alteration"].delta["rq"]
                >= by_kind["severity_alteration"].delta["rq"] > 0)

    def test_empty_corpus(self, lexicon, atlas):
        with pytest.raises(ValueError):
            sensitivity_study([], [PerturbationSpec("negation_flip")], lexicon, atlas)

    def test_reports_without_findings_are_skipped(self, lexicon, atlas):
        (res,) = sensitivity_study([("Normal.", "img1")], [PerturbationSpec("negation_flip")], lexicon, atlas, 3)
        assert res.n_scored == 0 and res.n_skipped == 3
