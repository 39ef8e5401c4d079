import random

import pytest
from hypothesis import given, settings, strategies as st

from rqscore import AtlasError, combine, rq_corpus, rq_pair
from rqscore.lexical import LEVELS
from rqscore.rq import aggregate
from rqscore.synthetic import make_corpus

PUBLISHED = [  # reported F1, MIOU and combined score, 3 decimals
    (0.440, 0.487, 0.463),
    (0.391, 0.357, 0.374),
    (0.326, 0.368, 0.347),
]


@pytest.mark.parametrize("f1,m,combined", PUBLISHED[1:])
def test_combine_reproduces_published_rows(f1, m, combined):
    assert round(combine(f1, m), 3) == combined


@pytest.mark.parametrize("f1,m,combined", PUBLISHED)
def test_combine_consistent_with_rounded_inputs(f1, m, combined):
    # the inputs are themselves 3-decimal roundings, so the unrounded mean lies within +-0.0005
    # of combine(f1, m); the published value must be a rounding of some point in that interval
    lo, hi = combine(f1 - 5e-4, m - 5e-4), combine(f1 + 5e-4, m + 5e-4)
    assert lo - 5e-4 <= combined <= hi + 5e-4


def test_combine_value():
    assert combine(0.440, 0.487) == pytest.approx(0.4635, abs=1e-12)


GT = "Mild opacity in the left lower lobe. No pneumothorax. Moderate cardiomegaly."


def test_identical_reports(lexicon, atlas):
    s = rq_pair(GT, GT, "img1", lexicon, atlas)
    assert s.rq == 1 and s.miou == 1
    assert all(s.lexical[lv].f1 == 1 for lv in LEVELS)
    assert s.diagnostics["gt_grounded"] == 3


def test_hand_scored_pair(lexicon, atlas):
    # gt:   opacity|left lower lobe|left|mild, pneumothorax absent|lung|bilateral, cardiomegaly|cardiac silhouette|moderate
    # pred: opacity|left lower lobe|left|severe, pneumothorax absent|lung|bilateral
    pred = "Severe opacity in the left lower lobe. No pneumothorax."
    s = rq_pair(GT, pred, "img1", lexicon, atlas)
    # anatomy level: tp 2, fp 0, fn 1 -> F1 = 4/5 ; all level: tp 1, fp 1, fn 2 -> F1 = 2/5
    assert s.lexical["anatomy"].f1 == pytest.approx(0.8)
    assert s.lexical["all"].f1 == pytest.approx(0.4)
    assert s.precision("anatomy") == 1.0 and s.recall("anatomy") == pytest.approx(2 / 3)
    # both gt/pred opacity and pneumothorax ground to identical boxes: weight 2 over 3 + 2 patterns
    assert s.miou == pytest.approx(0.8)
    assert s.rq == pytest.approx(0.8)


def test_rq_invariant_default_level(lexicon, atlas):
    s = rq_pair(GT, "Opacity in the right lung.", "img1", lexicon, atlas)
    assert s.rq == pytest.approx((s.lexical["anatomy"].f1 + s.miou) / 2, abs=1e-12)


def test_level_selects_f1(lexicon, atlas):
    pred = "Severe opacity in the left lower lobe. No pneumothorax."
    s = rq_pair(GT, pred, "img1", lexicon, atlas, level="all")
    assert s.rq == pytest.approx((0.4 + 0.8) / 2)


def test_both_empty(lexicon, atlas):
    s = rq_pair("Lungs are clear.", "Normal study.", "img1", lexicon, atlas)
    assert (s.f1(), s.miou, s.rq) == (1.0, 1.0, 1.0)


def test_one_empty(lexicon, atlas):
    s = rq_pair(GT, "Normal study.", "img1", lexicon, atlas)
    assert (s.f1(), s.miou, s.rq) == (0.0, 0.0, 0.0)
    s = rq_pair("Normal study.", GT, "img1", lexicon, atlas)
    assert (s.f1(), s.miou, s.rq) == (0.0, 0.0, 0.0)


def test_missing_image(lexicon, atlas):
    with pytest.raises(AtlasError):
        rq_pair(GT, GT, "nope", lexicon, atlas)


class TestCorpus:
    def test_empty(self, lexicon, atlas):
        with pytest.raises(ValueError):
            rq_corpus([], lexicon, atlas)

    def test_single_pair(self, lexicon, atlas):
        pred = "Opacity in the left lung."
        c = rq_corpus([(GT, pred, "img1")], lexicon, atlas)
        s = rq_pair(GT, pred, "img1", lexicon, atlas)
        assert c.n_pairs == 1 and c.rq == s.rq and c.miou == s.miou
        assert c.f1["all"] == s.lexical["all"].f1

    def test_mean(self, lexicon, atlas):
        pairs = [(GT, GT, "img1"), (GT, "Normal.", "img2")]
        c = rq_corpus(pairs, lexicon, atlas)
        assert c.rq == 0.5 and c.n_pairs == 2

    def test_permutation_invariant(self, lexicon):
        from rqscore.synthetic import make_atlas

        records = make_corpus(lexicon, 12, seed=3, with_predictions=True)
        atlas = make_atlas([r.image_id for r in records], seed=3)
        pairs = [(r.ground_truth, r.prediction, r.image_id) for r in records]
        forward = rq_corpus(pairs, lexicon, atlas)
        shuffled = list(pairs)
        random.Random(0).shuffle(shuffled)
        assert rq_corpus(shuffled, lexicon, atlas) == forward

    def test_aggregate_empty(self):
        with pytest.raises(ValueError):
            aggregate([])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_rq_bounds_and_symmetry(lexicon, seed):
    from rqscore.synthetic import make_atlas

    (record,) = make_corpus(lexicon, 1, seed=seed, with_predictions=True, prefix=f"s{seed}_")
    atlas = make_atlas([record.image_id], seed=seed)
    a = rq_pair(record.ground_truth, record.prediction, record.image_id, lexicon, atlas)
    b = rq_pair(record.prediction, record.ground_truth, record.image_id, lexicon, atlas)
    for s in (a, b):
        assert 0 <= s.rq <= 1 and 0 <= s.miou <= 1
    assert a.miou == pytest.approx(b.miou, abs=1e-12)
    assert a.f1() == b.f1()
    assert (a.rq == 1) == (a.f1() == 1 and a.miou == 1)
