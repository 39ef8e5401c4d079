import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from rqscore import FFLPattern, rq_pair
from rqscore.estimators import FFLExtractor, ReportQualityScorer

GT = ["Mild opacity in the left lower lobe. No pneumothorax.", "Moderate cardiomegaly."]
PRED = ["Opacity in the left lower lobe.", "Moderate cardiomegaly."]
IDS = ["img1", "img2"]


class TestExtractor:
    def test_params_and_clone(self):
        est = FFLExtractor(negation_window=4, as_strings=True)
        assert est.get_params() == {"lexicon": None, "negation_window": 4, "as_strings": True}
        twin = clone(est)
        assert twin is not est and twin.get_params() == est.get_params()

    def test_transform(self, lexicon):
        out = FFLExtractor(lexicon=lexicon).fit_transform(GT)
        assert out[1] == [FFLPattern("anatomicalfinding", "present", "cardiomegaly", "cardiac silhouette",
                                     None, "moderate")]
        assert len(out[0]) == 2

    def test_strings_and_arrays(self, lexicon):
        out = FFLExtractor(lexicon=lexicon, as_strings=True).fit_transform(np.array(GT[1:]))
        assert out == [["anatomicalfinding|present|cardiomegaly|cardiac silhouette||moderate"]]

    def test_window_parameter(self, lexicon):
        text = ["No acute change and stable appearance of the opacity."]
        narrow = FFLExtractor(lexicon=lexicon, negation_window=2).fit_transform(text)
        wide = FFLExtractor(lexicon=lexicon, negation_window=10).fit_transform(text)
        assert narrow[0][0].polarity == "present" and wide[0][0].polarity == "absent"

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            FFLExtractor().transform(GT)

    @pytest.mark.parametrize("bad", [0, -1, 2.5])
    def test_bad_window(self, bad):
        with pytest.raises(ValueError):
            FFLExtractor(negation_window=bad).fit()

    def test_single_string_rejected(self, lexicon):
        with pytest.raises(TypeError):
            FFLExtractor(lexicon=lexicon).fit_transform("Mild opacity.")


class TestScorer:
    def test_clone(self, atlas):
        est = ReportQualityScorer(atlas=atlas, level="all")
        assert clone(est).get_params()["level"] == "all"

    def test_matches_functional_api(self, lexicon, atlas):
        est = ReportQualityScorer(atlas=atlas, lexicon=lexicon).fit()
        values = est.rq_values(PRED, GT, IDS)
        expected = [rq_pair(g, p, i, lexicon, atlas).rq for g, p, i in zip(GT, PRED, IDS)]
        assert values.tolist() == expected
        assert est.score(PRED, GT, image_ids=IDS) == pytest.approx(np.mean(expected), abs=1e-12)

    def test_atlas_path(self, tmp_path, atlas, lexicon):
        path = tmp_path / "atlas.json"
        atlas.dump(path)
        est = ReportQualityScorer(atlas=str(path), lexicon=lexicon).fit()
        assert est.score(GT, GT, image_ids=IDS) == 1.0

    def test_requires_atlas(self):
        with pytest.raises(ValueError):
            ReportQualityScorer().fit()

    def test_requires_ids(self, atlas, lexicon):
        est = ReportQualityScorer(atlas=atlas, lexicon=lexicon).fit()
        with pytest.raises(ValueError):
            est.score(PRED, GT)

    def test_inconsistent_lengths(self, atlas, lexicon):
        est = ReportQualityScorer(atlas=atlas, lexicon=lexicon).fit()
        with pytest.raises(ValueError):
            est.score_pairs(PRED, GT[:1], IDS)

    def test_bad_level(self, atlas):
        with pytest.raises(ValueError):
            ReportQualityScorer(atlas=atlas, level="sentence").fit()

    def test_missing_values_are_empty_reports(self, atlas, lexicon):
        est = ReportQualityScorer(atlas=atlas, lexicon=lexicon).fit()
        (s,) = est.score_pairs([None], ["Normal."], ["img1"])
        assert s.rq == 1.0
