import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inspiremine.analysis.sentiment import (
    HISTOGRAM_BINS,
    NEGATORS,
    emotion_freq_diff,
    polarity_histogram,
    polarity_score,
    read_emotion_csv,
)
from inspiremine import resources

from oracles import polarity_direct

LEXICON = {
    "good": 0.7,
    "bad": -0.7,
    "great": 0.8,
    "awful": -0.9,
    "fine": 0.2,
}


class TestPolarityScore:
    def test_negated_positive_flips_sign(self):
        assert polarity_score("not good", LEXICON) == pytest.approx(-0.7)

    def test_single_word(self):
        assert polarity_score("good", LEXICON) == pytest.approx(0.7)

    def test_mean_over_matches(self):
        assert polarity_score("good but awful", LEXICON) == pytest.approx((0.7 - 0.9) / 2)

    def test_double_negation_cancels(self):
        assert polarity_score("never not good", LEXICON) == pytest.approx(0.7)

    def test_negation_persists_across_unknown_words(self):
        assert polarity_score("not really very good", LEXICON) == pytest.approx(-0.7)

    def test_negation_spent_after_first_match(self):
        # "not good" flips, then "great" is scored unflipped
        assert polarity_score("not good great", LEXICON) == pytest.approx((-0.7 + 0.8) / 2)

    def test_no_matches_scores_zero(self):
        assert polarity_score("completely unrelated words", LEXICON) == 0.0
        assert polarity_score("", LEXICON) == 0.0

    def test_case_and_punctuation_insensitive(self):
        assert polarity_score("GOOD!!!", LEXICON) == pytest.approx(0.7)

    def test_default_lexicon_used_when_none_given(self):
        assert polarity_score("inspiring") > 0
        assert polarity_score("terrible") < 0

    @given(st.text(alphabet="abcdefg notnevergoodbad ", max_size=60))
    @settings(max_examples=100, deadline=None)
    def test_bounded_and_matches_direct_oracle(self, text):
        score = polarity_score(text, LEXICON)
        assert -1.0 <= score <= 1.0
        assert score == pytest.approx(polarity_direct(text, LEXICON, NEGATORS), abs=1e-12)

    def test_trailing_negator_is_harmless(self):
        assert polarity_score("good not", LEXICON) == pytest.approx(0.7)


class TestPolarityHistogram:
    def test_eight_labeled_bins(self):
        assert len(HISTOGRAM_BINS) == 8
        counts = polarity_histogram([])
        assert list(counts) == list(HISTOGRAM_BINS)
        assert all(v == 0 for v in counts.values())

    def test_boundary_scores_land_left_closed_right_closed(self):
        counts = polarity_histogram([-1.0, -0.75, 0.0, 0.25, 1.0])
        assert counts["[-1.00,-0.75]"] == 2
        assert counts["(-0.25,0.00]"] == 1
        assert counts["(0.00,0.25]"] == 1
        assert counts["(0.75,1.00]"] == 1

    def test_interior_scores(self):
        counts = polarity_histogram([0.1, 0.2, 0.6, -0.3])
        assert counts["(0.00,0.25]"] == 2
        assert counts["(0.50,0.75]"] == 1
        assert counts["(-0.50,-0.25]"] == 1

    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False), max_size=50))
    @settings(max_examples=100, deadline=None)
    def test_counts_sum_to_input_size(self, scores):
        counts = polarity_histogram(scores)
        assert sum(counts.values()) == len(scores)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            polarity_histogram([1.5])
        with pytest.raises(ValueError):
            polarity_histogram([-1.0001])


class TestEmotionFreqDiff:
    TAXONOMY = ("joy", "sadness", "anger")

    def test_hand_computed_difference(self):
        inspiring = {"p1": ["joy", "joy"], "p2": ["sadness"]}
        other = {"p3": ["anger"], "p4": ["anger", "joy"]}
        diff = emotion_freq_diff(inspiring, other, self.TAXONOMY)
        assert diff["joy"] == pytest.approx(2 / 3 - 1 / 3)
        assert diff["sadness"] == pytest.approx(1 / 3)
        assert diff["anger"] == pytest.approx(-2 / 3)

    def test_values_sum_to_zero_when_both_sides_nonempty(self):
        inspiring = {"p1": ["joy"], "p2": ["sadness", "joy"]}
        other = {"p3": ["anger", "sadness"]}
        diff = emotion_freq_diff(inspiring, other, self.TAXONOMY)
        assert sum(diff.values()) == pytest.approx(0.0, abs=1e-12)

    def test_empty_side_contributes_zero_frequencies(self):
        diff = emotion_freq_diff({}, {"p": ["joy"]}, self.TAXONOMY)
        assert diff["joy"] == pytest.approx(-1.0)
        assert diff["sadness"] == 0.0

    def test_label_outside_taxonomy_rejected(self):
        with pytest.raises(ValueError):
            emotion_freq_diff({"p": ["confusion"]}, {}, self.TAXONOMY)

    def test_default_taxonomy_loads_from_resources(self):
        labels = resources.load_emotion_labels()
        assert len(labels) >= 5
        diff = emotion_freq_diff({"p": [labels[0]]}, {}, None)
        assert diff[labels[0]] == pytest.approx(1.0)


class TestReadEmotionCsv:
    def test_groups_rows_by_post(self):
        source = io.StringIO("post_id,emotion\np1,joy\np1,awe\np2,sadness\n")
        assert read_emotion_csv(source) == {"p1": ["joy", "awe"], "p2": ["sadness"]}

    def test_header_required(self):
        with pytest.raises(ValueError):
            read_emotion_csv(io.StringIO("id,emotion\np1,joy\n"))

    def test_malformed_row_rejected(self):
        with pytest.raises(ValueError):
            read_emotion_csv(io.StringIO("post_id,emotion\np1,joy,extra\n"))

    def test_file_path_accepted(self, tmp_path):
        path = tmp_path / "emotions.csv"
        path.write_text("post_id,emotion\np9,optimism\n")
        assert read_emotion_csv(path) == {"p9": ["optimism"]}
