import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inspiremine.classifier import TrainConfig, initialize_model
from inspiremine.corpus import Post
from inspiremine.preprocess import (
    Lemmatizer,
    analysis_tokens,
    clean_text,
    default_lemmatizer,
    length_filter,
    preprocess_post,
    profanity_check,
    strip_emoji,
    tokenize_post,
)
from inspiremine.resources import load_specialized_words, load_stopwords


def words(n):
    return " ".join(f"word{i}" for i in range(n))


class TestCleanText:
    def test_drops_urls_and_collapses_spaces(self):
        assert clean_text("see https://x.y  now") == "see now"

    def test_collapses_double_space(self):
        assert clean_text("a  b") == "a b"

    def test_drops_all_url_prefixes(self):
        text = "go http://a.b or https://c.d or www.e.f end"
        assert clean_text(text) == "go or or end"

    def test_trims_and_handles_tabs_newlines(self):
        assert clean_text("  a\t\tb\n\nc  ") == "a b c"

    @given(st.text(max_size=200))
    @settings(max_examples=100)
    def test_idempotent(self, text):
        once = clean_text(text)
        assert clean_text(once) == once


class TestLengthFilter:
    @pytest.mark.parametrize(
        "count,expected", [(9, False), (10, True), (200, True), (201, False)]
    )
    def test_boundaries(self, count, expected):
        assert length_filter(words(count)) is expected

    @given(st.lists(st.sampled_from(["alpha", "beta", "gamma"]), min_size=1, max_size=30))
    @settings(max_examples=60)
    def test_depends_only_on_token_count(self, tokens):
        forward = length_filter(" ".join(tokens))
        backward = length_filter(" ".join(reversed(tokens)))
        assert forward == backward

    def test_custom_bounds(self):
        assert length_filter(words(3), minimum=3, maximum=4)
        assert not length_filter(words(5), minimum=3, maximum=4)


class TestProfanityCheck:
    def test_lexicon_term_flags(self):
        assert profanity_check("what an asshole move", {"asshole"}) is True

    def test_whole_token_only(self):
        assert profanity_check("the class was great", {"ass"}) is False
        assert profanity_check("kick his ass", {"ass"}) is True

    def test_case_insensitive(self):
        assert profanity_check("BASTARD!", {"bastard"}) is True

    def test_empty_lexicon_with_unattainable_threshold(self):
        model = initialize_model(
            ("clean", "offensive"), TrainConfig(dim=4, bucket_count=16)
        )
        assert (
            profanity_check("anything at all", set(), model, threshold=1.0) is False
        )

    def test_no_lexicon_no_model_rejected(self):
        with pytest.raises(ValueError):
            profanity_check("text", set())

    def test_bundled_lexicon_used_by_default(self):
        assert profanity_check("that bastard again") is True
        assert profanity_check("a perfectly pleasant sentence") is False


class TestStripEmoji:
    def test_removes_common_emoji(self):
        assert strip_emoji("good \U0001F600 job ✨") == "good  job "

    def test_plain_text_untouched(self):
        assert strip_emoji("plain words only") == "plain words only"


class TestAnalysisTokens:
    def test_specialized_and_stopwords_dropped(self):
        assert analysis_tokens("Subscribe and like this video!!") == ["video"]

    def test_empty_text(self):
        assert analysis_tokens("") == []

    def test_hand_applied_lemma_rules(self):
        assert analysis_tokens("Running runners ran") == ["run", "runner", "run"]

    def test_hashtags_digits_punctuation_dropped(self):
        tokens = analysis_tokens("#hope 2024 wow!!! cats")
        assert tokens == ["wow", "cat"]

    def test_emoji_stripped_before_token_check(self):
        assert analysis_tokens("sunshine\U0001F31E warmth") == ["sunshine", "warmth"]

    @given(
        st.lists(
            st.sampled_from(
                [
                    "Running", "runners", "ran", "stories", "loved", "jumping",
                    "classes", "video", "the", "subscribe", "#tag", "42",
                    "beautiful", "inspired", "hoping",
                ]
            ),
            max_size=12,
        )
    )
    @settings(max_examples=80)
    def test_rerun_is_fixed_point(self, pieces):
        tokens = analysis_tokens(" ".join(pieces))
        assert analysis_tokens(" ".join(tokens)) == tokens

    def test_no_stopwords_or_specialized_in_output(self):
        text = "The following links like comments are subscribed and commented daily"
        tokens = analysis_tokens(text)
        stop = load_stopwords()
        special = load_specialized_words()
        assert not set(tokens) & set(stop)
        assert not set(tokens) & set(special)


class TestLemmatizer:
    @pytest.fixture
    def lemmatizer(self):
        return default_lemmatizer()

    @pytest.mark.parametrize(
        "word,lemma",
        [
            ("running", "run"),
            ("runners", "runner"),
            ("ran", "run"),
            ("classes", "class"),
            ("happiness", "happiness"),
            ("promising", "promise"),
            ("sing", "sing"),
            ("stories", "story"),
            ("inspiring", "inspire"),
            ("inspired", "inspire"),
            ("loved", "love"),
            ("wolves", "wolf"),
            ("bus", "bus"),
            ("series", "series"),
            ("went", "go"),
            ("children", "child"),
        ],
    )
    def test_known_forms(self, lemmatizer, word, lemma):
        assert lemmatizer.lemma(word) == lemma

    def test_output_is_fixed_point(self, lemmatizer):
        probes = [
            "running", "runners", "classes", "stories", "inspiring",
            "jumping", "hoping", "wolves", "uplifting", "sharing",
        ]
        for word in probes:
            once = lemmatizer.lemma(word)
            assert lemmatizer.lemma(once) == once

    def test_custom_rules_first_match_ends_scan(self):
        # The guard on the first matching rule fails (word too short) and
        # ends the scan: the later bare-"s" rule must not fire afterward.
        lem = Lemmatizer(rules=[("ings", ""), ("s", "")], exceptions={})
        assert lem.lemma("kings") == "kings"
        assert lem.lemma("helpings") == "help"
        assert lem.lemma("cats") == "cat"  # only the "s" rule matches


class TestTokenizePost:
    def test_uses_cleaned_full_text(self):
        post = Post(
            id="p1",
            title="Inspiring story",
            body="Watch https://spam.example now friends",
        )
        doc = tokenize_post(post)
        assert doc.post_id == "p1"
        assert "https" not in " ".join(doc.tokens)
        assert "inspire" in doc.tokens or "story" in doc.tokens


class TestPreprocessPost:
    def test_keeps_clean_english_post(self):
        post = Post(
            id="ok",
            body="This is a perfectly ordinary English sentence with enough words inside.",
        )
        result = preprocess_post(post)
        assert result.keep and result.reason == ""

    def test_rejects_short_post(self):
        result = preprocess_post(Post(id="short", body="too few words"))
        assert not result.keep and result.reason == "length"

    def test_rejects_long_post(self):
        sentence = "the quiet garden behind our house needs water every single day"
        body = " ".join([sentence] * 18) + " tomatoes grow well"
        assert len(body.split()) == 201
        result = preprocess_post(Post(id="long", body=body))
        assert not result.keep and result.reason == "length"

    def test_rejects_profane_post(self):
        body = (
            "He called the referee a bastard during the match and everyone "
            "around the stadium heard it clearly."
        )
        result = preprocess_post(Post(id="rude", body=body))
        assert not result.keep and result.reason == "profanity"

    def test_rejects_foreign_language_post(self):
        body = (
            "La vieja estación del pueblo guarda todavía los carteles de "
            "madera pintada y los bancos largos donde esperaban los viajeros."
        )
        result = preprocess_post(Post(id="es", body=body))
        assert not result.keep and result.reason == "language"
