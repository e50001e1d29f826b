"""Text filtering and normalization for posts.

Two tiers of processing:
  * filtering used when building datasets (language routing, link removal,
    word-count bounds, profanity screen);
  * the heavier token normalization used for content analysis (lowercase,
    strip punctuation/digits/hashtags/emoji, stopword and specialized-word
    removal, suffix-rule lemmatization).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import resources
from .corpus import Post
from .langid import LanguageProfile, build_profile, default_profiles, detect_language

__all__ = [
    "TokenizedDoc",
    "LanguageProfile",
    "build_profile",
    "default_profiles",
    "detect_language",
    "clean_text",
    "length_filter",
    "profanity_check",
    "Lemmatizer",
    "default_lemmatizer",
    "analysis_tokens",
    "tokenize_post",
    "preprocess_post",
    "PreprocessResult",
]

_URL_PREFIXES = ("http://", "https://", "www.")

# Common emoji and pictograph codepoint ranges, inclusive.
_EMOJI_RANGES = (
    (0x1F1E6, 0x1F1FF),  # regional indicator pairs (flags)
    (0x1F300, 0x1F5FF),  # symbols and pictographs
    (0x1F600, 0x1F64F),  # emoticons
    (0x1F680, 0x1F6FF),  # transport and map symbols
    (0x1F900, 0x1F9FF),  # supplemental symbols
    (0x1FA00, 0x1FAFF),  # extended symbols
    (0x2600, 0x26FF),    # miscellaneous symbols
    (0x2700, 0x27BF),    # dingbats
    (0x2B00, 0x2BFF),    # stars and arrows
    (0x231A, 0x231B),    # watch, hourglass
    (0x23E9, 0x23FA),    # media control symbols
    (0xFE00, 0xFE0F),    # variation selectors
    (0x200D, 0x200D),    # zero-width joiner
    (0x20E3, 0x20E3),    # combining keycap
)

_WORD_RE = re.compile(r"[a-z']+")


@dataclass(frozen=True)
class TokenizedDoc:
    post_id: str
    tokens: tuple[str, ...]


def _is_emoji(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


def strip_emoji(text: str) -> str:
    return "".join(ch for ch in text if not _is_emoji(ch))


def clean_text(text: str) -> str:
    """Drop URL tokens and collapse whitespace runs."""
    kept = []
    for token in text.split():
        if token.lower().startswith(_URL_PREFIXES):
            continue
        kept.append(token)
    return " ".join(kept)


def length_filter(text: str, *, minimum: int = 10, maximum: int = 200) -> bool:
    """True iff the whitespace-token count lies in [minimum, maximum]."""
    return minimum <= len(text.split()) <= maximum


def profanity_check(
    text: str,
    lexicon: frozenset[str] | set[str] | None = None,
    model=None,
    *,
    offensive_label: str = "offensive",
    threshold: float = 0.5,
) -> bool:
    """Flag text containing a lexicon term as a whole word, or scored over
    `threshold` for `offensive_label` by the optional classifier model."""
    if lexicon is None and model is None:
        lexicon = default_profanity_terms()
    if not lexicon and model is None:
        raise ValueError("profanity_check needs a lexicon or a model")
    if lexicon:
        terms = {t.lower() for t in lexicon}
        for word in _WORD_RE.findall(text.lower()):
            if word in terms or word.strip("'") in terms:
                return True
    if model is not None:
        from . import classifier

        prediction = classifier.predict(model, [text])[0]
        if prediction.probs.get(offensive_label, 0.0) > threshold:
            return True
    return False


class Lemmatizer:
    """Ordered suffix-rewrite lemmatizer with an exception table.

    Each pass checks the exception table, then scans the rules top to
    bottom; the first rule whose suffix matches ends the scan. Deleting
    rules require at least 3 remaining characters, replacing rules require
    the word to be longer than the suffix; a matched rule whose guard
    fails leaves the word unchanged. Passes repeat until a fixed point
    (identity replacements terminate immediately), capped defensively.
    """

    def __init__(
        self,
        rules: list[tuple[str, str]] | None = None,
        exceptions: dict[str, str] | None = None,
        max_passes: int = 10,
    ):
        self._rules = list(rules) if rules is not None else resources.load_lemma_rules()
        self._exceptions = (
            dict(exceptions) if exceptions is not None else resources.load_lemma_exceptions()
        )
        self._max_passes = max_passes

    def _apply_once(self, word: str) -> str:
        if word in self._exceptions:
            return self._exceptions[word]
        for suffix, replacement in self._rules:
            if not word.endswith(suffix):
                continue
            if replacement:
                if len(word) > len(suffix):
                    return word[: -len(suffix)] + replacement
            elif len(word) >= len(suffix) + 3:
                return word[: -len(suffix)]
            return word
        return word

    def lemma(self, word: str) -> str:
        current = word
        for _ in range(self._max_passes):
            step = self._apply_once(current)
            if step == current:
                return current
            current = step
        return current

    __call__ = lemma


_DEFAULTS: dict[str, object] = {}


def default_stopwords() -> frozenset[str]:
    if "stopwords" not in _DEFAULTS:
        _DEFAULTS["stopwords"] = resources.load_stopwords()
    return _DEFAULTS["stopwords"]


def default_specialized_words() -> frozenset[str]:
    if "specialized" not in _DEFAULTS:
        _DEFAULTS["specialized"] = resources.load_specialized_words()
    return _DEFAULTS["specialized"]


def default_profanity_terms() -> frozenset[str]:
    if "profanity" not in _DEFAULTS:
        _DEFAULTS["profanity"] = resources.load_profanity_terms()
    return _DEFAULTS["profanity"]


def default_lemmatizer() -> Lemmatizer:
    if "lemmatizer" not in _DEFAULTS:
        _DEFAULTS["lemmatizer"] = Lemmatizer()
    return _DEFAULTS["lemmatizer"]


def analysis_tokens(
    text: str,
    stopwords: frozenset[str] | set[str] | None = None,
    specialized: frozenset[str] | set[str] | None = None,
    lemmatizer: Lemmatizer | None = None,
) -> list[str]:
    """Normalize text to analysis tokens; rerunning on the joined output
    returns it unchanged."""
    if stopwords is None:
        stopwords = default_stopwords()
    if specialized is None:
        specialized = default_specialized_words()
    if lemmatizer is None:
        lemmatizer = default_lemmatizer()
    tokens = []
    for raw in strip_emoji(text).split():
        if raw.startswith("#"):
            continue
        word = "".join(ch for ch in raw if ch.isalpha()).lower()
        if not word or word in stopwords or word in specialized:
            continue
        lemma = lemmatizer(word)
        if not lemma or lemma in stopwords or lemma in specialized:
            continue
        tokens.append(lemma)
    return tokens


def tokenize_post(
    post: Post,
    stopwords: frozenset[str] | set[str] | None = None,
    specialized: frozenset[str] | set[str] | None = None,
    lemmatizer: Lemmatizer | None = None,
) -> TokenizedDoc:
    tokens = analysis_tokens(
        clean_text(post.full_text()), stopwords, specialized, lemmatizer
    )
    return TokenizedDoc(post_id=post.id, tokens=tuple(tokens))


@dataclass(frozen=True)
class PreprocessResult:
    post_id: str = ""
    keep: bool = True
    reason: str = ""
    cleaned_text: str = ""


def preprocess_post(
    post: Post,
    *,
    profiles: list[LanguageProfile] | None = None,
    language: str = "en",
    max_language_score: float | None = None,
    profanity_terms: frozenset[str] | set[str] | None = None,
    profanity_model=None,
    minimum_words: int = 10,
    maximum_words: int = 200,
) -> PreprocessResult:
    """Apply the dataset filters to one post. The returned reason names the
    first filter that rejected it: language, length, or profanity."""
    if profiles is None:
        profiles = default_profiles()
    cleaned = clean_text(post.full_text())
    if not cleaned:
        return PreprocessResult(post.id, False, "length", cleaned)
    code, score = detect_language(cleaned, profiles)
    if code != language:
        return PreprocessResult(post.id, False, "language", cleaned)
    if max_language_score is not None and score > max_language_score:
        return PreprocessResult(post.id, False, "language", cleaned)
    if not length_filter(cleaned, minimum=minimum_words, maximum=maximum_words):
        return PreprocessResult(post.id, False, "length", cleaned)
    if profanity_terms is None and profanity_model is None:
        profanity_terms = default_profanity_terms()
    if profanity_check(cleaned, profanity_terms, profanity_model):
        return PreprocessResult(post.id, False, "profanity", cleaned)
    return PreprocessResult(post.id, True, "", cleaned)
