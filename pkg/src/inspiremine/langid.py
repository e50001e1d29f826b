"""Language identification from ranked character n-gram profiles.

A profile is the list of a text's most frequent character 1..3-grams in
descending frequency order, capped at a fixed length. Texts are compared
with the rank-order out-of-place distance: for each n-gram of the text
profile, the gap between its rank there and its rank in the reference
profile, with a fixed penalty when the reference lacks the n-gram.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import resources

PROFILE_CAP = 300
MAX_NGRAM = 3


@dataclass(frozen=True)
class LanguageProfile:
    language_code: str
    ranked_ngrams: tuple[str, ...]
    _ranks: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.ranked_ngrams)) != len(self.ranked_ngrams):
            raise ValueError("profile contains duplicate n-grams")
        object.__setattr__(
            self, "_ranks", {g: i for i, g in enumerate(self.ranked_ngrams)}
        )

    def rank(self, ngram: str) -> int | None:
        return self._ranks.get(ngram)

    def __len__(self) -> int:
        return len(self.ranked_ngrams)


def _ngram_counts(text: str, max_n: int = MAX_NGRAM) -> Counter:
    normalized = " ".join(text.lower().split())
    counts: Counter = Counter()
    for n in range(1, max_n + 1):
        for i in range(len(normalized) - n + 1):
            counts[normalized[i : i + n]] += 1
    return counts


def build_profile(
    text: str, language_code: str = "", cap: int = PROFILE_CAP
) -> LanguageProfile:
    """Rank n-grams by frequency (ties broken lexicographically) and keep
    the top `cap`."""
    counts = _ngram_counts(text)
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return LanguageProfile(
        language_code=language_code,
        ranked_ngrams=tuple(g for g, _ in ordered[:cap]),
    )


def out_of_place_distance(
    text_profile: LanguageProfile, reference: LanguageProfile
) -> int:
    penalty = max(len(text_profile), len(reference), 1)
    total = 0
    for pos, ngram in enumerate(text_profile.ranked_ngrams):
        ref_pos = reference.rank(ngram)
        total += penalty if ref_pos is None else abs(pos - ref_pos)
    return total


def detect_language(
    text: str, profiles: list[LanguageProfile], *, cap: int = PROFILE_CAP
) -> tuple[str, float]:
    """Return the closest profile's code and the normalized distance to it,
    a score in [0, 1] where 0 means the profiles rank n-grams identically."""
    if not text or not text.strip():
        raise ValueError("cannot detect language of empty text")
    if not profiles:
        raise ValueError("no language profiles supplied")
    text_profile = build_profile(text, cap=cap)
    best_code = profiles[0].language_code
    best_score = float("inf")
    for reference in profiles:
        penalty = max(len(text_profile), len(reference), 1)
        worst = max(len(text_profile) * penalty, 1)
        score = out_of_place_distance(text_profile, reference) / worst
        if score < best_score:
            best_code = reference.language_code
            best_score = score
    return best_code, best_score


_DEFAULT_PROFILES: list[LanguageProfile] | None = None


def default_profiles() -> list[LanguageProfile]:
    """Profiles built from the bundled seed texts, cached after first load."""
    global _DEFAULT_PROFILES
    if _DEFAULT_PROFILES is None:
        seeds = resources.load_language_seed_texts()
        _DEFAULT_PROFILES = [
            build_profile(text, language_code=code) for code, text in seeds.items()
        ]
    return _DEFAULT_PROFILES
