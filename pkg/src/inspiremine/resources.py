"""Loaders for the data files bundled with the package."""

from __future__ import annotations

from importlib import resources


def _read_text(*parts: str) -> str:
    node = resources.files(__package__).joinpath("data")
    for part in parts:
        node = node.joinpath(part)
    return node.read_text(encoding="utf-8")


def _read_lines(*parts: str) -> list[str]:
    lines = []
    for raw in _read_text(*parts).splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def load_stopwords() -> frozenset[str]:
    return frozenset(_read_lines("stopwords.txt"))


def load_specialized_words() -> frozenset[str]:
    return frozenset(_read_lines("specialized.txt"))


def load_profanity_terms() -> frozenset[str]:
    return frozenset(_read_lines("profanity.txt"))


def load_emotion_labels() -> tuple[str, ...]:
    return tuple(_read_lines("emotions.txt"))


def load_lemma_rules() -> list[tuple[str, str]]:
    """Ordered suffix rules. A line is `suffix<TAB>replacement`; a missing
    replacement column means the suffix is deleted."""
    rules = []
    for raw in _read_text("lemma_rules.tsv").splitlines():
        if not raw.strip():
            continue
        parts = raw.split("\t")
        suffix = parts[0].strip()
        replacement = parts[1].strip() if len(parts) > 1 else ""
        if suffix:
            rules.append((suffix, replacement))
    return rules


def load_lemma_exceptions() -> dict[str, str]:
    exceptions = {}
    for line in _read_lines("lemma_exceptions.tsv"):
        parts = line.split("\t")
        if len(parts) == 2:
            exceptions[parts[0].strip()] = parts[1].strip()
    return exceptions


def load_polarity_lexicon() -> dict[str, float]:
    lexicon = {}
    for line in _read_lines("polarity_lexicon.tsv"):
        parts = line.split("\t")
        if len(parts) == 2:
            lexicon[parts[0].strip()] = float(parts[1])
    return lexicon


def load_language_seed_texts() -> dict[str, str]:
    """Language code -> sample text, from data/lang/<code>.txt."""
    lang_dir = resources.files(__package__).joinpath("data").joinpath("lang")
    seeds = {}
    for entry in lang_dir.iterdir():
        name = entry.name
        if name.endswith(".txt"):
            seeds[name[:-4]] = entry.read_text(encoding="utf-8")
    return dict(sorted(seeds.items()))
