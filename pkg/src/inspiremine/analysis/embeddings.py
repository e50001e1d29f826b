"""Loading pretrained word vectors from plain-text files."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["EmbeddingTable", "load_embeddings"]


@dataclass
class EmbeddingTable:
    dim: int
    entries: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __getitem__(self, word: str) -> np.ndarray:
        return self.entries[word]

    def matrix_for(self, words) -> np.ndarray:
        """Row-stacked vectors for `words` (all must be present)."""
        return np.stack([self.entries[w] for w in words])


def _lines_of(source):
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


def load_embeddings(source, vocab=None) -> EmbeddingTable:
    """Parse `word v1 .. vD` lines; D is fixed by the first line. Keeps
    only `vocab` words when a vocab is given."""
    dim = None
    entries: dict[str, np.ndarray] = {}
    for line_number, raw in enumerate(_lines_of(source), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        word, fields = parts[0], parts[1:]
        if dim is None:
            if not fields:
                raise ValueError(f"line {line_number}: no vector components")
            dim = len(fields)
        elif len(fields) != dim:
            raise ValueError(
                f"line {line_number}: expected {dim} components, got {len(fields)}"
            )
        if vocab is not None and word not in vocab:
            continue
        try:
            vector = np.asarray([float(f) for f in fields], dtype=np.float64)
        except ValueError as exc:
            raise ValueError(f"line {line_number}: non-numeric component") from exc
        if not np.all(np.isfinite(vector)):
            raise ValueError(f"line {line_number}: non-finite component")
        entries[word] = vector
    if dim is None:
        raise ValueError("empty word-vector source")
    return EmbeddingTable(dim=dim, entries=entries)
