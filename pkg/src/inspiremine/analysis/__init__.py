"""Corpus analyses: keyword statistics, embedding clustering, 2-D
projection, polarity, emotion comparisons, and report assembly."""

from .clustering import ClusterResult, ElbowResult, kmeans, select_k_elbow
from .embeddings import EmbeddingTable, load_embeddings
from .keywords import distinctive_terms, ranked_terms, tfidf_scores, top_ngrams
from .report import AnalysisReport, build_report
from .sentiment import (
    HISTOGRAM_BINS,
    NEGATORS,
    emotion_freq_diff,
    polarity_histogram,
    polarity_score,
    read_emotion_csv,
)
from .svg import bar_chart, scatter_plot
from .tsne import tsne_2d

__all__ = [
    "ClusterResult",
    "ElbowResult",
    "kmeans",
    "select_k_elbow",
    "EmbeddingTable",
    "load_embeddings",
    "distinctive_terms",
    "ranked_terms",
    "tfidf_scores",
    "top_ngrams",
    "AnalysisReport",
    "build_report",
    "HISTOGRAM_BINS",
    "NEGATORS",
    "emotion_freq_diff",
    "polarity_histogram",
    "polarity_score",
    "read_emotion_csv",
    "bar_chart",
    "scatter_plot",
    "tsne_2d",
]
