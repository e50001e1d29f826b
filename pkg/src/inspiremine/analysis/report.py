"""Report assembly: CSV tables, SVG plots, and a hashed file manifest."""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field

from .svg import bar_chart, scatter_plot

__all__ = ["AnalysisReport", "build_report"]

MANIFEST_NAME = "manifest.json"
REPORT_FORMAT = "inspiremine-report"
REPORT_FORMAT_VERSION = 1


@dataclass
class AnalysisReport:
    out_dir: str
    files: list[str] = field(default_factory=list)
    manifest_path: str = ""


def _sha256_of(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow(list(row))


def _num(value) -> str:
    return repr(float(value))


def build_report(
    out_dir,
    *,
    tfidf_top=None,
    distinctive=None,
    bigrams=None,
    trigrams=None,
    hashtags=None,
    cluster_items=None,
    cluster_result=None,
    coords_2d=None,
    elbow=None,
    polarity_histogram=None,
    emotion_deltas=None,
    metadata=None,
) -> AnalysisReport:
    """Write whichever analysis outputs are provided plus a manifest with
    a sha256 per file. Same inputs produce byte-identical directories."""
    out_dir = os.fspath(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    files: list[str] = []

    def path_of(name: str) -> str:
        files.append(name)
        return os.path.join(out_dir, name)

    if tfidf_top is not None:
        _write_csv(
            path_of("tfidf_top.csv"),
            ["term", "score"],
            ((term, _num(score)) for term, score in tfidf_top),
        )
    if distinctive is not None:
        _write_csv(
            path_of("distinctive_terms.csv"),
            ["term", "score"],
            ((term, _num(score)) for term, score in distinctive),
        )
    if bigrams is not None:
        _write_csv(path_of("bigrams.csv"), ["ngram", "count"], bigrams)
    if trigrams is not None:
        _write_csv(path_of("trigrams.csv"), ["ngram", "count"], trigrams)
    if hashtags is not None:
        _write_csv(path_of("hashtags.csv"), ["hashtag", "count"], hashtags)

    if cluster_result is not None and coords_2d is not None:
        items = (
            list(cluster_items)
            if cluster_items is not None
            else [str(i) for i in range(len(coords_2d))]
        )
        assignments = [int(a) for a in cluster_result.assignments]
        rows = [
            (items[i], assignments[i], _num(coords_2d[i][0]), _num(coords_2d[i][1]))
            for i in range(len(items))
        ]
        _write_csv(path_of("clusters.csv"), ["item", "cluster", "x", "y"], rows)
        svg = scatter_plot(
            coords_2d,
            assignments,
            point_labels=items,
            title=f"{cluster_result.k} clusters",
        )
        with open(path_of("clusters.svg"), "w", encoding="utf-8") as handle:
            handle.write(svg)

    if elbow is not None:
        _write_csv(
            path_of("inertia_curve.csv"),
            ["k", "inertia"],
            ((k, _num(v)) for k, v in zip(elbow.ks, elbow.inertias)),
        )

    if polarity_histogram is not None:
        bins = list(polarity_histogram.items())
        _write_csv(path_of("polarity_histogram.csv"), ["bin", "count"], bins)
        svg = bar_chart(
            [b for b, _ in bins],
            [c for _, c in bins],
            title="Polarity score distribution",
        )
        with open(path_of("polarity_histogram.svg"), "w", encoding="utf-8") as handle:
            handle.write(svg)

    if emotion_deltas is not None:
        ordered = sorted(emotion_deltas.items(), key=lambda item: (-item[1], item[0]))
        _write_csv(
            path_of("emotion_deltas.csv"),
            ["emotion", "delta"],
            ((e, _num(d)) for e, d in ordered),
        )
        svg = bar_chart(
            [e for e, _ in ordered],
            [d for _, d in ordered],
            title="Emotion frequency difference",
        )
        with open(path_of("emotion_deltas.svg"), "w", encoding="utf-8") as handle:
            handle.write(svg)

    if metadata is not None:
        with open(path_of("metadata.json"), "w", encoding="utf-8") as handle:
            json.dump(metadata, handle, indent=2, sort_keys=True)
            handle.write("\n")

    manifest = {
        "format": REPORT_FORMAT,
        "version": REPORT_FORMAT_VERSION,
        "files": [
            {"name": name, "sha256": _sha256_of(os.path.join(out_dir, name))}
            for name in sorted(files)
        ],
    }
    manifest_path = os.path.join(out_dir, MANIFEST_NAME)
    with open(manifest_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")

    return AnalysisReport(out_dir=out_dir, files=sorted(files), manifest_path=manifest_path)
