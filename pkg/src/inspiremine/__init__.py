"""inspiremine: mining and analyzing inspiring social-media posts.

Pipeline modules: corpus storage and splits, heuristic weak labeling,
text preprocessing and language routing, annotation collection with
agreement statistics, a from-scratch linear text classifier, corpus
analyses with report output, an HTTP annotation service, and a CLI
orchestrating all of it.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
