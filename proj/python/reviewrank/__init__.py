"""Recommend code reviewers from the libraries and technologies a change uses.

The heavy lifting happens in the compiled ``_core`` module; ``recommend`` and
``evaluate`` here return parsed JSON documents instead of text.
"""

import json

from . import _core
from ._core import (
    HistoryError,
    MetricError,
    RepositoryError,
    RequestError,
    StatsError,
    ValidationError,
    canonical_history,
    classify,
    cohens_d,
    cosine_similarity,
    extract_imports,
    fps_similarity,
    glass_delta,
    mann_whitney_u,
    mean_precision,
    mean_recall,
    mean_reciprocal_rank,
    top_k_accuracy,
)


def recommend(repo, history, pr_id=None, files=(), author=None, k=None, window=None, strategy="correct"):
    """Ranked reviewers for a PR in the history, or for new ``files`` by ``author``."""
    text = _core.recommend(repo, history, pr_id=None if pr_id is None else str(pr_id), files=list(files),
                           author=author, k=k, window=window, strategy=strategy)
    return json.loads(text)


def evaluate(repo, history, strategy="correct", k_values=(1, 3, 5), window=None, threads=1):
    """Replay the history with one strategy and return the evaluation report."""
    return json.loads(_core.evaluate(repo, history, strategy=strategy, k_values=list(k_values), window=window,
                                     threads=threads))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
