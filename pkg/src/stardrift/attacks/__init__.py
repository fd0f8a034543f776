"""Automated solvers: brute-force grid heuristics and the ML attack."""

from .heuristics import (
    HEURISTICS,
    HeuristicResult,
    SearchGrid,
    default_grid,
    score_all_sum_dist,
    score_min_distribution,
    score_min_size,
    score_min_sum_dist,
    solve,
    solve_pairwise_both,
    stepped_grid,
    visible_state,
)
from .ml import (
    ClassifierModel,
    ReferenceTiles,
    Tile,
    TrainedModel,
    build_reference_tiles,
    build_training_set,
    extract_tiles,
    feature_vector,
    hamming,
    lambda_grid,
    load_model,
    make_classifier,
    ml_solve,
    sample_tile_corpus,
    save_model,
)

__all__ = [
    "HEURISTICS",
    "HeuristicResult",
    "SearchGrid",
    "default_grid",
    "stepped_grid",
    "score_min_size",
    "score_min_distribution",
    "score_min_sum_dist",
    "score_all_sum_dist",
    "solve",
    "solve_pairwise_both",
    "visible_state",
    "Tile",
    "ReferenceTiles",
    "ClassifierModel",
    "TrainedModel",
    "hamming",
    "extract_tiles",
    "build_reference_tiles",
    "feature_vector",
    "build_training_set",
    "sample_tile_corpus",
    "make_classifier",
    "lambda_grid",
    "ml_solve",
    "save_model",
    "load_model",
]
