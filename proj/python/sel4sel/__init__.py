"""Sel4Sel: meta-evolved selection functions for tournament genetic algorithms."""

from ._core import (
    convex_fitness,
    deceptive_fitness,
    evaluate_policy,
    fitness,
    hamming,
    hashed_fitness,
    hiff_fitness,
    load_checkpoint_params,
    mutate,
    network_score,
    novelty,
    pearson,
    random_genome,
    rank_weights,
    run_ga,
    train,
)

__all__ = [
    "convex_fitness",
    "deceptive_fitness",
    "evaluate_policy",
    "fitness",
    "hamming",
    "hashed_fitness",
    "hiff_fitness",
    "load_checkpoint_params",
    "mutate",
    "network_score",
    "novelty",
    "pearson",
    "random_genome",
    "rank_weights",
    "run_ga",
    "train",
]
