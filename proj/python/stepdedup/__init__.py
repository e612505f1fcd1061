# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 stepdedup contributors
"""Python bindings for the stepdedup duplicate-step detector."""

from stepdedup._core import (  # noqa: F401
    Cluster,
    Feature,
    FeatureFile,
    LabeledPair,
    ParseError,
    Scenario,
    Step,
    StepOccurrence,
    StrategyConfig,
    TfidfModel,
    __version__,
    bootstrap_ci,
    canonicalize,
    cluster_savings,
    cluster_texts,
    cohen_kappa,
    collect_occurrences,
    cosine,
    descriptive_stats,
    detect,
    duplication_rate,
    embed_texts,
    fleiss_kappa,
    kfold_cv,
    levenshtein_ratio,
    load_pairs,
    parse_feature,
    prf,
    savings_from_counts,
    scan_tree,
    score_free_label,
    spearman_rho,
    step_identity,
    subsequence_containment,
    threshold_sweep,
    token_jaccard,
    tokenize,
    whitespace_collapse,
)
