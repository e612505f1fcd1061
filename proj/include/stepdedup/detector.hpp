// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stepdedup/embedding.hpp"
#include "stepdedup/identity.hpp"

namespace stepdedup {

enum class Strategy { exact, near_exact, semantic, hybrid };

const char* to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

struct StrategyConfig {
    double cosine_threshold = 0.82;
    double levenshtein_threshold = 0.80;
    double hybrid_band_low = 0.30;
    double hybrid_band_high = 0.95;
    // Strategy confidence factors for the savings model; semantic has
    // no default and is excluded from savings unless one is supplied.
    std::map<Strategy, double> confidence = {
        {Strategy::exact, 1.00},
        {Strategy::near_exact, 0.83},
        {Strategy::hybrid, 0.57},
    };
    // detect() refuses all-pairs candidate generation for
    // semantic/hybrid beyond this many unique texts unless allow_large.
    std::size_t max_unique_all_pairs = 50000;
    bool allow_large = false;
};

/// A strategy-tagged equivalence class of occurrences. members are
/// indices into the occurrence table passed to detect().
struct Cluster {
    Strategy strategy = Strategy::exact;
    std::vector<std::size_t> members;
    std::string canonical_text;
    std::size_t occurrence_count = 0;
    std::size_t distinct_files = 0;
    std::size_t distinct_repos = 0;
};

/// Pairwise decision on two whitespace-collapsed texts.
/// exact: equal digests. near_exact: Levenshtein ratio >= threshold.
/// semantic: cosine >= threshold. hybrid: cosine >= threshold AND
/// ratio inside the band, with identical texts always matching (exact
/// pairs are always in).
bool match_pair(Strategy strategy, std::string_view a, std::string_view b,
                const StrategyConfig& config, EmbeddingProvider* provider = nullptr);

/// Cluster the occurrence table under one strategy. Occurrences are
/// bucketed by identity digest first; the pairwise phase runs over one
/// representative per digest and the transitive closure is taken with
/// union-find. Output order is deterministic: descending
/// occurrence_count, then canonical_text.
std::vector<Cluster> detect(const std::vector<StepOccurrence>& occurrences, Strategy strategy,
                            const StrategyConfig& config, EmbeddingProvider* provider = nullptr);

/// Fraction of steps that are non-first duplicates:
/// sum over clusters of (occurrence_count - 1), divided by total_steps.
double duplication_rate(const std::vector<Cluster>& clusters, std::size_t total_steps);

struct PerRepoRates {
    std::map<std::string, double> rates;
    std::map<std::string, std::size_t> steps;
    double median = 0.0;
    std::optional<double> spearman_vs_size;  // absent when undefined (n < 2 or ties-only)
};

/// Re-runs detection inside each repository and reports the
/// per-repository duplication rate, the median rate, and Spearman's
/// rho of rate against repository step count.
PerRepoRates per_repo_rates(const std::vector<StepOccurrence>& occurrences, Strategy strategy,
                            const StrategyConfig& config, EmbeddingProvider* provider = nullptr);

}  // namespace stepdedup
