// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stepdedup/detector.hpp"

namespace stepdedup {

/// Consolidatable occurrences of one cluster: one canonical occurrence
/// is kept, the remainder scaled by the strategy confidence.
double cluster_savings(std::size_t occurrence_count, double confidence);

/// Corpus-level aggregates derivable from cluster summary counts
/// alone: sum over clusters of (occ - 1) equals covered occurrences
/// minus cluster count.
struct SavingsAggregate {
    double aggregate_exact = 0.0;
    double hybrid_surplus = 0.0;      // hybrid sum(occ-1) minus aggregate_exact
    double aggregate_combined = 0.0;  // exact + surplus * conf(hybrid)
    std::vector<std::pair<double, double>> sensitivity;  // conf -> aggregate, 0.0..1.0 step 0.1
};

SavingsAggregate aggregate_from_counts(std::size_t exact_occurrences, std::size_t exact_clusters,
                                       std::size_t hybrid_occurrences, std::size_t hybrid_clusters,
                                       double hybrid_confidence);

struct RepoSavings {
    std::size_t steps = 0;
    double exact_eliminable = 0.0;  // repo-local exact clusters at confidence 1.00
    double eliminable = 0.0;        // combined model (exact + hybrid surplus at conf)
    double rate = 0.0;              // eliminable / steps
};

struct TierRow {
    std::string tier;  // small, medium, large, enterprise
    std::size_t repo_count = 0;
    std::size_t tier_steps = 0;
    double tier_eliminable = 0.0;
};

struct IsoTag {
    const char* characteristic;
    const char* sub_characteristic;
    const char* report_section;
    const char* note;
};

/// Fixed ISO/IEC 25010 annotations attached to savings reports: which
/// report sections speak to which quality sub-characteristics.
std::span<const IsoTag> iso25010_tags();

struct SavingsReport {
    std::map<std::string, RepoSavings> per_repo;
    double aggregate_exact = 0.0;
    double hybrid_surplus = 0.0;
    double aggregate_combined = 0.0;
    double hybrid_confidence = 0.0;
    std::vector<std::pair<double, double>> sensitivity;
    std::vector<TierRow> tiers;
    std::string per_repo_attribution;  // "repo-local" or "proportional"
};

/// Build the full report from exact and hybrid clusters computed over
/// the same occurrence table. Per-repository eliminable counts use
/// repo-local clusters unless cross_repo_attribution, which switches
/// to a proportional split of the global clusters. Tier rows always
/// use the proportional split so that their sum reproduces the global
/// exact aggregate.
SavingsReport aggregate_savings(const std::vector<Cluster>& exact_clusters,
                                const std::vector<Cluster>& hybrid_clusters,
                                const std::vector<StepOccurrence>& occurrences,
                                const StrategyConfig& config,
                                bool cross_repo_attribution = false,
                                EmbeddingProvider* provider = nullptr);

/// Group per-repository stats into the four size tiers
/// (<1k, 1k-10k, 10k-100k, >=100k steps), rows in tier order.
std::vector<TierRow> tier_breakdown(const std::map<std::string, RepoSavings>& per_repo);

}  // namespace stepdedup
