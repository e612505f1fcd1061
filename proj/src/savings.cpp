// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/savings.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace stepdedup {

double cluster_savings(std::size_t occurrence_count, double confidence) {
    if (confidence < 0.0 || confidence > 1.0)
        throw std::invalid_argument("cluster_savings: confidence outside [0,1]");
    if (occurrence_count == 0) return 0.0;
    return static_cast<double>(occurrence_count - 1) * confidence;
}

namespace {

double sum_savings(const std::vector<Cluster>& clusters, double confidence) {
    double total = 0.0;
    for (const auto& c : clusters) total += cluster_savings(c.occurrence_count, confidence);
    return total;
}

std::vector<std::pair<double, double>> sensitivity_sweep(double aggregate_exact, double surplus) {
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i <= 10; ++i) {
        const double conf = static_cast<double>(i) / 10.0;
        out.emplace_back(conf, aggregate_exact + surplus * conf);
    }
    return out;
}

}  // namespace

SavingsAggregate aggregate_from_counts(std::size_t exact_occurrences, std::size_t exact_clusters,
                                       std::size_t hybrid_occurrences, std::size_t hybrid_clusters,
                                       double hybrid_confidence) {
    if (exact_clusters > exact_occurrences || hybrid_clusters > hybrid_occurrences)
        throw std::invalid_argument("aggregate_from_counts: more clusters than occurrences");
    SavingsAggregate out;
    out.aggregate_exact = static_cast<double>(exact_occurrences - exact_clusters);
    const double hybrid_total = static_cast<double>(hybrid_occurrences - hybrid_clusters);
    out.hybrid_surplus = hybrid_total - out.aggregate_exact;
    out.aggregate_combined = out.aggregate_exact + out.hybrid_surplus * hybrid_confidence;
    out.sensitivity = sensitivity_sweep(out.aggregate_exact, out.hybrid_surplus);
    return out;
}

std::span<const IsoTag> iso25010_tags() {
    static constexpr std::array<IsoTag, 6> kTags = {{
        {"Maintainability", "Modifiability", "clusters",
         "a cluster-wide rename is one edit instead of one per occurrence"},
        {"Maintainability", "Modularity", "clusters",
         "high-occurrence clusters are candidates for a shared step library"},
        {"Maintainability", "Reusability", "clusters",
         "cross-repository clusters show phrasing many projects already share"},
        {"Maintainability", "Analyzability", "summary",
         "cluster reports expose suite structure that reading scenario by scenario misses"},
        {"Maintainability", "Testability", "calibration",
         "the labelled-pair benchmark makes detector changes comparable"},
        {"Reliability", "Maturity", "clusters",
         "paraphrase-aware checks catch drift between phrasing variants"},
    }};
    return kTags;
}

namespace {

struct RepoAttribution {
    std::map<std::string, double> exact;
    std::map<std::string, double> hybrid_total;
};

/// Proportional split of global clusters: cluster c contributes
/// (occ(c) - 1) * occ_r(c) / occ(c) to repository r, so shares sum to
/// the global aggregate exactly.
std::map<std::string, double> proportional_split(const std::vector<Cluster>& clusters,
                                                 const std::vector<StepOccurrence>& occurrences) {
    std::map<std::string, double> out;
    for (const auto& c : clusters) {
        if (c.occurrence_count < 2) continue;
        std::map<std::string, std::size_t> per_repo;
        for (std::size_t m : c.members) ++per_repo[occurrences[m].repo_id];
        const double weight = static_cast<double>(c.occurrence_count - 1) /
                              static_cast<double>(c.occurrence_count);
        for (const auto& [repo, count] : per_repo)
            out[repo] += weight * static_cast<double>(count);
    }
    return out;
}

std::map<std::string, double> repo_local_savings(
    const std::map<std::string, std::vector<StepOccurrence>>& by_repo, Strategy strategy,
    const StrategyConfig& config, EmbeddingProvider* provider) {
    std::map<std::string, double> out;
    for (const auto& [repo, occs] : by_repo) {
        const auto clusters = detect(occs, strategy, config, provider);
        out[repo] = sum_savings(clusters, 1.0);
    }
    return out;
}

}  // namespace

SavingsReport aggregate_savings(const std::vector<Cluster>& exact_clusters,
                                const std::vector<Cluster>& hybrid_clusters,
                                const std::vector<StepOccurrence>& occurrences,
                                const StrategyConfig& config, bool cross_repo_attribution,
                                EmbeddingProvider* provider) {
    SavingsReport report;
    auto conf_it = config.confidence.find(Strategy::hybrid);
    report.hybrid_confidence = conf_it == config.confidence.end() ? 0.0 : conf_it->second;

    report.aggregate_exact = sum_savings(exact_clusters, 1.0);
    // An empty hybrid set means hybrid detection was not run; the
    // combined model then degenerates to exact-only.
    const double hybrid_total =
        hybrid_clusters.empty() ? report.aggregate_exact : sum_savings(hybrid_clusters, 1.0);
    report.hybrid_surplus = hybrid_total - report.aggregate_exact;
    report.aggregate_combined =
        report.aggregate_exact + report.hybrid_surplus * report.hybrid_confidence;
    report.sensitivity = sensitivity_sweep(report.aggregate_exact, report.hybrid_surplus);

    std::map<std::string, std::vector<StepOccurrence>> by_repo;
    for (const auto& occ : occurrences) by_repo[occ.repo_id].push_back(occ);

    // The proportional split partitions the global aggregates and is
    // what the tier table reports; the per-repository map follows the
    // configured attribution.
    const auto prop_exact = proportional_split(exact_clusters, occurrences);
    const auto prop_hybrid = proportional_split(hybrid_clusters, occurrences);

    std::map<std::string, double> repo_exact, repo_hybrid;
    if (cross_repo_attribution) {
        repo_exact = prop_exact;
        repo_hybrid = prop_hybrid;
        report.per_repo_attribution = "proportional";
    } else {
        repo_exact = repo_local_savings(by_repo, Strategy::exact, config, provider);
        if (!hybrid_clusters.empty())
            repo_hybrid = repo_local_savings(by_repo, Strategy::hybrid, config, provider);
        report.per_repo_attribution = "repo-local";
    }

    for (const auto& [repo, occs] : by_repo) {
        RepoSavings rs;
        rs.steps = occs.size();
        rs.exact_eliminable = repo_exact.count(repo) ? repo_exact.at(repo) : 0.0;
        const double hybrid_r = repo_hybrid.count(repo) ? repo_hybrid.at(repo) : rs.exact_eliminable;
        const double surplus_r = std::max(0.0, hybrid_r - rs.exact_eliminable);
        rs.eliminable = rs.exact_eliminable + surplus_r * report.hybrid_confidence;
        rs.rate = rs.steps ? rs.eliminable / static_cast<double>(rs.steps) : 0.0;
        report.per_repo[repo] = rs;
    }

    // Tier rows always partition the global exact aggregate.
    std::map<std::string, RepoSavings> tier_input;
    for (const auto& [repo, occs] : by_repo) {
        RepoSavings rs;
        rs.steps = occs.size();
        rs.exact_eliminable = prop_exact.count(repo) ? prop_exact.at(repo) : 0.0;
        tier_input[repo] = rs;
    }
    report.tiers = tier_breakdown(tier_input);
    return report;
}

std::vector<TierRow> tier_breakdown(const std::map<std::string, RepoSavings>& per_repo) {
    std::vector<TierRow> rows = {
        {"small", 0, 0, 0.0},       // < 1,000 steps
        {"medium", 0, 0, 0.0},      // 1,000 .. 10,000
        {"large", 0, 0, 0.0},       // 10,000 .. 100,000
        {"enterprise", 0, 0, 0.0},  // >= 100,000
    };
    for (const auto& [repo, stats] : per_repo) {
        std::size_t tier;
        if (stats.steps < 1000) tier = 0;
        else if (stats.steps < 10000) tier = 1;
        else if (stats.steps < 100000) tier = 2;
        else tier = 3;
        rows[tier].repo_count += 1;
        rows[tier].tier_steps += stats.steps;
        rows[tier].tier_eliminable += stats.exact_eliminable;
    }
    return rows;
}

}  // namespace stepdedup
