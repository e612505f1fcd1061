// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/detector.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "stepdedup/calibration.hpp"
#include "stepdedup/levenshtein.hpp"

namespace stepdedup {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::exact: return "exact";
        case Strategy::near_exact: return "near_exact";
        case Strategy::semantic: return "semantic";
        case Strategy::hybrid: return "hybrid";
    }
    return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
    if (s == "exact") return Strategy::exact;
    if (s == "near_exact" || s == "near-exact") return Strategy::near_exact;
    if (s == "semantic") return Strategy::semantic;
    if (s == "hybrid") return Strategy::hybrid;
    return std::nullopt;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

bool hybrid_band_match(std::string_view a, std::string_view b, const StrategyConfig& config) {
    const std::size_t max_len = std::max(a.size(), b.size());
    if (max_len == 0) return false;  // identical empties are exact's job
    const int k_low = max_edits_for_threshold(a.size(), b.size(), config.hybrid_band_low);
    auto d = levenshtein_within(a, b, k_low);
    if (!d) return false;
    const double ratio = 1.0 - static_cast<double>(*d) / static_cast<double>(max_len);
    return ratio >= config.hybrid_band_low && ratio <= config.hybrid_band_high;
}

double pair_cosine(EmbeddingProvider& provider, std::string_view a, std::string_view b) {
    auto vectors = embed_batch(provider, {std::string(a), std::string(b)});
    return cosine(vectors[0], vectors[1]);
}

}  // namespace

bool match_pair(Strategy strategy, std::string_view a, std::string_view b,
                const StrategyConfig& config, EmbeddingProvider* provider) {
    switch (strategy) {
        case Strategy::exact:
            return step_identity(a) == step_identity(b);
        case Strategy::near_exact:
            return levenshtein_at_least(a, b, config.levenshtein_threshold);
        case Strategy::semantic: {
            if (!provider) throw std::invalid_argument("semantic matching requires a provider");
            return pair_cosine(*provider, a, b) >= config.cosine_threshold;
        }
        case Strategy::hybrid: {
            if (a == b) return true;  // exact pairs are always in
            if (!provider) throw std::invalid_argument("hybrid matching requires a provider");
            if (!hybrid_band_match(a, b, config)) return false;
            return pair_cosine(*provider, a, b) >= config.cosine_threshold;
        }
    }
    return false;
}

std::vector<Cluster> detect(const std::vector<StepOccurrence>& occurrences, Strategy strategy,
                            const StrategyConfig& config, EmbeddingProvider* provider) {
    // One representative per identity digest; exact duplicates are
    // already decided by the digest.
    std::vector<std::string> unique_texts;
    std::vector<std::vector<std::size_t>> unique_occurrences;
    {
        std::unordered_map<std::string_view, std::size_t> by_digest;
        for (std::size_t i = 0; i < occurrences.size(); ++i) {
            auto [it, inserted] =
                by_digest.try_emplace(occurrences[i].identity_digest, unique_texts.size());
            if (inserted) {
                unique_texts.push_back(occurrences[i].normalized_text);
                unique_occurrences.emplace_back();
            }
            unique_occurrences[it->second].push_back(i);
        }
    }
    const std::size_t n = unique_texts.size();
    UnionFind uf(n);

    if (strategy == Strategy::near_exact) {
        // Length filter is lossless: distance >= length difference.
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return unique_texts[a].size() < unique_texts[b].size();
        });
        const double theta = config.levenshtein_threshold;
        for (std::size_t jo = 1; jo < n; ++jo) {
            const std::string& tj = unique_texts[order[jo]];
            const double lj = static_cast<double>(tj.size());
            for (std::size_t io = jo; io-- > 0;) {
                const std::string& ti = unique_texts[order[io]];
                if (lj > 0.0 &&
                    !(1.0 - (lj - static_cast<double>(ti.size())) / lj >= theta))
                    break;  // shorter candidates only get worse
                if (levenshtein_at_least(ti, tj, theta)) uf.unite(order[io], order[jo]);
            }
        }
    } else if (strategy == Strategy::semantic || strategy == Strategy::hybrid) {
        if (!provider)
            throw std::invalid_argument(std::string(to_string(strategy)) +
                                        " detection requires an embedding provider");
        if (n > config.max_unique_all_pairs && !config.allow_large)
            throw std::invalid_argument(
                "all-pairs candidate generation over " + std::to_string(n) +
                " unique texts exceeds the cap of " + std::to_string(config.max_unique_all_pairs) +
                "; pass --allow-large to proceed");
        const auto vectors = embed_batch(*provider, unique_texts);
        for (std::size_t j = 1; j < n; ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                if (cosine(vectors[i], vectors[j]) < config.cosine_threshold) continue;
                if (strategy == Strategy::hybrid &&
                    !hybrid_band_match(unique_texts[i], unique_texts[j], config))
                    continue;
                uf.unite(i, j);
            }
        }
    }
    // exact: no pairwise phase.

    std::unordered_map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t u = 0; u < n; ++u) components[uf.find(u)].push_back(u);

    std::vector<Cluster> clusters;
    clusters.reserve(components.size());
    for (auto& [root, uniques] : components) {
        Cluster c;
        c.strategy = strategy;
        // Canonical text: most frequent normalized text, ties to the
        // lexicographically smallest.
        std::size_t best_count = 0;
        for (std::size_t u : uniques) {
            const std::size_t count = unique_occurrences[u].size();
            if (count > best_count ||
                (count == best_count && unique_texts[u] < c.canonical_text)) {
                best_count = count;
                c.canonical_text = unique_texts[u];
            }
            c.members.insert(c.members.end(), unique_occurrences[u].begin(),
                             unique_occurrences[u].end());
        }
        std::sort(c.members.begin(), c.members.end());
        c.occurrence_count = c.members.size();
        std::set<std::pair<std::string_view, std::string_view>> files;
        std::set<std::string_view> repos;
        for (std::size_t m : c.members) {
            files.emplace(occurrences[m].repo_id, occurrences[m].path);
            repos.emplace(occurrences[m].repo_id);
        }
        c.distinct_files = files.size();
        c.distinct_repos = repos.size();
        clusters.push_back(std::move(c));
    }
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.occurrence_count != b.occurrence_count) return a.occurrence_count > b.occurrence_count;
        return a.canonical_text < b.canonical_text;
    });
    return clusters;
}

double duplication_rate(const std::vector<Cluster>& clusters, std::size_t total_steps) {
    if (total_steps == 0) throw std::invalid_argument("duplication_rate: total_steps is zero");
    std::size_t redundant = 0;
    for (const auto& c : clusters) redundant += c.occurrence_count - 1;
    return static_cast<double>(redundant) / static_cast<double>(total_steps);
}

PerRepoRates per_repo_rates(const std::vector<StepOccurrence>& occurrences, Strategy strategy,
                            const StrategyConfig& config, EmbeddingProvider* provider) {
    std::map<std::string, std::vector<StepOccurrence>> by_repo;
    for (const auto& occ : occurrences) by_repo[occ.repo_id].push_back(occ);

    PerRepoRates out;
    std::vector<double> rates, sizes;
    for (auto& [repo, occs] : by_repo) {
        const auto clusters = detect(occs, strategy, config, provider);
        const double rate = duplication_rate(clusters, occs.size());
        out.rates[repo] = rate;
        out.steps[repo] = occs.size();
        rates.push_back(rate);
        sizes.push_back(static_cast<double>(occs.size()));
    }
    if (!rates.empty()) out.median = descriptive_stats(rates).median;
    if (rates.size() >= 2) {
        try {
            out.spearman_vs_size = spearman_rho(rates, sizes);
        } catch (const std::invalid_argument&) {
            out.spearman_vs_size = std::nullopt;  // zero variance
        }
    }
    return out;
}

}  // namespace stepdedup
