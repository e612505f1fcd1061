// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/levenshtein.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace stepdedup {

int levenshtein_distance(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    const std::size_t m = a.size(), n = b.size();
    if (m == 0) return static_cast<int>(n);
    std::vector<int> row(m + 1);
    for (std::size_t i = 0; i <= m; ++i) row[i] = static_cast<int>(i);
    for (std::size_t j = 1; j <= n; ++j) {
        int diag = row[0];
        row[0] = static_cast<int>(j);
        for (std::size_t i = 1; i <= m; ++i) {
            int cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
            int next = std::min({row[i] + 1, row[i - 1] + 1, diag + cost});
            diag = row[i];
            row[i] = next;
        }
    }
    return row[m];
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
    const std::size_t max_len = std::max(a.size(), b.size());
    if (max_len == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(max_len);
}

std::optional<int> levenshtein_within(std::string_view a, std::string_view b, int max_dist) {
    if (max_dist < 0) return std::nullopt;
    if (a.size() > b.size()) std::swap(a, b);
    const std::size_t m = a.size(), n = b.size();
    if (n - m > static_cast<std::size_t>(max_dist)) return std::nullopt;
    if (m == 0) return static_cast<int>(n);

    constexpr int kInf = std::numeric_limits<int>::max() / 2;
    const std::size_t k = static_cast<std::size_t>(max_dist);
    std::vector<int> row(m + 1, kInf), next(m + 1, kInf);
    for (std::size_t i = 0; i <= std::min(m, k); ++i) row[i] = static_cast<int>(i);

    for (std::size_t j = 1; j <= n; ++j) {
        // Cells with |i - j| > k cannot end within max_dist.
        const std::size_t lo = (j > k) ? j - k : 0;
        const std::size_t hi = std::min(m, j + k);
        std::fill(next.begin(), next.end(), kInf);
        if (lo == 0) next[0] = static_cast<int>(j);
        int best = kInf;
        for (std::size_t i = std::max<std::size_t>(lo, 1); i <= hi; ++i) {
            int cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
            int v = row[i - 1] + cost;                      // diagonal
            if (row[i] != kInf) v = std::min(v, row[i] + 1);    // insertion into b
            if (next[i - 1] != kInf) v = std::min(v, next[i - 1] + 1);  // deletion
            next[i] = v;
            best = std::min(best, v);
        }
        if (lo == 0) best = std::min(best, next[0]);
        if (best > max_dist) return std::nullopt;
        row.swap(next);
    }
    if (row[m] > max_dist) return std::nullopt;
    return row[m];
}

int max_edits_for_threshold(std::size_t len_a, std::size_t len_b, double threshold) {
    const std::size_t max_len = std::max(len_a, len_b);
    if (max_len == 0) return 0;
    const double L = static_cast<double>(max_len);
    // Same comparison the full route performs: 1 - d/L >= threshold.
    int d = static_cast<int>((1.0 - threshold) * L) + 2;
    d = std::min<int>(d, static_cast<int>(max_len));
    while (d >= 0 && !(1.0 - static_cast<double>(d) / L >= threshold)) --d;
    return d;  // -1 when the threshold is unattainable even at distance 0
}

bool levenshtein_at_least(std::string_view a, std::string_view b, double threshold) {
    const std::size_t max_len = std::max(a.size(), b.size());
    if (max_len == 0) return 1.0 >= threshold;
    const int k = max_edits_for_threshold(a.size(), b.size(), threshold);
    return levenshtein_within(a, b, k).has_value();
}

}  // namespace stepdedup
