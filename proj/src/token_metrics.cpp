// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/token_metrics.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace stepdedup {

double token_jaccard(const TokenSequence& a, const TokenSequence& b) {
    std::set<std::string> sa(a.tokens.begin(), a.tokens.end());
    std::set<std::string> sb(b.tokens.begin(), b.tokens.end());
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& t : sa) inter += sb.count(t);
    const std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double subsequence_containment(const TokenSequence& a, const TokenSequence& b) {
    const std::vector<std::string>* shorter = &a.tokens;
    const std::vector<std::string>* longer = &b.tokens;
    if (shorter->size() > longer->size()) std::swap(shorter, longer);
    const std::size_t m = shorter->size(), n = longer->size();
    if (m == 0) return 1.0;

    // LCS over tokens, two-row DP.
    std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= m; ++i) {
            cur[i] = ((*shorter)[i - 1] == (*longer)[j - 1]) ? prev[i - 1] + 1
                                                             : std::max(prev[i], cur[i - 1]);
        }
        prev.swap(cur);
    }
    return static_cast<double>(prev[m]) / static_cast<double>(m);
}

}  // namespace stepdedup
