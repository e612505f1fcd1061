// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <optional>
#include <string_view>

namespace stepdedup {

/// Unit-cost edit distance (insert/delete/substitute), full DP.
int levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - d(a,b) / max(|a|,|b|); 1.0 when both empty.
double levenshtein_ratio(std::string_view a, std::string_view b);

/// Banded distance: the exact distance if it is <= max_dist, otherwise
/// nullopt. Equivalent to the full DP restricted to a diagonal band.
std::optional<int> levenshtein_within(std::string_view a, std::string_view b, int max_dist);

/// Largest distance d such that 1 - d/max_len still clears threshold
/// (evaluated in double, exactly as levenshtein_ratio comparisons are).
int max_edits_for_threshold(std::size_t len_a, std::size_t len_b, double threshold);

/// Banded accept test: same accept/reject decision as
/// levenshtein_ratio(a, b) >= threshold, with early exit.
bool levenshtein_at_least(std::string_view a, std::string_view b, double threshold);

}  // namespace stepdedup
