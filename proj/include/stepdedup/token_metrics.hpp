// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include "stepdedup/identity.hpp"

namespace stepdedup {

// Token-level set and sequence similarity. Deliberately a separate
// header: the score-free relabeller may depend on these but must not
// reach the Levenshtein, embedding or TF-IDF primitives.

/// |set(a) n set(b)| / |set(a) u set(b)|; 1.0 when both empty.
double token_jaccard(const TokenSequence& a, const TokenSequence& b);

/// LCS(shorter, longer) / |shorter| over tokens; 1.0 when the shorter
/// sequence is empty. Subsequence, not substring: gaps are allowed.
double subsequence_containment(const TokenSequence& a, const TokenSequence& b);

}  // namespace stepdedup
