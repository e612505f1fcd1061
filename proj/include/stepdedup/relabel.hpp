// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

// Score-free relabelling protocol. This module never consults a
// similarity score: it may include the tokenizer and the token-level
// set/sequence metrics, but not the Levenshtein, embedding or TF-IDF
// headers.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stepdedup/calibration.hpp"
#include "stepdedup/identity.hpp"
#include "stepdedup/token_metrics.hpp"

namespace stepdedup {

enum class RuleId { R4, R5, R6, R7, R8, P1, P2, P3, P4, DEFAULT_NEG };

const char* to_string(RuleId r);

struct RuleVerdict {
    PairLabel label = PairLabel::not_duplicate;
    RuleId rule = RuleId::DEFAULT_NEG;
    std::string evidence;
};

/// Word and phrase lists behind the structural negative rules. The
/// defaults are a reconstruction, not a published table; every list is
/// overridable.
struct RuleLexicon {
    // R4: Gherkin keyword words embedded in the phrasing itself.
    std::vector<std::string> framework_keywords;
    // R5: matched case-sensitively against original-case words, so the
    // English verbs "get"/"put"/"head" do not fire it.
    std::vector<std::string> http_verbs;
    // R6: word entries match full-mode tokens; entries with
    // non-alphanumeric characters (n't) match as substrings.
    std::vector<std::string> negation_tokens;
    // R7: existence assertions vs value constraints.
    std::vector<std::string> presence_phrases;
    std::vector<std::string> content_phrases;
    // R8: imperative action verbs vs assertion markers.
    std::vector<std::string> action_verbs;
    std::vector<std::string> assertion_markers;

    static RuleLexicon defaults();
};

/// Deterministic second-pass label for one pair. Negative rules R4-R8
/// are evaluated first (any firing wins), then positive rules P1-P4 on
/// canonicalised full-mode tokens, then default-negative. Symmetric in
/// the two texts.
RuleVerdict score_free_label(std::string_view text_a, std::string_view text_b,
                             const SynonymTable& synonyms,
                             const RuleLexicon& lexicon = RuleLexicon::defaults());

struct RelabelSummary {
    std::size_t pair_count = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    double positive_rate = 0.0;
    std::map<std::string, std::size_t> rule_counts;
    // Agreement with the incoming labels; absent for empty input.
    std::optional<double> kappa_vs_primary;
    std::optional<double> chance_disagreement;  // 1 - p_e
    std::size_t disagreements = 0;
};

/// Relabel every pair under the score-free protocol and summarise the
/// protocol comparison.
std::pair<std::vector<LabeledPair>, RelabelSummary> relabel_benchmark(
    const std::vector<LabeledPair>& pairs, const SynonymTable& synonyms,
    const RuleLexicon& lexicon = RuleLexicon::defaults());

}  // namespace stepdedup
