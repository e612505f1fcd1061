// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/relabel.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace stepdedup {

const char* to_string(RuleId r) {
    switch (r) {
        case RuleId::R4: return "R4";
        case RuleId::R5: return "R5";
        case RuleId::R6: return "R6";
        case RuleId::R7: return "R7";
        case RuleId::R8: return "R8";
        case RuleId::P1: return "P1";
        case RuleId::P2: return "P2";
        case RuleId::P3: return "P3";
        case RuleId::P4: return "P4";
        case RuleId::DEFAULT_NEG: return "DEFAULT_NEG";
    }
    return "?";
}

RuleLexicon RuleLexicon::defaults() {
    RuleLexicon lex;
    // "and"/"but" are everyday words; listing them would fire R4 on
    // ordinary phrasing.
    lex.framework_keywords = {"given", "when", "then", "scenario", "background",
                              "feature", "outline", "examples"};
    lex.http_verbs = {"GET", "POST", "PUT", "DELETE", "PATCH", "HEAD", "OPTIONS"};
    lex.negation_tokens = {"not", "no", "never", "n't", "without"};
    lex.presence_phrases = {"exists", "exist", "is present", "are present", "is displayed",
                            "are displayed", "is visible", "is shown"};
    lex.content_phrases = {"equals", "equal to", "contains", "is \""};
    lex.action_verbs = {"click",  "press",  "tap",   "type",   "enter", "select", "choose",
                        "navigate", "visit", "open",  "close",  "send",  "submit", "fill",
                        "set",    "add",    "remove", "upload", "drag",  "drop",   "scroll"};
    lex.assertion_markers = {"should", "see",     "sees",    "displayed", "shown",
                             "visible", "appears", "appear",  "expect",    "expects",
                             "assert",  "asserts", "verify",  "verifies"};
    return lex;
}

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_word_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
}

/// Case-preserving word split (same separator class as the tokenizer).
std::vector<std::string> raw_words(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (is_word_char(c)) current += c;
        else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

bool contains_word_bounded(const std::string& haystack_lc, const std::string& phrase) {
    std::size_t from = 0;
    while (true) {
        std::size_t at = haystack_lc.find(phrase, from);
        if (at == std::string::npos) return false;
        const bool left_ok = at == 0 || !is_word_char(haystack_lc[at - 1]);
        const std::size_t end = at + phrase.size();
        // A phrase ending in punctuation (is ") is its own right boundary.
        const bool right_ok =
            end >= haystack_lc.size() || !is_word_char(phrase.back()) || !is_word_char(haystack_lc[end]);
        if (left_ok && right_ok) return true;
        from = at + 1;
    }
}

std::string join_sorted(const std::set<std::string>& items) {
    std::string out = "{";
    for (const auto& item : items) {
        if (out.size() > 1) out += ", ";
        out += item;
    }
    return out + "}";
}

struct PairView {
    std::string collapsed_a, collapsed_b;      // whitespace-collapsed originals
    std::string lower_a, lower_b;              // lowercased collapsed
    TokenSequence full_a, full_b;              // full-mode tokens (pre-synonym)
    TokenSequence canon_a, canon_b;            // canonicalised full-mode tokens
};

std::set<std::string> matching_words(const std::vector<std::string>& words,
                                      const std::vector<std::string>& list) {
    std::set<std::string> out;
    for (const auto& w : words)
        if (std::find(list.begin(), list.end(), w) != list.end()) out.insert(w);
    return out;
}

std::set<std::string> matching_tokens(const TokenSequence& tokens,
                                      const std::vector<std::string>& list) {
    std::set<std::string> out;
    for (const auto& t : tokens.tokens)
        if (std::find(list.begin(), list.end(), t) != list.end()) out.insert(t);
    return out;
}

std::string format_ratio(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

RuleVerdict score_free_label(std::string_view text_a, std::string_view text_b,
                             const SynonymTable& synonyms, const RuleLexicon& lexicon) {
    PairView view;
    view.collapsed_a = whitespace_collapse(text_a);
    view.collapsed_b = whitespace_collapse(text_b);
    view.lower_a = to_lower(view.collapsed_a);
    view.lower_b = to_lower(view.collapsed_b);
    view.full_a = tokenize(view.collapsed_a, ParamMode::full);
    view.full_b = tokenize(view.collapsed_b, ParamMode::full);
    view.canon_a = canonicalize(view.full_a, synonyms);
    view.canon_b = canonicalize(view.full_b, synonyms);

    // R4: conflicting framework keywords embedded in the phrasing.
    {
        const auto ka = matching_tokens(view.full_a, lexicon.framework_keywords);
        const auto kb = matching_tokens(view.full_b, lexicon.framework_keywords);
        if (ka != kb)
            return {PairLabel::not_duplicate, RuleId::R4,
                    "framework keywords " + join_sorted(ka) + " vs " + join_sorted(kb)};
    }
    // R5: differing HTTP verbs, matched case-sensitively.
    {
        const auto va = matching_words(raw_words(view.collapsed_a), lexicon.http_verbs);
        const auto vb = matching_words(raw_words(view.collapsed_b), lexicon.http_verbs);
        if (va != vb)
            return {PairLabel::not_duplicate, RuleId::R5,
                    "http verbs " + join_sorted(va) + " vs " + join_sorted(vb)};
    }
    // R6: a negation token present on one side and absent on the other.
    {
        std::set<std::string> na, nb;
        for (const auto& entry : lexicon.negation_tokens) {
            const bool wordish = std::all_of(entry.begin(), entry.end(), is_word_char);
            const bool in_a = wordish ? matching_tokens(view.full_a, {entry}).size() > 0
                                      : view.lower_a.find(entry) != std::string::npos;
            const bool in_b = wordish ? matching_tokens(view.full_b, {entry}).size() > 0
                                      : view.lower_b.find(entry) != std::string::npos;
            if (in_a) na.insert(entry);
            if (in_b) nb.insert(entry);
        }
        if (na != nb)
            return {PairLabel::not_duplicate, RuleId::R6,
                    "polarity " + join_sorted(na) + " vs " + join_sorted(nb)};
    }
    // R7: mere-existence assertion vs value constraint.
    {
        auto has_any = [&](const std::string& text_lc, const std::vector<std::string>& phrases) {
            for (const auto& p : phrases)
                if (contains_word_bounded(text_lc, p)) return true;
            return false;
        };
        const bool presence_a = has_any(view.lower_a, lexicon.presence_phrases);
        const bool presence_b = has_any(view.lower_b, lexicon.presence_phrases);
        const bool content_a = has_any(view.lower_a, lexicon.content_phrases);
        const bool content_b = has_any(view.lower_b, lexicon.content_phrases);
        const bool a_presence_only = presence_a && !content_a;
        const bool b_presence_only = presence_b && !content_b;
        if ((a_presence_only && content_b) || (b_presence_only && content_a))
            return {PairLabel::not_duplicate, RuleId::R7, "presence vs content constraint"};
    }
    // R8: imperative action on one side, bare assertion on the other.
    {
        const auto act_a = matching_tokens(view.full_a, lexicon.action_verbs);
        const auto act_b = matching_tokens(view.full_b, lexicon.action_verbs);
        const auto ass_a = matching_tokens(view.full_a, lexicon.assertion_markers);
        const auto ass_b = matching_tokens(view.full_b, lexicon.assertion_markers);
        const bool a_action_only = !act_a.empty() && ass_a.empty();
        const bool b_action_only = !act_b.empty() && ass_b.empty();
        const bool a_assert_only = !ass_a.empty() && act_a.empty();
        const bool b_assert_only = !ass_b.empty() && act_b.empty();
        if ((a_action_only && b_assert_only) || (b_action_only && a_assert_only))
            return {PairLabel::not_duplicate, RuleId::R8,
                    "action " + join_sorted(act_a.empty() ? act_b : act_a) + " vs assertion " +
                        join_sorted(ass_a.empty() ? ass_b : ass_a)};
    }

    // P1: sequence identity after PARAM normalisation and synonyms.
    if (view.canon_a == view.canon_b)
        return {PairLabel::duplicate, RuleId::P1, "canonical token sequences identical"};
    // P2: multiset identity.
    {
        auto ma = view.canon_a.tokens;
        auto mb = view.canon_b.tokens;
        std::sort(ma.begin(), ma.end());
        std::sort(mb.begin(), mb.end());
        if (ma == mb)
            return {PairLabel::duplicate, RuleId::P2, "canonical token multisets identical"};
    }
    // P3: subsequence containment of at least 70% of the shorter text.
    {
        const double containment = subsequence_containment(view.canon_a, view.canon_b);
        if (containment >= 0.70)
            return {PairLabel::duplicate, RuleId::P3,
                    "containment " + format_ratio(containment) + " >= 0.70"};
    }
    // P4: token-set Jaccard at least 0.80.
    {
        const double jaccard = token_jaccard(view.canon_a, view.canon_b);
        if (jaccard >= 0.80)
            return {PairLabel::duplicate, RuleId::P4,
                    "jaccard " + format_ratio(jaccard) + " >= 0.80"};
    }
    return {PairLabel::not_duplicate, RuleId::DEFAULT_NEG, "no rule fired"};
}

std::pair<std::vector<LabeledPair>, RelabelSummary> relabel_benchmark(
    const std::vector<LabeledPair>& pairs, const SynonymTable& synonyms,
    const RuleLexicon& lexicon) {
    std::vector<LabeledPair> out;
    out.reserve(pairs.size());
    RelabelSummary summary;
    summary.pair_count = pairs.size();

    std::vector<std::uint8_t> primary_labels, new_labels;
    for (const auto& pair : pairs) {
        const RuleVerdict verdict = score_free_label(pair.text_a, pair.text_b, synonyms, lexicon);
        LabeledPair relabelled = pair;
        relabelled.label = verdict.label;
        relabelled.rule_fired = to_string(verdict.rule);
        relabelled.annotator = "score-free-protocol";
        relabelled.protocol = Protocol::score_free;
        out.push_back(std::move(relabelled));

        ++summary.rule_counts[to_string(verdict.rule)];
        (verdict.label == PairLabel::duplicate ? summary.positives : summary.negatives)++;
        primary_labels.push_back(pair.label == PairLabel::duplicate);
        new_labels.push_back(verdict.label == PairLabel::duplicate);
    }
    if (!pairs.empty()) {
        summary.positive_rate = static_cast<double>(summary.positives) / pairs.size();
        const CohenKappa agreement = cohen_kappa_stats(primary_labels, new_labels);
        summary.kappa_vs_primary = agreement.kappa;
        summary.chance_disagreement = 1.0 - agreement.expected_agreement;
        summary.disagreements = agreement.disagreements;
    }
    return {std::move(out), summary};
}

}  // namespace stepdedup
