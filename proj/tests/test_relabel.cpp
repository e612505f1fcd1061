// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "stepdedup/relabel.hpp"
#include "stepdedup/rng.hpp"

using namespace stepdedup;

namespace {
const SynonymTable kSynonyms = SynonymTable::defaults();
}

TEST_CASE("score_free_label: per-rule examples") {
    // R5: differing HTTP verbs.
    const auto r5 = score_free_label("I send a GET request to \"/x\"",
                                     "I send a POST request to \"/x\"", kSynonyms);
    CHECK(r5.label == PairLabel::not_duplicate);
    CHECK(r5.rule == RuleId::R5);

    // P1: both numerics normalise to PARAM.
    const auto p1 = score_free_label("the response status is 200", "the response status is 404",
                                     kSynonyms);
    CHECK(p1.label == PairLabel::duplicate);
    CHECK(p1.rule == RuleId::P1);

    // Identity is always P1.
    const auto same = score_free_label("the branches", "the branches", kSynonyms);
    CHECK(same.label == PairLabel::duplicate);
    CHECK(same.rule == RuleId::P1);
}

TEST_CASE("score_free_label: negative rules fire before positives") {
    // Token overlap is high enough for P3/P4, but the polarity differs.
    const auto r6 = score_free_label("the error message is displayed",
                                     "the error message is not displayed", kSynonyms);
    CHECK(r6.label == PairLabel::not_duplicate);
    CHECK(r6.rule == RuleId::R6);

    const auto r7 = score_free_label("the file exists", "the file contains \"data\"", kSynonyms);
    CHECK(r7.rule == RuleId::R7);

    const auto r8 = score_free_label("I click the login button",
                                     "the login button should be visible", kSynonyms);
    CHECK(r8.rule == RuleId::R8);

    // "submit button" carries an action word on the assertion side, so
    // the two-sided rule deliberately stays quiet.
    const auto mixed = score_free_label("I click the submit button",
                                        "the submit button should be visible", kSynonyms);
    CHECK(mixed.rule != RuleId::R8);

    // R4: embedded framework keyword on one side only.
    const auto r4 = score_free_label("the scenario name is shown", "the name is shown", kSynonyms);
    CHECK(r4.rule == RuleId::R4);
}

TEST_CASE("score_free_label: lowercase 'get' does not fire the verb rule") {
    const auto verdict = score_free_label("I get the branches", "I fetch the branches", kSynonyms);
    CHECK(verdict.rule != RuleId::R5);
}

TEST_CASE("score_free_label: n't counts as negation") {
    const auto verdict = score_free_label("the page doesn't load", "the page loads", kSynonyms);
    CHECK(verdict.rule == RuleId::R6);
    CHECK(verdict.label == PairLabel::not_duplicate);
}

TEST_CASE("score_free_label: synonym canonicalisation feeds P1") {
    const auto verdict =
        score_free_label("I click the \"Save\" button", "I tap the \"Save\" button", kSynonyms);
    CHECK(verdict.label == PairLabel::duplicate);
    CHECK(verdict.rule == RuleId::P1);  // click and tap both canonicalise to press
}

TEST_CASE("score_free_label: P2, P3, P4 tiers") {
    // Same multiset, different order.
    const auto p2 = score_free_label("alpha beta gamma", "gamma beta alpha", kSynonyms);
    CHECK(p2.rule == RuleId::P2);

    // Shorter text fully contained as a subsequence.
    const auto p3 = score_free_label("alpha beta gamma", "alpha x beta y gamma z", kSynonyms);
    CHECK(p3.rule == RuleId::P3);
    CHECK(p3.label == PairLabel::duplicate);

    // High set overlap without ordered containment: reversal kills the
    // subsequence (LCS 1/8) while Jaccard stays at 8/9.
    const auto p4 = score_free_label("a1 b2 c3 d4 e5 f6 g7 h8",
                                     "h8 g7 f6 e5 d4 c3 b2 a1 x9", kSynonyms);
    CHECK(p4.rule == RuleId::P4);

    // No overlap at all.
    const auto neg = score_free_label("the user logs out", "payment succeeds", kSynonyms);
    CHECK(neg.rule == RuleId::DEFAULT_NEG);
    CHECK(neg.label == PairLabel::not_duplicate);
}

TEST_CASE("score_free_label is symmetric") {
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"I send a GET request", "I send a POST request"},
        {"the error is displayed", "the error is not displayed"},
        {"the file exists", "the file contains \"x\""},
        {"I click the button", "the button should be visible"},
        {"the response status is 200", "the response status is 404"},
        {"alpha beta", "beta alpha"},
        {"the user logs out", "payment succeeds"},
    };
    for (const auto& [a, b] : cases) {
        const auto ab = score_free_label(a, b, kSynonyms);
        const auto ba = score_free_label(b, a, kSynonyms);
        CHECK(ab.label == ba.label);
        CHECK(ab.rule == ba.rule);
    }
}

TEST_CASE("score_free_label is symmetric and deterministic on random pairs") {
    Rng rng(43);
    const std::vector<std::string> words = {"the",   "user", "clicks", "button", "not",
                                            "GET",   "POST", "exists", "should", "be",
                                            "visible", "200", "\"x\"",  "<id>",   "page"};
    auto random_text = [&] {
        std::string s;
        const std::size_t n = 1 + rng.next_below(6);
        for (std::size_t i = 0; i < n; ++i) {
            if (i) s += ' ';
            s += words[rng.next_below(words.size())];
        }
        return s;
    };
    for (int trial = 0; trial < 300; ++trial) {
        const std::string a = random_text();
        const std::string b = random_text();
        const auto ab = score_free_label(a, b, kSynonyms);
        const auto ba = score_free_label(b, a, kSynonyms);
        const auto ab_again = score_free_label(a, b, kSynonyms);
        CHECK(ab.label == ba.label);
        CHECK(ab.rule == ba.rule);
        CHECK(ab.rule == ab_again.rule);  // deterministic
        CHECK(score_free_label(a, a, kSynonyms).label == PairLabel::duplicate);
    }
}

TEST_CASE("relabel_benchmark: fixture counts and protocol comparison") {
    const auto pairs =
        load_pairs(std::filesystem::path(STEPDEDUP_TEST_DATA_DIR) / "pairs_small.jsonl");
    const auto [relabelled, summary] = relabel_benchmark(pairs, kSynonyms);
    REQUIRE(relabelled.size() == 14);
    CHECK(summary.pair_count == 14);
    CHECK(summary.positives == 7);
    CHECK(summary.negatives == 7);
    CHECK(summary.disagreements == 2);  // p013 (swap) and p014 (quoted params)
    REQUIRE(summary.kappa_vs_primary.has_value());
    CHECK(*summary.kappa_vs_primary == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
    CHECK(*summary.chance_disagreement == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(summary.rule_counts.at("P1") == 6);
    CHECK(summary.rule_counts.at("P3") == 1);
    CHECK(summary.rule_counts.at("R5") == 1);
    CHECK(summary.rule_counts.at("R6") == 1);
    CHECK(summary.rule_counts.at("R7") == 1);
    CHECK(summary.rule_counts.at("R8") == 1);
    CHECK(summary.rule_counts.at("DEFAULT_NEG") == 3);

    for (const auto& p : relabelled) {
        CHECK(p.protocol == Protocol::score_free);
        CHECK_FALSE(p.rule_fired.empty());
    }
}

TEST_CASE("relabel_benchmark: all-identical pairs are all positive; empty input is empty") {
    std::vector<LabeledPair> pairs(3);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        pairs[i].pair_id = "id" + std::to_string(i);
        pairs[i].text_a = "the request is sent";
        pairs[i].text_b = "the request is sent";
        pairs[i].label = PairLabel::not_duplicate;  // protocol must overrule
    }
    const auto [relabelled, summary] = relabel_benchmark(pairs, kSynonyms);
    CHECK(summary.positives == 3);
    CHECK(summary.positive_rate == 1.0);

    const auto [empty_out, empty_summary] = relabel_benchmark({}, kSynonyms);
    CHECK(empty_out.empty());
    CHECK(empty_summary.pair_count == 0);
    CHECK_FALSE(empty_summary.kappa_vs_primary.has_value());
}
