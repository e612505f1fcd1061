// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include <doctest.h>

#include <set>
#include <string>

#include "stepdedup/identity.hpp"
#include "stepdedup/rng.hpp"

using namespace stepdedup;

TEST_CASE("whitespace_collapse") {
    CHECK(whitespace_collapse("the  request \t is sent ") == "the request is sent");
    CHECK(whitespace_collapse("the response status is 200 OK") ==
          "the response status is 200 OK");
    CHECK(whitespace_collapse("") == "");
    CHECK(whitespace_collapse("   ") == "");
    CHECK(whitespace_collapse("\tleading and trailing\t") == "leading and trailing");
}

TEST_CASE("whitespace_collapse is idempotent on random blank-heavy strings") {
    Rng rng(7);
    const std::string alphabet = "ab \t c  d\te";
    for (int trial = 0; trial < 200; ++trial) {
        std::string s;
        const std::size_t len = rng.next_below(40);
        for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.next_below(alphabet.size())];
        const std::string once = whitespace_collapse(s);
        CHECK(whitespace_collapse(once) == once);
        CHECK(once.find("  ") == std::string::npos);
        if (!once.empty()) {
            CHECK(once.front() != ' ');
            CHECK(once.back() != ' ');
        }
    }
}

TEST_CASE("step_identity: 128-bit lowercase hex, matches the blake2b reference") {
    const std::string digest = step_identity("the request is sent");
    CHECK(digest.size() == 32);
    // Reference digests from an independent BLAKE2b implementation
    // (16-byte digest length).
    CHECK(digest == "7d087fa9f85683f729f26bb1b20f3235");
    CHECK(step_identity("") == "cae66941d9efbd404e4d88758ea67670");
    CHECK(step_identity("the response status is 200 OK") ==
          "39052e9bfe78343fe0faa234c6aa1a99");
}

TEST_CASE("step_identity: equal inputs agree, parameters are part of the identity") {
    CHECK(step_identity("the branches") == step_identity("the branches"));
    CHECK(step_identity("I log in as \"admin\"") != step_identity("I log in as \"guest\""));
}

TEST_CASE("step_identity: no collisions across distinct fixture texts") {
    std::set<std::string> digests;
    std::set<std::string> texts;
    Rng rng(99);
    const std::string alphabet = "abcdefgh ";
    for (int i = 0; i < 5000; ++i) {
        std::string s;
        const std::size_t len = rng.next_below(24);
        for (std::size_t k = 0; k < len; ++k) s += alphabet[rng.next_below(alphabet.size())];
        texts.insert(whitespace_collapse(s));
    }
    for (const auto& t : texts) digests.insert(step_identity(t));
    CHECK(digests.size() == texts.size());
}

TEST_CASE("tokenize: quoted parameters become PARAM") {
    const auto tokens =
        tokenize("I add \"Accept\" header equal to \"application/json\"", ParamMode::quoted_only);
    CHECK(tokens.tokens ==
          std::vector<std::string>{"i", "add", "PARAM", "header", "equal", "to", "PARAM"});
}

TEST_CASE("tokenize: empty and punctuation-only inputs") {
    CHECK(tokenize("", ParamMode::quoted_only).tokens.empty());
    CHECK(tokenize("!!! ---", ParamMode::quoted_only).tokens.empty());
}

TEST_CASE("tokenize: full mode maps numbers and placeholders to PARAM") {
    const auto tokens = tokenize("the response status is 200 OK", ParamMode::full);
    CHECK(tokens.tokens ==
          std::vector<std::string>{"the", "response", "status", "is", "PARAM", "ok"});
    const auto outline = tokenize("the user logs in as <role>", ParamMode::full);
    CHECK(outline.tokens == std::vector<std::string>{"the", "user", "logs", "in", "as", "PARAM"});
}

TEST_CASE("tokenize: quoted_only keeps numbers, hyphens split, underscore survives") {
    const auto tokens = tokenize("re-run the batch_job 42 times", ParamMode::quoted_only);
    CHECK(tokens.tokens ==
          std::vector<std::string>{"re", "run", "the", "batch_job", "42", "times"});
}

TEST_CASE("tokenize: never emits a double quote and handles unpaired quotes") {
    const auto paired = tokenize("say \"hello world\" twice", ParamMode::quoted_only);
    for (const auto& t : paired.tokens) CHECK(t.find('"') == std::string::npos);
    const auto unpaired = tokenize("say \"hello", ParamMode::quoted_only);
    CHECK(unpaired.tokens == std::vector<std::string>{"say", "hello"});
}

TEST_CASE("tokenize: no empty tokens, none contain whitespace (random inputs)") {
    Rng rng(3);
    const std::string alphabet = "ab\"< >123 -_.";
    for (int trial = 0; trial < 300; ++trial) {
        std::string s;
        const std::size_t len = rng.next_below(30);
        for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.next_below(alphabet.size())];
        for (ParamMode mode : {ParamMode::quoted_only, ParamMode::full}) {
            for (const auto& t : tokenize(s, mode).tokens) {
                CHECK_FALSE(t.empty());
                CHECK(t.find(' ') == std::string::npos);
            }
        }
    }
}

TEST_CASE("canonicalize applies the table and is idempotent") {
    const auto table = SynonymTable::from_pairs({{"click", "press"}, {"tap", "press"}});
    const TokenSequence input{{"i", "click", "PARAM"}};
    const auto once = canonicalize(input, table);
    CHECK(once.tokens == std::vector<std::string>{"i", "press", "PARAM"});
    CHECK(canonicalize(once, table).tokens == once.tokens);

    const SynonymTable empty;
    CHECK(canonicalize(input, empty).tokens == input.tokens);
}

TEST_CASE("SynonymTable rejects non-idempotent mappings") {
    CHECK_THROWS(SynonymTable::from_pairs({{"a", "b"}, {"b", "c"}}));
    CHECK_NOTHROW(SynonymTable::from_pairs({{"a", "b"}, {"b", "b"}}));
}

TEST_CASE("SynonymTable::load parses the fixture file") {
    const auto table = SynonymTable::load(std::filesystem::path(STEPDEDUP_TEST_DATA_DIR) /
                                          "synonyms.txt");
    CHECK(table.canonical("click") == "press");
    CHECK(table.canonical("visible") == "displayed");
    CHECK(table.canonical("unmapped") == "unmapped");
    CHECK(table.size() == 6);
}

TEST_CASE("classify_spdx buckets") {
    CHECK(classify_spdx("MIT") == LicenseClass::permissive);
    CHECK(classify_spdx("Apache-2.0") == LicenseClass::permissive);
    CHECK(classify_spdx("GPL-3.0-only") == LicenseClass::copyleft);
    CHECK(classify_spdx("NOASSERTION") == LicenseClass::unlicensed);
    CHECK(classify_spdx("Custom-1.0") == LicenseClass::unknown);
}

TEST_CASE("collect_occurrences: digests are a function of normalized text") {
    const auto file = parse_feature(
        "Feature: F\n"
        "  Scenario: A\n"
        "    Given the branches\n"
        "  Scenario: B\n"
        "    Given the branches\n"
        "      | t |\n",
        "r", "f.feature");
    const auto occurrences = collect_occurrences({file});
    REQUIRE(occurrences.size() == 2);
    // Same phrasing with and without a DataTable: same identity.
    CHECK(occurrences[0].identity_digest == occurrences[1].identity_digest);
    CHECK_FALSE(occurrences[0].has_datatable);
    CHECK(occurrences[1].has_datatable);
}
