// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stepdedup {

enum class StepKeyword { Given, When, Then, And, But };

const char* to_string(StepKeyword k);

/// One executable step line. raw_text is the phrasing after the keyword
/// (original spacing, keyword token stripped). DocString/DataTable
/// attachments are recorded as flags only; their bodies never reach
/// the step text.
struct Step {
    StepKeyword keyword = StepKeyword::Given;
    std::string raw_text;
    int line_no = 0;
    bool has_docstring = false;
    bool has_datatable = false;
    bool is_background = false;
    bool is_outline = false;
};

/// A Background, Scenario, or Scenario Outline block.
struct Scenario {
    std::string name;
    int line_no = 0;
    bool is_background = false;
    bool is_outline = false;
    std::vector<Step> steps;
};

struct Feature {
    std::string name;
    int line_no = 0;
    std::vector<Scenario> scenarios;
};

struct ParseError {
    int line_no = 0;
    std::string message;
};

struct FeatureFile {
    std::string repo_id;
    std::string path;
    std::vector<Feature> features;
    std::vector<ParseError> parse_errors;

    std::size_t step_count() const;
};

/// Parse one `.feature` source. Never throws on malformed input: bad
/// blocks land in parse_errors and parsing resumes at the next
/// recognisable keyword line. Invalid UTF-8 is replaced, not fatal.
///
/// English keywords only; a `# language:` directive other than `en`
/// marks the whole file skipped-with-error. `*` steps map to the And
/// keyword class. `Rule:` blocks are transparent containers.
FeatureFile parse_feature(std::string_view source, std::string repo_id, std::string path);

/// Recursively collect `*.feature` files under root in deterministic
/// lexicographic order. repo_id is the first path component under root
/// (one directory per repository); files directly under root get ".".
/// Unreadable files are recorded with a single parse_errors entry.
std::vector<FeatureFile> scan_tree(const std::filesystem::path& root);

/// Replace invalid UTF-8 sequences with U+FFFD.
std::string utf8_sanitize(std::string_view bytes);

}  // namespace stepdedup
