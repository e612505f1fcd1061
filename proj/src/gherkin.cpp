// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/gherkin.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>

namespace stepdedup {

const char* to_string(StepKeyword k) {
    switch (k) {
        case StepKeyword::Given: return "Given";
        case StepKeyword::When: return "When";
        case StepKeyword::Then: return "Then";
        case StepKeyword::And: return "And";
        case StepKeyword::But: return "But";
    }
    return "?";
}

std::size_t FeatureFile::step_count() const {
    std::size_t n = 0;
    for (const auto& f : features)
        for (const auto& s : f.scenarios) n += s.steps.size();
    return n;
}

std::string utf8_sanitize(std::string_view bytes) {
    static constexpr const char* kReplacement = "\xEF\xBF\xBD";  // U+FFFD
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4) len = 4;
        else {
            out += kReplacement;
            ++i;
            continue;
        }
        if (i + len > bytes.size()) {
            out += kReplacement;
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k)
            if ((static_cast<unsigned char>(bytes[i + k]) & 0xC0) != 0x80) ok = false;
        if (ok && len == 3) {
            unsigned char c1 = static_cast<unsigned char>(bytes[i + 1]);
            if (c == 0xE0 && c1 < 0xA0) ok = false;            // overlong
            if (c == 0xED && c1 >= 0xA0) ok = false;           // surrogate
        }
        if (ok && len == 4) {
            unsigned char c1 = static_cast<unsigned char>(bytes[i + 1]);
            if (c == 0xF0 && c1 < 0x90) ok = false;            // overlong
            if (c == 0xF4 && c1 >= 0x90) ok = false;           // > U+10FFFF
        }
        if (!ok) {
            out += kReplacement;
            ++i;
            continue;
        }
        out.append(bytes.substr(i, len));
        i += len;
    }
    return out;
}

namespace {

std::string_view trim_view(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool starts_with_keyword(std::string_view trimmed, std::string_view kw, std::string_view* rest) {
    if (trimmed.substr(0, kw.size()) != kw) return false;
    std::string_view r = trimmed.substr(kw.size());
    // Block keywords end in ':', step keywords need a separator.
    if (!kw.ends_with(':')) {
        if (!r.empty() && r.front() != ' ' && r.front() != '\t') return false;
    }
    if (rest) *rest = trim_view(r);
    return true;
}

struct StepMatch {
    StepKeyword keyword;
    std::string_view text;
};

std::optional<StepMatch> match_step(std::string_view trimmed) {
    static constexpr std::array<std::pair<std::string_view, StepKeyword>, 6> kKeywords = {{
        {"Given", StepKeyword::Given},
        {"When", StepKeyword::When},
        {"Then", StepKeyword::Then},
        {"And", StepKeyword::And},
        {"But", StepKeyword::But},
        {"*", StepKeyword::And},  // legal in Gherkin; keyword class never enters identity
    }};
    for (const auto& [kw, keyword] : kKeywords) {
        if (trimmed.size() < kw.size() || trimmed.substr(0, kw.size()) != kw) continue;
        std::string_view rest = trimmed.substr(kw.size());
        if (kw != "*" && !rest.empty() && rest.front() != ' ' && rest.front() != '\t') continue;
        // Keep the phrase's own spacing; only the separator goes.
        std::size_t b = rest.find_first_not_of(" \t");
        if (b == std::string_view::npos) return StepMatch{keyword, {}};
        std::size_t e = rest.find_last_not_of(" \t\r");
        return StepMatch{keyword, rest.substr(b, e - b + 1)};
    }
    return std::nullopt;
}

enum class BlockKind { none, feature, background, scenario, outline, examples, rule };

}  // namespace

FeatureFile parse_feature(std::string_view source, std::string repo_id, std::string path) {
    FeatureFile out;
    out.repo_id = std::move(repo_id);
    out.path = std::move(path);

    const std::string text = utf8_sanitize(source);

    Feature* feature = nullptr;
    Scenario* scenario = nullptr;
    BlockKind block = BlockKind::none;
    bool in_examples = false;
    bool steps_started = false;   // steps seen in the current scenario block
    bool in_docstring = false;
    std::string docstring_fence;
    bool seen_content = false;    // any non-comment content yet (language directive scope)

    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (eol == std::string::npos ? text.size() : eol) - pos);
        pos = (eol == std::string::npos) ? text.size() : eol + 1;
        ++line_no;

        std::string_view trimmed = trim_view(line);

        if (in_docstring) {
            if (trimmed.substr(0, 3) == docstring_fence) in_docstring = false;
            continue;
        }
        if (trimmed.empty()) continue;

        if (trimmed.front() == '#') {
            // Only a pre-content language directive is meaningful.
            if (!seen_content) {
                std::string_view rest = trim_view(trimmed.substr(1));
                if (rest.substr(0, 9) == "language:") {
                    std::string_view lang = trim_view(rest.substr(9));
                    if (lang != "en") {
                        out.parse_errors.push_back(
                            {line_no, "unsupported language '" + std::string(lang) +
                                          "': file skipped (English keywords only)"});
                        out.features.clear();
                        return out;
                    }
                }
            }
            continue;
        }
        if (trimmed.front() == '@') continue;  // tag line

        std::string_view rest;
        if (starts_with_keyword(trimmed, "Feature:", &rest)) {
            seen_content = true;
            out.features.push_back(Feature{std::string(rest), line_no, {}});
            feature = &out.features.back();
            scenario = nullptr;
            block = BlockKind::feature;
            in_examples = false;
            steps_started = false;
            continue;
        }
        if (starts_with_keyword(trimmed, "Rule:", &rest)) {
            // Transparent container: scenarios inside parse normally.
            seen_content = true;
            if (!feature) {
                out.parse_errors.push_back({line_no, "Rule: outside a Feature"});
                continue;
            }
            scenario = nullptr;
            block = BlockKind::rule;
            in_examples = false;
            steps_started = false;
            continue;
        }
        if (starts_with_keyword(trimmed, "Background:", &rest)) {
            seen_content = true;
            if (!feature) {
                out.parse_errors.push_back({line_no, "Background: outside a Feature"});
                continue;
            }
            feature->scenarios.push_back(Scenario{std::string(rest), line_no, true, false, {}});
            scenario = &feature->scenarios.back();
            block = BlockKind::background;
            in_examples = false;
            steps_started = false;
            continue;
        }
        if (starts_with_keyword(trimmed, "Scenario Outline:", &rest) ||
            starts_with_keyword(trimmed, "Scenario Template:", &rest)) {
            seen_content = true;
            if (!feature) {
                out.parse_errors.push_back({line_no, "Scenario Outline: outside a Feature"});
                continue;
            }
            feature->scenarios.push_back(Scenario{std::string(rest), line_no, false, true, {}});
            scenario = &feature->scenarios.back();
            block = BlockKind::outline;
            in_examples = false;
            steps_started = false;
            continue;
        }
        if (starts_with_keyword(trimmed, "Scenario:", &rest)) {
            seen_content = true;
            if (!feature) {
                out.parse_errors.push_back({line_no, "Scenario: outside a Feature"});
                continue;
            }
            feature->scenarios.push_back(Scenario{std::string(rest), line_no, false, false, {}});
            scenario = &feature->scenarios.back();
            block = BlockKind::scenario;
            in_examples = false;
            steps_started = false;
            continue;
        }
        if (starts_with_keyword(trimmed, "Examples:", &rest) ||
            starts_with_keyword(trimmed, "Scenarios:", &rest)) {
            seen_content = true;
            if (!scenario || !scenario->is_outline) {
                out.parse_errors.push_back({line_no, "Examples: outside a Scenario Outline"});
                in_examples = false;
                continue;
            }
            in_examples = true;
            continue;
        }

        if (trimmed.substr(0, 3) == "\"\"\"" || trimmed.substr(0, 3) == "```") {
            seen_content = true;
            docstring_fence = std::string(trimmed.substr(0, 3));
            in_docstring = true;
            if (scenario && !scenario->steps.empty() && !in_examples) {
                scenario->steps.back().has_docstring = true;
            } else {
                out.parse_errors.push_back({line_no, "DocString without a preceding step"});
            }
            continue;
        }

        if (trimmed.front() == '|') {
            seen_content = true;
            if (in_examples) continue;  // Examples rows generate no occurrences
            if (scenario && !scenario->steps.empty()) {
                scenario->steps.back().has_datatable = true;
            } else {
                out.parse_errors.push_back({line_no, "DataTable row without a preceding step"});
            }
            continue;
        }

        if (auto step = match_step(trimmed)) {
            seen_content = true;
            if (!scenario || in_examples) {
                out.parse_errors.push_back({line_no, "step outside a scenario block"});
                continue;
            }
            if (step->text.empty()) {
                out.parse_errors.push_back({line_no, "step keyword with empty text"});
                continue;
            }
            scenario->steps.push_back(Step{step->keyword, std::string(step->text), line_no, false,
                                           false, scenario->is_background, scenario->is_outline});
            steps_started = true;
            continue;
        }

        // Free text directly after a block header is a legal description;
        // anything after steps have begun is malformed.
        seen_content = true;
        if (block == BlockKind::none) {
            out.parse_errors.push_back({line_no, "content before Feature: header"});
        } else if (steps_started) {
            out.parse_errors.push_back({line_no, "unrecognised line inside a scenario"});
        }
    }

    return out;
}

std::vector<FeatureFile> scan_tree(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec),
         end;
         it != end; it.increment(ec)) {
        if (ec) break;
        if (it->is_regular_file(ec) && it->path().extension() == ".feature")
            files.push_back(it->path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

    std::vector<FeatureFile> out;
    out.reserve(files.size());
    for (const auto& file : files) {
        fs::path rel = fs::relative(file, root, ec);
        if (ec) rel = file.filename();
        std::string rel_str = rel.generic_string();
        std::string repo = rel.has_parent_path() && rel.begin() != rel.end()
                               ? rel.begin()->generic_string()
                               : ".";
        if (repo == rel_str) repo = ".";  // file directly under root

        std::ifstream in(file, std::ios::binary);
        if (!in) {
            FeatureFile ff;
            ff.repo_id = repo;
            ff.path = rel_str;
            ff.parse_errors.push_back({0, "unreadable file"});
            out.push_back(std::move(ff));
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        out.push_back(parse_feature(buf.str(), repo, rel_str));
    }
    return out;
}

}  // namespace stepdedup
