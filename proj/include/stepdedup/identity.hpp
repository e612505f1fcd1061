// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stepdedup/gherkin.hpp"

namespace stepdedup {

enum class LicenseClass { permissive, copyleft, unknown, unlicensed };

const char* to_string(LicenseClass c);
LicenseClass license_class_from_string(std::string_view s);

/// Map an SPDX identifier ("MIT", "GPL-3.0-only", ...) to a licence class.
LicenseClass classify_spdx(std::string_view spdx);

using LicenseMap = std::map<std::string, LicenseClass>;

/// Load a repo_id -> licence map from JSON ({"repo": "MIT"} or
/// {"repo": "copyleft"}); values may be SPDX ids or class names.
LicenseMap load_license_map(const std::filesystem::path& file);

/// One parsed step with provenance and identity digest.
struct StepOccurrence {
    std::string repo_id;
    std::string path;
    int line_no = 0;
    StepKeyword keyword = StepKeyword::Given;
    std::string raw_text;
    std::string normalized_text;
    std::string identity_digest;  // 32 lowercase hex chars (128-bit BLAKE2b)
    bool has_docstring = false;
    bool has_datatable = false;
    bool is_background = false;
    bool is_outline = false;
    LicenseClass license_class = LicenseClass::unknown;
};

/// Collapse runs of blank characters (space, tab and friends; newlines
/// cannot occur in step text) to a single space and trim both ends.
/// Case, quoted parameters, placeholders, numbers and URLs are kept
/// verbatim. Idempotent.
std::string whitespace_collapse(std::string_view text);

/// 128-bit BLAKE2b of the already-collapsed text, lowercase hex.
/// Matches blake2b with a 16-byte digest length on every platform.
std::string step_identity(std::string_view normalized_text);

enum class ParamMode { quoted_only, full };

struct TokenSequence {
    std::vector<std::string> tokens;

    bool operator==(const TokenSequence&) const = default;
};

/// Lexical normalisation used by the baselines and the score-free
/// protocol. quoted_only: each double-quoted span becomes the single
/// token PARAM, then lowercase, strip punctuation (alnum and
/// underscore survive, hyphens split), split on whitespace.
/// full: additionally maps <placeholders> and standalone numeric
/// literals to PARAM.
TokenSequence tokenize(std::string_view text, ParamMode mode);

/// Variant -> canonical token table. Idempotent by construction:
/// canonical tokens map to themselves.
class SynonymTable {
public:
    SynonymTable() = default;

    /// Built-in curated set (press/displayed/go/correct groups). Not
    /// authoritative; override with a table file where needed.
    static SynonymTable defaults();

    /// Plain-text lines `variant -> canonical`, `#` comments. Throws
    /// std::runtime_error with a line number on malformed or
    /// non-idempotent tables.
    static SynonymTable load(const std::filesystem::path& file);

    static SynonymTable from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

    const std::string& canonical(const std::string& token) const;
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    const std::unordered_map<std::string, std::string>& entries() const { return map_; }

private:
    std::unordered_map<std::string, std::string> map_;
};

/// Replace each token by its canonical form, order preserved.
TokenSequence canonicalize(const TokenSequence& tokens, const SynonymTable& synonyms);

/// Flatten parsed files into the occurrence table. Files with zero
/// parseable steps contribute nothing. licenses may be null.
std::vector<StepOccurrence> collect_occurrences(const std::vector<FeatureFile>& files,
                                                const LicenseMap* licenses = nullptr);

}  // namespace stepdedup
