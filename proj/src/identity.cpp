// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/identity.hpp"

#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stepdedup {

const char* to_string(LicenseClass c) {
    switch (c) {
        case LicenseClass::permissive: return "permissive";
        case LicenseClass::copyleft: return "copyleft";
        case LicenseClass::unknown: return "unknown";
        case LicenseClass::unlicensed: return "unlicensed";
    }
    return "unknown";
}

LicenseClass license_class_from_string(std::string_view s) {
    if (s == "permissive") return LicenseClass::permissive;
    if (s == "copyleft") return LicenseClass::copyleft;
    if (s == "unlicensed") return LicenseClass::unlicensed;
    return LicenseClass::unknown;
}

LicenseClass classify_spdx(std::string_view spdx) {
    std::string id(spdx);
    std::transform(id.begin(), id.end(), id.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (id.empty() || id == "none" || id == "noassertion" || id == "unlicensed")
        return LicenseClass::unlicensed;
    auto has = [&](const char* needle) { return id.find(needle) != std::string::npos; };
    if (has("gpl") || has("mpl") || has("epl") || has("cddl") || has("eupl") || has("cecill") ||
        has("osl"))
        return LicenseClass::copyleft;
    if (has("mit") || has("apache") || has("bsd") || has("isc") || has("zlib") || has("unlicense") ||
        has("cc0") || has("wtfpl") || has("artistic") || has("python") || has("boost") ||
        has("bsl-1.0"))
        return LicenseClass::permissive;
    return LicenseClass::unknown;
}

LicenseMap load_license_map(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open license map: " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("license map " + file.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("license map must be a JSON object");
    LicenseMap out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string value = it.value().get<std::string>();
        LicenseClass cls = license_class_from_string(value);
        if (cls == LicenseClass::unknown && value != "unknown") cls = classify_spdx(value);
        out[it.key()] = cls;
    }
    return out;
}

namespace {

bool is_blank(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

bool is_word_byte(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u == '_';
}

}  // namespace

std::string whitespace_collapse(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (is_blank(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += c;
    }
    return out;
}

std::string step_identity(std::string_view normalized_text) {
    static const int kSodiumReady = sodium_init();  // idempotent; -1 only on broken platforms
    (void)kSodiumReady;
    unsigned char digest[16];
    crypto_generichash(digest, sizeof digest,
                       reinterpret_cast<const unsigned char*>(normalized_text.data()),
                       normalized_text.size(), nullptr, 0);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex(32, '0');
    for (int i = 0; i < 16; ++i) {
        hex[2 * i] = kHex[digest[i] >> 4];
        hex[2 * i + 1] = kHex[digest[i] & 0xF];
    }
    return hex;
}

namespace {

constexpr const char* kParamToken = "PARAM";

void split_words_into(std::string_view segment, ParamMode mode, std::vector<std::string>& out) {
    std::string current;
    auto flush = [&] {
        if (current.empty()) return;
        if (mode == ParamMode::full &&
            std::all_of(current.begin(), current.end(),
                        [](char c) { return c >= '0' && c <= '9'; })) {
            out.push_back(kParamToken);  // standalone numeric literal
        } else {
            out.push_back(current);
        }
        current.clear();
    };
    for (char c : segment) {
        if (is_word_byte(c)) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            flush();  // punctuation separates; hyphens split tokens
        }
    }
    flush();
}

}  // namespace

TokenSequence tokenize(std::string_view text, ParamMode mode) {
    TokenSequence seq;
    std::size_t i = 0;
    std::string segment;
    auto flush_segment = [&] {
        if (segment.empty()) return;
        split_words_into(segment, mode, seq.tokens);
        segment.clear();
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '"') {
            std::size_t close = text.find('"', i + 1);
            if (close != std::string_view::npos) {
                flush_segment();
                seq.tokens.push_back(kParamToken);
                i = close + 1;
                continue;
            }
            // Unpaired quote: plain punctuation.
            segment += c;
            ++i;
            continue;
        }
        if (mode == ParamMode::full && c == '<') {
            std::size_t close = text.find('>', i + 1);
            if (close != std::string_view::npos) {
                flush_segment();
                seq.tokens.push_back(kParamToken);
                i = close + 1;
                continue;
            }
        }
        segment += c;
        ++i;
    }
    flush_segment();
    return seq;
}

SynonymTable SynonymTable::defaults() {
    return from_pairs({
        {"click", "press"},
        {"tap", "press"},
        {"shown", "displayed"},
        {"visible", "displayed"},
        {"navigate", "go"},
        {"valid", "correct"},
    });
}

SynonymTable SynonymTable::from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    SynonymTable table;
    for (const auto& [variant, canonical] : pairs) {
        auto it = table.map_.find(variant);
        if (it != table.map_.end() && it->second != canonical)
            throw std::runtime_error("synonym table: conflicting mappings for '" + variant + "'");
        table.map_[variant] = canonical;
    }
    // Idempotence: canonical tokens must map to themselves.
    for (const auto& [variant, canonical] : table.map_) {
        auto it = table.map_.find(canonical);
        if (it != table.map_.end() && it->second != canonical)
            throw std::runtime_error("synonym table not idempotent: '" + variant + "' -> '" +
                                     canonical + "' -> '" + it->second + "'");
    }
    return table;
}

SynonymTable SynonymTable::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open synonym table: " + file.string());
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = line;
        std::size_t hash = v.find('#');
        if (hash != std::string_view::npos) v = v.substr(0, hash);
        std::size_t b = v.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;
        std::size_t e = v.find_last_not_of(" \t\r");
        v = v.substr(b, e - b + 1);
        std::size_t arrow = v.find("->");
        if (arrow == std::string_view::npos)
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": expected 'variant -> canonical'");
        auto strip = [](std::string_view s) {
            std::size_t sb = s.find_first_not_of(" \t");
            if (sb == std::string_view::npos) return std::string();
            std::size_t se = s.find_last_not_of(" \t");
            return std::string(s.substr(sb, se - sb + 1));
        };
        std::string variant = strip(v.substr(0, arrow));
        std::string canonical = strip(v.substr(arrow + 2));
        if (variant.empty() || canonical.empty())
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": empty variant or canonical token");
        pairs.emplace_back(std::move(variant), std::move(canonical));
    }
    return from_pairs(pairs);
}

const std::string& SynonymTable::canonical(const std::string& token) const {
    auto it = map_.find(token);
    return it == map_.end() ? token : it->second;
}

TokenSequence canonicalize(const TokenSequence& tokens, const SynonymTable& synonyms) {
    TokenSequence out;
    out.tokens.reserve(tokens.tokens.size());
    for (const auto& t : tokens.tokens) out.tokens.push_back(synonyms.canonical(t));
    return out;
}

std::vector<StepOccurrence> collect_occurrences(const std::vector<FeatureFile>& files,
                                                const LicenseMap* licenses) {
    std::vector<StepOccurrence> out;
    for (const auto& file : files) {
        LicenseClass cls = LicenseClass::unknown;
        if (licenses) {
            auto it = licenses->find(file.repo_id);
            if (it != licenses->end()) cls = it->second;
        }
        for (const auto& feature : file.features) {
            for (const auto& scenario : feature.scenarios) {
                for (const auto& step : scenario.steps) {
                    StepOccurrence occ;
                    occ.repo_id = file.repo_id;
                    occ.path = file.path;
                    occ.line_no = step.line_no;
                    occ.keyword = step.keyword;
                    occ.raw_text = step.raw_text;
                    occ.normalized_text = whitespace_collapse(step.raw_text);
                    occ.identity_digest = step_identity(occ.normalized_text);
                    occ.has_docstring = step.has_docstring;
                    occ.has_datatable = step.has_datatable;
                    occ.is_background = step.is_background;
                    occ.is_outline = step.is_outline;
                    occ.license_class = cls;
                    out.push_back(std::move(occ));
                }
            }
        }
    }
    return out;
}

}  // namespace stepdedup
