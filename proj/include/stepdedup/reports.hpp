// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stepdedup/config.hpp"
#include "stepdedup/detector.hpp"

namespace stepdedup {

using ordered_json = nlohmann::ordered_json;

/// Provenance block embedded in every structured output: tool version,
/// config hash, provider name and dimension, seed.
ordered_json report_meta(const RunConfig& config, const std::string& provider_name,
                         int provider_dim);

std::string csv_escape(std::string_view field);

/// The steps table column schema, in order.
std::span<const char* const> steps_table_columns();

std::string steps_table_csv(const std::vector<StepOccurrence>& occurrences);
ordered_json steps_table_columnar(const std::vector<StepOccurrence>& occurrences);
ordered_json steps_table_rows(const std::vector<StepOccurrence>& occurrences);

/// Parse a steps table CSV back into occurrences (the savings command
/// consumes scan artifacts this way).
std::vector<StepOccurrence> read_steps_table_csv(const std::filesystem::path& file);

ordered_json clusters_to_json(const std::vector<Cluster>& clusters,
                              const std::vector<StepOccurrence>& occurrences,
                              bool include_members = true);

/// Minimal self-contained HTML page around pre-rendered sections.
std::string html_report(const std::string& title, const ordered_json& meta,
                        const std::vector<std::pair<std::string, ordered_json>>& sections);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace stepdedup
