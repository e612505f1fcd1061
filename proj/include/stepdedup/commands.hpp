// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stepdedup/config.hpp"

namespace stepdedup {

/// What a command wrote and the headline numbers, for callers that
/// want them without re-reading the artifacts.
struct CommandResult {
    std::vector<std::filesystem::path> outputs;
    std::map<std::string, double> numbers;
};

/// Scan a corpus tree: parse every .feature file, write the steps
/// table (CSV always; columnar/json/html per config.formats),
/// per-strategy cluster files, and summary.json.
CommandResult cmd_scan(const std::filesystem::path& root, const std::filesystem::path& out_dir,
                       const RunConfig& config);

/// Calibrate strategies and lexical baselines against a labelled pair
/// file: threshold sweeps, best-F1 operating points with bootstrap
/// CIs under both label protocols, cross-validation, and
/// protocol-agreement kappa.
CommandResult cmd_calibrate(const std::filesystem::path& pairs_file,
                            const std::filesystem::path& out_dir, const RunConfig& config);

/// Apply the score-free relabelling protocol; writes the relabelled
/// pair file and a comparison summary.
CommandResult cmd_relabel(const std::filesystem::path& pairs_file,
                          const std::filesystem::path& out_dir, const RunConfig& config);

/// Consolidation-savings model over scan artifacts: per-repository
/// savings, sensitivity sweep, size tiers, and per-cluster member
/// rosters.
CommandResult cmd_savings(const std::filesystem::path& artifacts_dir,
                          const std::filesystem::path& out_dir, const RunConfig& config);

}  // namespace stepdedup
