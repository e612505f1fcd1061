// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "stepdedup/detector.hpp"
#include "stepdedup/embedding.hpp"

namespace stepdedup {

/// Bad invocation or config file (CLI exit code 1).
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or missing input data (CLI exit code 2).
class DataError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<Strategy> strategies = {Strategy::exact, Strategy::near_exact, Strategy::semantic,
                                        Strategy::hybrid};
    StrategyConfig strategy;
    std::string provider = "fallback";  // "fallback" or "external:<endpoint>"
    std::uint64_t seed = 42;
    int bootstrap_samples = 10000;
    int cv_folds = 5;
    double sweep_lo = 0.50;
    double sweep_hi = 1.00;
    double sweep_step = 0.01;
    std::string synonyms_path;     // optional synonym table file
    std::string license_map_path;  // optional repo -> licence JSON
    std::vector<std::string> formats = {"json", "csv"};
    bool cross_repo_attribution = false;
};

/// Merge a JSON config file over the defaults. Unknown keys are a
/// UsageError, as is any out-of-range value.
RunConfig load_config(const std::filesystem::path& file);

/// Canonical serialisation; the config hash embedded in every output
/// is the identity digest of this string.
std::string config_to_json_string(const RunConfig& config);
std::string config_hash(const RunConfig& config);

/// Instantiate the configured provider. The
/// STEPDEDUP_PROVIDER_ENDPOINT environment variable overrides the
/// address of an external provider.
std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& config);

}  // namespace stepdedup
