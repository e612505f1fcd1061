// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "stepdedup/identity.hpp"

namespace stepdedup {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> strategy_names(const std::vector<Strategy>& strategies) {
    std::vector<std::string> out;
    for (Strategy s : strategies) out.emplace_back(to_string(s));
    return out;
}

}  // namespace

std::string config_to_json_string(const RunConfig& config) {
    ordered_json doc;
    doc["strategies"] = strategy_names(config.strategies);
    doc["cosine_threshold"] = config.strategy.cosine_threshold;
    doc["levenshtein_threshold"] = config.strategy.levenshtein_threshold;
    doc["hybrid_band"] = {config.strategy.hybrid_band_low, config.strategy.hybrid_band_high};
    ordered_json conf;
    for (const auto& [strategy, value] : config.strategy.confidence)
        conf[to_string(strategy)] = value;
    doc["confidence"] = conf;
    doc["max_unique_all_pairs"] = config.strategy.max_unique_all_pairs;
    doc["allow_large"] = config.strategy.allow_large;
    doc["provider"] = config.provider;
    doc["seed"] = config.seed;
    doc["bootstrap_samples"] = config.bootstrap_samples;
    doc["cv_folds"] = config.cv_folds;
    doc["sweep"] = {config.sweep_lo, config.sweep_hi, config.sweep_step};
    doc["synonyms_path"] = config.synonyms_path;
    doc["license_map_path"] = config.license_map_path;
    doc["formats"] = config.formats;
    doc["cross_repo_attribution"] = config.cross_repo_attribution;
    return doc.dump(2);
}

std::string config_hash(const RunConfig& config) {
    return step_identity(config_to_json_string(config));
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot open config file: " + file.string());
    ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + file.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config must be a JSON object");

    RunConfig config;
    try {
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            const std::string& key = it.key();
            const auto& value = it.value();
            if (key == "strategies") {
                config.strategies.clear();
                for (const auto& name : value) {
                    auto s = strategy_from_string(name.get<std::string>());
                    if (!s) throw UsageError("unknown strategy '" + name.get<std::string>() + "'");
                    config.strategies.push_back(*s);
                }
            } else if (key == "cosine_threshold") {
                config.strategy.cosine_threshold = value.get<double>();
            } else if (key == "levenshtein_threshold") {
                config.strategy.levenshtein_threshold = value.get<double>();
            } else if (key == "hybrid_band") {
                config.strategy.hybrid_band_low = value.at(0).get<double>();
                config.strategy.hybrid_band_high = value.at(1).get<double>();
            } else if (key == "confidence") {
                for (auto cit = value.begin(); cit != value.end(); ++cit) {
                    auto s = strategy_from_string(cit.key());
                    if (!s) throw UsageError("unknown strategy in confidence: " + cit.key());
                    config.strategy.confidence[*s] = cit.value().get<double>();
                }
            } else if (key == "max_unique_all_pairs") {
                config.strategy.max_unique_all_pairs = value.get<std::size_t>();
            } else if (key == "allow_large") {
                config.strategy.allow_large = value.get<bool>();
            } else if (key == "provider") {
                config.provider = value.get<std::string>();
            } else if (key == "seed") {
                config.seed = value.get<std::uint64_t>();
            } else if (key == "bootstrap_samples") {
                config.bootstrap_samples = value.get<int>();
            } else if (key == "cv_folds") {
                config.cv_folds = value.get<int>();
            } else if (key == "sweep") {
                config.sweep_lo = value.at(0).get<double>();
                config.sweep_hi = value.at(1).get<double>();
                config.sweep_step = value.at(2).get<double>();
            } else if (key == "synonyms_path") {
                config.synonyms_path = value.get<std::string>();
            } else if (key == "license_map_path") {
                config.license_map_path = value.get<std::string>();
            } else if (key == "formats") {
                config.formats = value.get<std::vector<std::string>>();
            } else if (key == "cross_repo_attribution") {
                config.cross_repo_attribution = value.get<bool>();
            } else {
                throw UsageError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + file.string() + ": " + e.what());
    }

    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(config.strategy.cosine_threshold) ||
        !in_unit(config.strategy.levenshtein_threshold) ||
        !in_unit(config.strategy.hybrid_band_low) || !in_unit(config.strategy.hybrid_band_high))
        throw UsageError("thresholds must lie in [0,1]");
    if (config.strategy.hybrid_band_low >= config.strategy.hybrid_band_high)
        throw UsageError("hybrid band low must be below high");
    for (const auto& [strategy, value] : config.strategy.confidence)
        if (!in_unit(value)) throw UsageError("confidence values must lie in [0,1]");
    for (const auto& format : config.formats)
        if (format != "json" && format != "csv" && format != "columnar" && format != "html")
            throw UsageError("unknown format '" + format + "'");
    return config;
}

std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& config) {
    std::string spec = config.provider;
    const char* endpoint_env = std::getenv("STEPDEDUP_PROVIDER_ENDPOINT");
    if (spec == "fallback") return std::make_unique<FallbackProvider>();
    if (spec == "external" || spec.rfind("external:", 0) == 0) {
        std::string endpoint = spec == "external" ? "" : spec.substr(9);
        if (endpoint_env && *endpoint_env) endpoint = endpoint_env;
        if (endpoint.empty())
            throw UsageError(
                "external provider needs an endpoint (external:<url> or "
                "STEPDEDUP_PROVIDER_ENDPOINT)");
        return std::make_unique<ExternalProvider>(endpoint);
    }
    throw UsageError("unknown provider '" + spec + "' (expected fallback or external:<url>)");
}

}  // namespace stepdedup
