// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stepdedup/calibration.hpp"
#include "stepdedup/commands.hpp"
#include "stepdedup/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

}  // namespace

int main(int argc, char** argv) {
    using namespace stepdedup;

    CLI::App app{"static duplicate-step detector and calibration workbench for Gherkin suites"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string config_file;
    std::string out_dir = "stepdedup-out";
    std::string provider;
    std::vector<std::string> formats;
    std::vector<std::string> strategies;
    std::string synonyms;
    std::string licenses;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool allow_large = false;
    bool cross_repo = false;

    app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--provider", provider, "embedding provider: fallback or external:<url>");
    app.add_option("--format", formats, "output formats: json, csv, columnar, html")
        ->delimiter(',');
    auto* seed_opt = app.add_option("--seed", seed, "PRNG seed for bootstrap and CV");
    app.add_option("--strategy", strategies,
                   "detection strategies to run (exact, near_exact, semantic, hybrid)")
        ->delimiter(',');
    app.add_option("--synonyms", synonyms, "synonym table file (variant -> canonical lines)");
    app.add_option("--licenses", licenses, "repo licence map JSON");
    app.add_flag("--allow-large", allow_large,
                 "permit all-pairs candidate generation beyond the unique-text cap");
    app.add_flag("--cross-repo-attribution", cross_repo,
                 "attribute global clusters proportionally instead of repo-locally");

    std::string scan_root, pairs_file, artifacts_dir;
    auto* scan = app.add_subcommand("scan", "parse a corpus tree and emit steps/clusters/summary");
    scan->add_option("root", scan_root, "directory of repositories")->required();
    auto* calibrate =
        app.add_subcommand("calibrate", "evaluate strategies and baselines on labelled pairs");
    calibrate->add_option("pairs", pairs_file, "labelled pairs file (one JSON object per line)")
        ->required();
    auto* relabel = app.add_subcommand("relabel", "score-free second-pass relabelling");
    relabel->add_option("pairs", pairs_file, "labelled pairs file")->required();
    auto* savings = app.add_subcommand("savings", "consolidation-savings model over scan output");
    savings->add_option("artifacts", artifacts_dir, "scan output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }
    seed_set = seed_opt->count() > 0;

    try {
        RunConfig config;
        if (!config_file.empty()) config = load_config(config_file);
        if (!provider.empty()) config.provider = provider;
        if (seed_set) config.seed = seed;
        if (!formats.empty()) config.formats = formats;
        if (!synonyms.empty()) config.synonyms_path = synonyms;
        if (!licenses.empty()) config.license_map_path = licenses;
        if (allow_large) config.strategy.allow_large = true;
        if (cross_repo) config.cross_repo_attribution = true;
        if (!strategies.empty()) {
            config.strategies.clear();
            for (const auto& name : strategies) {
                auto s = strategy_from_string(name);
                if (!s) throw UsageError("unknown strategy '" + name + "'");
                config.strategies.push_back(*s);
            }
        }
        for (const auto& format : config.formats)
            if (format != "json" && format != "csv" && format != "columnar" && format != "html")
                throw UsageError("unknown format '" + format + "'");

        CommandResult result;
        if (scan->parsed()) result = cmd_scan(scan_root, out_dir, config);
        else if (calibrate->parsed()) result = cmd_calibrate(pairs_file, out_dir, config);
        else if (relabel->parsed()) result = cmd_relabel(pairs_file, out_dir, config);
        else result = cmd_savings(artifacts_dir, out_dir, config);

        for (const auto& path : result.outputs) std::cout << "wrote " << path.string() << "\n";
        return kExitOk;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PairsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const ProviderError& e) {
        std::cerr << "provider error [" << e.provider() << ", index " << e.failing_index()
                  << "]: " << e.what() << "\n";
        return kExitProvider;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
