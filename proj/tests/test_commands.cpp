// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include <doctest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "stepdedup/calibration.hpp"
#include "stepdedup/commands.hpp"
#include "stepdedup/reports.hpp"

using namespace stepdedup;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = STEPDEDUP_TEST_DATA_DIR;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json read_json(const fs::path& path) {
    return nlohmann::json::parse(read_text_file(path));
}

}  // namespace

TEST_CASE("cmd_scan: fixture corpus end to end") {
    const fs::path out = fresh_dir("stepdedup_scan_out");
    RunConfig config;
    config.formats = {"json", "csv", "columnar", "html"};
    const auto result = cmd_scan(kDataDir / "corpus", out, config);

    CHECK(fs::exists(out / "steps.csv"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "clusters_exact.json"));
    CHECK(fs::exists(out / "clusters_hybrid.json"));
    CHECK(fs::exists(out / "steps.columnar.json"));
    CHECK(fs::exists(out / "steps.rows.json"));
    CHECK(fs::exists(out / "report.html"));

    const auto summary = read_json(out / "summary.json");
    CHECK(summary["totals"]["steps"] == 20);
    CHECK(summary["totals"]["files"] == 7);
    CHECK(summary["totals"]["parse_errors"] == 3);
    CHECK(summary["totals"]["unique_normalized_texts"] == 14);
    CHECK(summary["totals"]["background_steps"] == 1);
    CHECK(summary["totals"]["outline_steps"] == 2);

    // Licence classes resolved from corpus/licenses.json.
    CHECK(summary["license_mix"]["permissive"] == 13);  // repo_a
    CHECK(summary["license_mix"]["copyleft"] == 7);     // repo_b

    // Top exact cluster: the step repeated five times.
    const auto& exact = summary["strategies"]["exact"];
    CHECK(exact["top_clusters"][0]["canonical_text"] == "the request is sent");
    CHECK(exact["top_clusters"][0]["occurrence_count"] == 5);
    CHECK(exact["duplication_rate"].get<double>() == doctest::Approx(6.0 / 20.0));
    CHECK(exact["clusters_multi"] == 2);

    // Whitespace variants collapsed into one identity.
    const auto steps_csv = read_text_file(out / "steps.csv");
    CHECK(steps_csv.find("the   request") != std::string::npos);  // raw text preserved

    CHECK(result.numbers.at("steps") == 20.0);

    // Meta is embedded everywhere.
    CHECK(summary["meta"]["provider"] == "fallback");
    CHECK(summary["meta"]["config_hash"].get<std::string>().size() == 32);
}

TEST_CASE("cmd_scan: determinism, byte-identical structured outputs") {
    const fs::path out1 = fresh_dir("stepdedup_scan_det1");
    const fs::path out2 = fresh_dir("stepdedup_scan_det2");
    RunConfig config;
    config.formats = {"json", "csv", "columnar"};
    cmd_scan(kDataDir / "corpus", out1, config);
    cmd_scan(kDataDir / "corpus", out2, config);
    for (const char* name : {"steps.csv", "summary.json", "clusters_exact.json",
                             "clusters_near_exact.json", "clusters_semantic.json",
                             "clusters_hybrid.json", "steps.columnar.json", "steps.rows.json"}) {
        CAPTURE(name);
        CHECK(read_text_file(out1 / name) == read_text_file(out2 / name));
    }
}

TEST_CASE("cmd_scan: empty corpus raises DataError") {
    const fs::path empty_root = fresh_dir("stepdedup_empty_corpus");
    CHECK_THROWS_AS(cmd_scan(empty_root, fresh_dir("stepdedup_empty_out"), RunConfig{}),
                    DataError);
    CHECK_THROWS_AS(cmd_scan(empty_root / "missing", fresh_dir("stepdedup_empty_out2"),
                             RunConfig{}),
                    DataError);
}

TEST_CASE("cmd_calibrate: fixture pairs produce a full report") {
    const fs::path out = fresh_dir("stepdedup_cal_out");
    RunConfig config;
    config.bootstrap_samples = 1000;
    config.formats = {"json", "html"};
    const auto result = cmd_calibrate(kDataDir / "pairs_small.jsonl", out, config);
    CHECK(fs::exists(out / "calibration.json"));
    CHECK(fs::exists(out / "calibration.html"));

    const auto report = read_json(out / "calibration.json");
    CHECK(report["labels"]["pairs"] == 14);
    CHECK(report["labels"]["primary_positives"] == 7);
    CHECK(report["labels"]["score_free_positives"] == 7);
    CHECK(report["protocol_agreement"]["cohen_kappa_primary_vs_score_free"].get<double>() ==
          doctest::Approx(5.0 / 7.0));

    for (const char* method : {"semantic", "near_exact", "hybrid", "baseline_token_jaccard",
                               "baseline_tfidf_char_ngram"}) {
        CAPTURE(method);
        REQUIRE(report["methods"].contains(method));
        const auto& block = report["methods"][method];
        CHECK(block["primary"]["f1"].get<double>() >= 0.0);
        CHECK(block["primary"].contains("f1_ci"));
        CHECK(block["score_free"].contains("at_primary_threshold"));
        CHECK(block["score_free"].contains("best"));
        CHECK(block["sweep"].size() == 51);
        CHECK(block.contains("cv"));
    }
    // near-exact separates the whitespace/identical positives well on
    // this fixture; its best F1 must at least beat predicting-all.
    CHECK(result.numbers.at("f1_near_exact") > 2.0 * 0.5 / 1.5);
}

TEST_CASE("cmd_calibrate: identical-score determinism") {
    const fs::path out1 = fresh_dir("stepdedup_cal_det1");
    const fs::path out2 = fresh_dir("stepdedup_cal_det2");
    RunConfig config;
    config.bootstrap_samples = 1000;
    cmd_calibrate(kDataDir / "pairs_small.jsonl", out1, config);
    cmd_calibrate(kDataDir / "pairs_small.jsonl", out2, config);
    CHECK(read_text_file(out1 / "calibration.json") == read_text_file(out2 / "calibration.json"));
}

TEST_CASE("cmd_calibrate: malformed pairs file raises with a line number") {
    try {
        cmd_calibrate(kDataDir / "pairs_bad.jsonl", fresh_dir("stepdedup_cal_bad"), RunConfig{});
        FAIL("expected PairsError");
    } catch (const PairsError& e) {
        CHECK(e.line_no() == 2);
    }
}

TEST_CASE("cmd_relabel: fixture pairs and empty input") {
    const fs::path out = fresh_dir("stepdedup_rel_out");
    const auto result = cmd_relabel(kDataDir / "pairs_small.jsonl", out, RunConfig{});
    CHECK(result.numbers.at("positives") == 7.0);
    CHECK(result.numbers.at("negatives") == 7.0);
    const auto summary = read_json(out / "relabel_summary.json");
    CHECK(summary["rule_counts"]["P1"] == 6);
    CHECK(summary["disagreements"] == 2);
    const auto relabelled = load_pairs(out / "pairs_score_free.jsonl");
    REQUIRE(relabelled.size() == 14);
    for (const auto& p : relabelled) CHECK(p.protocol == Protocol::score_free);

    // Empty input: empty outputs, no kappa block.
    const fs::path empty_pairs = fs::temp_directory_path() / "stepdedup_empty.jsonl";
    write_text_file(empty_pairs, "");
    const fs::path out_empty = fresh_dir("stepdedup_rel_empty");
    cmd_relabel(empty_pairs, out_empty, RunConfig{});
    CHECK(load_pairs(out_empty / "pairs_score_free.jsonl").empty());
    const auto empty_summary = read_json(out_empty / "relabel_summary.json");
    CHECK(empty_summary["pairs"] == 0);
    CHECK_FALSE(empty_summary.contains("cohen_kappa_vs_primary"));
}

TEST_CASE("cmd_savings: end to end over scan artifacts") {
    const fs::path scan_out = fresh_dir("stepdedup_sav_scan");
    RunConfig config;
    cmd_scan(kDataDir / "corpus", scan_out, config);

    const fs::path out = fresh_dir("stepdedup_sav_out");
    const auto result = cmd_savings(scan_out, out, config);
    CHECK(fs::exists(out / "savings.json"));
    CHECK(fs::exists(out / "rosters.csv"));

    const auto savings = read_json(out / "savings.json");
    // Fixture: "the request is sent" x5 and "the response status is
    // 200 OK" x3 under exact detection.
    CHECK(savings["aggregates"]["aggregate_exact"].get<double>() == doctest::Approx(6.0));
    CHECK(savings["sensitivity"].size() == 11);
    CHECK(savings["sensitivity"][0]["aggregate"].get<double>() ==
          doctest::Approx(savings["aggregates"]["aggregate_exact"].get<double>()));
    CHECK(savings["iso25010"].size() == 6);
    CHECK(savings["tier_totals"]["steps"] == 20);

    // Tier eliminable partitions the exact aggregate.
    CHECK(savings["tier_totals"]["eliminable"].get<double>() ==
          doctest::Approx(savings["aggregates"]["aggregate_exact"].get<double>()).epsilon(1e-9));

    // Roster rows: one line per member of every cluster (exact+hybrid).
    const auto roster = read_text_file(out / "rosters.csv");
    CHECK(roster.find("the request is sent") != std::string::npos);

    CHECK(result.numbers.at("aggregate_exact") == doctest::Approx(6.0));
}

TEST_CASE("cmd_savings: missing artifacts name the file") {
    const fs::path empty_dir = fresh_dir("stepdedup_sav_missing");
    try {
        cmd_savings(empty_dir, fresh_dir("stepdedup_sav_missing_out"), RunConfig{});
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("steps.csv") != std::string::npos);
    }
}

TEST_CASE("cmd_savings: sensitivity endpoints match exact and exact-plus-surplus") {
    const fs::path scan_out = fresh_dir("stepdedup_sav_scan2");
    RunConfig config;
    cmd_scan(kDataDir / "corpus", scan_out, config);
    const fs::path out = fresh_dir("stepdedup_sav_out2");
    cmd_savings(scan_out, out, config);
    const auto savings = read_json(out / "savings.json");
    const double exact = savings["aggregates"]["aggregate_exact"].get<double>();
    const double surplus = savings["aggregates"]["hybrid_surplus"].get<double>();
    CHECK(savings["sensitivity"][0]["aggregate"].get<double>() == doctest::Approx(exact));
    CHECK(savings["sensitivity"][10]["aggregate"].get<double>() ==
          doctest::Approx(exact + surplus));
}
