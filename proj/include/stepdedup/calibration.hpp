// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepdedup {

enum class PairLabel { duplicate, not_duplicate };
enum class Protocol { primary, score_free };

/// The six cosine-similarity stratification bands.
enum class CosineBand { b50_70, b70_80, b80_85, b85_90, b90_95, b95_100 };

const char* to_string(PairLabel l);
const char* to_string(Protocol p);
const char* to_string(CosineBand b);
std::optional<CosineBand> band_from_string(std::string_view s);

/// One benchmark row: two step texts plus label provenance.
struct LabeledPair {
    std::string pair_id;
    std::string text_a;
    std::string text_b;
    CosineBand band = CosineBand::b50_70;
    PairLabel label = PairLabel::not_duplicate;
    std::string rule_fired;
    std::string annotator;
    Protocol protocol = Protocol::primary;
};

/// Malformed benchmark input; carries the 1-based line number.
class PairsError : public std::runtime_error {
public:
    PairsError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}
    int line_no() const { return line_no_; }

private:
    int line_no_;
};

/// Load newline-delimited records (one object per line). Throws
/// PairsError on the first malformed row.
std::vector<LabeledPair> load_pairs(const std::filesystem::path& file);
std::vector<LabeledPair> parse_pairs(std::string_view jsonl);
std::string pair_to_json_line(const LabeledPair& pair);
void save_pairs(const std::filesystem::path& file, const std::vector<LabeledPair>& pairs);

struct MetricPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<std::array<double, 2>> precision_ci;
    std::optional<std::array<double, 2>> recall_ci;
    std::optional<std::array<double, 2>> f1_ci;
};

/// Classify score >= threshold as predicted duplicate and compute
/// precision/recall/F1. Conventions: with no predicted positives,
/// precision is 1 when no actual positives exist and 0 otherwise;
/// recall is 1 when no actual positives exist; F1 is 0 when P+R = 0.
MetricPoint prf(std::span<const double> scores, std::span<const std::uint8_t> labels,
                double threshold);

/// Percentile bootstrap (resample pairs with replacement) 95% CIs.
/// Deterministic for a fixed seed and invariant under parallel
/// evaluation: resample b draws from Rng::stream(seed, b).
MetricPoint bootstrap_ci(std::span<const double> scores, std::span<const std::uint8_t> labels,
                         double threshold, int samples = 10000, std::uint64_t seed = 0);

struct SweepResult {
    std::vector<MetricPoint> grid;
    MetricPoint best;  // argmax F1, ties resolved to the lowest threshold
};

SweepResult threshold_sweep(std::span<const double> scores, std::span<const std::uint8_t> labels,
                            double lo = 0.50, double hi = 1.00, double step = 0.01);

struct CvResult {
    std::vector<double> fold_thresholds;
    std::vector<double> fold_f1;
    double mean_f1 = 0.0;
    double sd_f1 = 0.0;  // sample standard deviation across folds
    double min_f1 = 0.0;
    double max_f1 = 0.0;
};

/// Stratified k-fold: per fold the threshold is chosen on the train
/// partition and F1 is evaluated on the held-out partition. Throws
/// std::invalid_argument when any fold would miss a class.
CvResult kfold_cv(std::span<const double> scores, std::span<const std::uint8_t> labels, int k = 5,
                  std::uint64_t seed = 0);

/// Fleiss' kappa over an item x category count matrix; every item must
/// have the same number of raters n >= 2. Returns 1.0 on perfect
/// observed agreement.
double fleiss_kappa(const std::vector<std::vector<int>>& counts);

struct CohenKappa {
    double kappa = 0.0;
    double observed_agreement = 0.0;
    double expected_agreement = 0.0;
    std::size_t disagreements = 0;
};

CohenKappa cohen_kappa_stats(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double cohen_kappa(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

struct Descriptive {
    double p25 = 0.0;
    double median = 0.0;
    double p75 = 0.0;
    double p99 = 0.0;
    double mean = 0.0;
};

/// Nearest-rank percentiles plus mean. Throws on empty input.
Descriptive descriptive_stats(std::vector<double> values);

/// Spearman's rho with average ranks for ties. Throws on length
/// mismatch, n < 2, or zero rank variance.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace stepdedup
