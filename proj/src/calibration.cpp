// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "stepdedup/rng.hpp"

namespace stepdedup {

const char* to_string(PairLabel l) {
    return l == PairLabel::duplicate ? "duplicate" : "not_duplicate";
}

const char* to_string(Protocol p) { return p == Protocol::primary ? "primary" : "score_free"; }

const char* to_string(CosineBand b) {
    switch (b) {
        case CosineBand::b50_70: return "[0.50,0.70)";
        case CosineBand::b70_80: return "[0.70,0.80)";
        case CosineBand::b80_85: return "[0.80,0.85)";
        case CosineBand::b85_90: return "[0.85,0.90)";
        case CosineBand::b90_95: return "[0.90,0.95)";
        case CosineBand::b95_100: return "[0.95,1.00)";
    }
    return "?";
}

std::optional<CosineBand> band_from_string(std::string_view s) {
    static constexpr std::array<std::pair<std::string_view, CosineBand>, 6> kCanonical = {{
        {"[0.50,0.70)", CosineBand::b50_70},
        {"[0.70,0.80)", CosineBand::b70_80},
        {"[0.80,0.85)", CosineBand::b80_85},
        {"[0.85,0.90)", CosineBand::b85_90},
        {"[0.90,0.95)", CosineBand::b90_95},
        {"[0.95,1.00)", CosineBand::b95_100},
    }};
    static constexpr std::array<std::pair<std::string_view, CosineBand>, 6> kCompact = {{
        {"0.50-0.70", CosineBand::b50_70},
        {"0.70-0.80", CosineBand::b70_80},
        {"0.80-0.85", CosineBand::b80_85},
        {"0.85-0.90", CosineBand::b85_90},
        {"0.90-0.95", CosineBand::b90_95},
        {"0.95-1.00", CosineBand::b95_100},
    }};
    for (const auto& [name, band] : kCanonical)
        if (s == name) return band;
    for (const auto& [name, band] : kCompact)
        if (s == name) return band;
    return std::nullopt;
}

namespace {

using json = nlohmann::json;

LabeledPair pair_from_json(const json& row, int line_no) {
    auto required = [&](const char* key) -> const json& {
        auto it = row.find(key);
        if (it == row.end() || it->is_null())
            throw PairsError(line_no, std::string("missing field '") + key + "'");
        return *it;
    };
    LabeledPair p;
    p.pair_id = required("pair_id").get<std::string>();
    p.text_a = required("text_a").get<std::string>();
    p.text_b = required("text_b").get<std::string>();
    const std::string band = required("cosine_band").get<std::string>();
    auto parsed_band = band_from_string(band);
    if (!parsed_band) throw PairsError(line_no, "unknown cosine_band '" + band + "'");
    p.band = *parsed_band;
    const std::string label = required("label").get<std::string>();
    if (label == "duplicate") p.label = PairLabel::duplicate;
    else if (label == "not_duplicate") p.label = PairLabel::not_duplicate;
    else throw PairsError(line_no, "unknown label '" + label + "'");
    p.rule_fired = required("rule_fired").get<std::string>();
    if (auto it = row.find("annotator"); it != row.end() && it->is_string())
        p.annotator = it->get<std::string>();
    if (auto it = row.find("protocol"); it != row.end() && it->is_string()) {
        const std::string proto = it->get<std::string>();
        if (proto == "primary") p.protocol = Protocol::primary;
        else if (proto == "score_free") p.protocol = Protocol::score_free;
        else throw PairsError(line_no, "unknown protocol '" + proto + "'");
    }
    return p;
}

}  // namespace

std::vector<LabeledPair> parse_pairs(std::string_view jsonl) {
    std::vector<LabeledPair> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        std::size_t eol = jsonl.find('\n', pos);
        std::string_view line =
            jsonl.substr(pos, (eol == std::string_view::npos ? jsonl.size() : eol) - pos);
        pos = (eol == std::string_view::npos) ? jsonl.size() : eol + 1;
        ++line_no;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded()) throw PairsError(line_no, "invalid JSON");
        if (!row.is_object()) throw PairsError(line_no, "expected a JSON object");
        out.push_back(pair_from_json(row, line_no));
    }
    return out;
}

std::vector<LabeledPair> load_pairs(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw PairsError(0, "cannot open " + file.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_pairs(content);
}

std::string pair_to_json_line(const LabeledPair& pair) {
    nlohmann::ordered_json row;
    row["pair_id"] = pair.pair_id;
    row["text_a"] = pair.text_a;
    row["text_b"] = pair.text_b;
    row["cosine_band"] = to_string(pair.band);
    row["label"] = to_string(pair.label);
    row["rule_fired"] = pair.rule_fired;
    row["annotator"] = pair.annotator;
    row["protocol"] = to_string(pair.protocol);
    return row.dump();
}

void save_pairs(const std::filesystem::path& file, const std::vector<LabeledPair>& pairs) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    for (const auto& p : pairs) out << pair_to_json_line(p) << '\n';
}

namespace {

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

MetricPoint from_confusion(const Confusion& c, double threshold) {
    MetricPoint m;
    m.threshold = threshold;
    const std::size_t predicted = c.tp + c.fp;
    const std::size_t actual = c.tp + c.fn;
    if (predicted == 0) m.precision = (actual == 0) ? 1.0 : 0.0;
    else m.precision = c.tp == 0 ? 0.0 : static_cast<double>(c.tp) / predicted;
    m.recall = (actual == 0) ? 1.0 : static_cast<double>(c.tp) / actual;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

Confusion confusion_at(std::span<const double> scores, std::span<const std::uint8_t> labels,
                       double threshold) {
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        const bool actual = labels[i] != 0;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
    // Linear interpolation at rank q*(n-1).
    const double rank = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

MetricPoint prf(std::span<const double> scores, std::span<const std::uint8_t> labels,
                double threshold) {
    if (scores.empty()) throw std::invalid_argument("prf: empty input");
    if (scores.size() != labels.size())
        throw std::invalid_argument("prf: scores and labels differ in length");
    return from_confusion(confusion_at(scores, labels, threshold), threshold);
}

MetricPoint bootstrap_ci(std::span<const double> scores, std::span<const std::uint8_t> labels,
                         double threshold, int samples, std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("bootstrap_ci: need at least 1000 resamples");
    MetricPoint point = prf(scores, labels, threshold);

    const std::size_t n = scores.size();
    std::vector<double> precisions(samples), recalls(samples), f1s(samples);
    for (int b = 0; b < samples; ++b) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
        Confusion c;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t pick = static_cast<std::size_t>(rng.next_below(n));
            const bool predicted = scores[pick] >= threshold;
            const bool actual = labels[pick] != 0;
            if (predicted && actual) ++c.tp;
            else if (predicted) ++c.fp;
            else if (actual) ++c.fn;
            else ++c.tn;
        }
        const MetricPoint m = from_confusion(c, threshold);
        precisions[b] = m.precision;
        recalls[b] = m.recall;
        f1s[b] = m.f1;
    }
    auto ci = [](std::vector<double>& v) -> std::array<double, 2> {
        std::sort(v.begin(), v.end());
        return {percentile_sorted(v, 0.025), percentile_sorted(v, 0.975)};
    };
    point.precision_ci = ci(precisions);
    point.recall_ci = ci(recalls);
    point.f1_ci = ci(f1s);
    return point;
}

SweepResult threshold_sweep(std::span<const double> scores, std::span<const std::uint8_t> labels,
                            double lo, double hi, double step) {
    if (scores.empty()) throw std::invalid_argument("threshold_sweep: empty input");
    if (step <= 0.0 || hi < lo) throw std::invalid_argument("threshold_sweep: bad grid");
    SweepResult result;
    const int points = static_cast<int>(std::round((hi - lo) / step)) + 1;
    for (int i = 0; i < points; ++i) {
        const double t = lo + step * i;
        result.grid.push_back(prf(scores, labels, t));
    }
    result.best = result.grid.front();
    for (const auto& m : result.grid)
        if (m.f1 > result.best.f1) result.best = m;  // ties keep the lowest threshold
    return result;
}

CvResult kfold_cv(std::span<const double> scores, std::span<const std::uint8_t> labels, int k,
                  std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_cv: k must be >= 2");
    if (scores.size() != labels.size())
        throw std::invalid_argument("kfold_cv: scores and labels differ in length");
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] ? positives : negatives).push_back(i);
    if (positives.size() < static_cast<std::size_t>(k) ||
        negatives.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument(
            "kfold_cv: every fold needs both classes; use fewer folds or more data");

    auto shuffle = [&](std::vector<std::size_t>& v, std::uint64_t stream) {
        Rng rng = Rng::stream(seed, stream);
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.next_below(i)]);
    };
    shuffle(positives, 1);
    shuffle(negatives, 2);

    std::vector<int> fold_of(labels.size());
    for (std::size_t i = 0; i < positives.size(); ++i) fold_of[positives[i]] = static_cast<int>(i % k);
    for (std::size_t i = 0; i < negatives.size(); ++i) fold_of[negatives[i]] = static_cast<int>(i % k);

    CvResult result;
    for (int f = 0; f < k; ++f) {
        std::vector<double> train_scores, test_scores;
        std::vector<std::uint8_t> train_labels, test_labels;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (fold_of[i] == f) {
                test_scores.push_back(scores[i]);
                test_labels.push_back(labels[i]);
            } else {
                train_scores.push_back(scores[i]);
                train_labels.push_back(labels[i]);
            }
        }
        const auto sweep = threshold_sweep(train_scores, train_labels);
        const auto held_out = prf(test_scores, test_labels, sweep.best.threshold);
        result.fold_thresholds.push_back(sweep.best.threshold);
        result.fold_f1.push_back(held_out.f1);
    }
    const double mean = std::accumulate(result.fold_f1.begin(), result.fold_f1.end(), 0.0) / k;
    double ss = 0.0;
    for (double v : result.fold_f1) ss += (v - mean) * (v - mean);
    result.mean_f1 = mean;
    result.sd_f1 = std::sqrt(ss / (k - 1));
    result.min_f1 = *std::min_element(result.fold_f1.begin(), result.fold_f1.end());
    result.max_f1 = *std::max_element(result.fold_f1.begin(), result.fold_f1.end());
    return result;
}

double fleiss_kappa(const std::vector<std::vector<int>>& counts) {
    if (counts.empty()) throw std::invalid_argument("fleiss_kappa: empty table");
    const std::size_t categories = counts.front().size();
    if (categories < 2) throw std::invalid_argument("fleiss_kappa: need >= 2 categories");
    long long raters = std::accumulate(counts.front().begin(), counts.front().end(), 0LL);
    if (raters < 2) throw std::invalid_argument("fleiss_kappa: need >= 2 raters per item");
    const double n_items = static_cast<double>(counts.size());
    const double n = static_cast<double>(raters);

    std::vector<double> category_share(categories, 0.0);
    double p_bar = 0.0;
    for (const auto& row : counts) {
        if (row.size() != categories)
            throw std::invalid_argument("fleiss_kappa: ragged count matrix");
        long long row_sum = std::accumulate(row.begin(), row.end(), 0LL);
        if (row_sum != raters)
            throw std::invalid_argument("fleiss_kappa: unequal rater counts across items");
        double agree = 0.0;
        for (std::size_t j = 0; j < categories; ++j) {
            agree += static_cast<double>(row[j]) * (row[j] - 1);
            category_share[j] += row[j];
        }
        p_bar += agree / (n * (n - 1.0));
    }
    p_bar /= n_items;
    double p_e = 0.0;
    for (double share : category_share) {
        const double p = share / (n_items * n);
        p_e += p * p;
    }
    if (p_bar >= 1.0 - 1e-12) return 1.0;  // perfect agreement, even if p_e is 1
    if (1.0 - p_e < 1e-12)
        throw std::invalid_argument("fleiss_kappa: degenerate category distribution");
    return (p_bar - p_e) / (1.0 - p_e);
}

CohenKappa cohen_kappa_stats(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.empty()) throw std::invalid_argument("cohen_kappa: empty input");
    if (a.size() != b.size()) throw std::invalid_argument("cohen_kappa: length mismatch");
    const double n = static_cast<double>(a.size());
    std::size_t agree = 0, a_pos = 0, b_pos = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool xa = a[i] != 0, xb = b[i] != 0;
        agree += xa == xb;
        a_pos += xa;
        b_pos += xb;
    }
    CohenKappa out;
    out.disagreements = a.size() - agree;
    out.observed_agreement = agree / n;
    const double pa = a_pos / n, pb = b_pos / n;
    out.expected_agreement = pa * pb + (1.0 - pa) * (1.0 - pb);
    if (out.observed_agreement >= 1.0 - 1e-12) out.kappa = 1.0;
    else if (1.0 - out.expected_agreement < 1e-12) out.kappa = 0.0;
    else out.kappa = (out.observed_agreement - out.expected_agreement) /
                     (1.0 - out.expected_agreement);
    return out;
}

double cohen_kappa(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    return cohen_kappa_stats(a, b).kappa;
}

Descriptive descriptive_stats(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("descriptive_stats: empty input");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    auto nearest_rank = [&](double q) {
        std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
        rank = std::clamp<std::size_t>(rank, 1, values.size());
        return values[rank - 1];
    };
    Descriptive d;
    d.p25 = nearest_rank(0.25);
    d.median = nearest_rank(0.50);
    d.p75 = nearest_rank(0.75);
    d.p99 = nearest_rank(0.99);
    d.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    return d;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman_rho: need at least two points");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx, dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx < 1e-12 || syy < 1e-12)
        throw std::invalid_argument("spearman_rho: zero rank variance");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace stepdedup
