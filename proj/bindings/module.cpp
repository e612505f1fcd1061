// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stepdedup/calibration.hpp"
#include "stepdedup/commands.hpp"
#include "stepdedup/detector.hpp"
#include "stepdedup/embedding.hpp"
#include "stepdedup/levenshtein.hpp"
#include "stepdedup/relabel.hpp"
#include "stepdedup/savings.hpp"
#include "stepdedup/tfidf.hpp"
#include "stepdedup/token_metrics.hpp"
#include "stepdedup/version.hpp"

namespace py = pybind11;
using namespace stepdedup;

namespace {

ParamMode param_mode(const std::string& mode) {
    if (mode == "quoted_only") return ParamMode::quoted_only;
    if (mode == "full") return ParamMode::full;
    throw py::value_error("param mode must be 'quoted_only' or 'full'");
}

SynonymTable table_from_dict(const py::dict& synonyms) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& item : synonyms)
        pairs.emplace_back(item.first.cast<std::string>(), item.second.cast<std::string>());
    return SynonymTable::from_pairs(pairs);
}

Strategy strategy_arg(const std::string& name) {
    auto s = strategy_from_string(name);
    if (!s) throw py::value_error("unknown strategy '" + name + "'");
    return *s;
}

py::dict metric_dict(const MetricPoint& m) {
    py::dict out;
    out["threshold"] = m.threshold;
    out["precision"] = m.precision;
    out["recall"] = m.recall;
    out["f1"] = m.f1;
    if (m.precision_ci) out["precision_ci"] = *m.precision_ci;
    if (m.recall_ci) out["recall_ci"] = *m.recall_ci;
    if (m.f1_ci) out["f1_ci"] = *m.f1_ci;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "duplicate-step detection and calibration for Gherkin suites";
    m.attr("__version__") = kToolVersion;

    // --- parsing ---
    py::class_<Step>(m, "Step")
        .def_property_readonly("keyword", [](const Step& s) { return to_string(s.keyword); })
        .def_readonly("raw_text", &Step::raw_text)
        .def_readonly("line_no", &Step::line_no)
        .def_readonly("has_docstring", &Step::has_docstring)
        .def_readonly("has_datatable", &Step::has_datatable)
        .def_readonly("is_background", &Step::is_background)
        .def_readonly("is_outline", &Step::is_outline);
    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("line_no", &Scenario::line_no)
        .def_readonly("is_background", &Scenario::is_background)
        .def_readonly("is_outline", &Scenario::is_outline)
        .def_readonly("steps", &Scenario::steps);
    py::class_<Feature>(m, "Feature")
        .def_readonly("name", &Feature::name)
        .def_readonly("line_no", &Feature::line_no)
        .def_readonly("scenarios", &Feature::scenarios);
    py::class_<ParseError>(m, "ParseError")
        .def_readonly("line_no", &ParseError::line_no)
        .def_readonly("message", &ParseError::message);
    py::class_<FeatureFile>(m, "FeatureFile")
        .def_readonly("repo_id", &FeatureFile::repo_id)
        .def_readonly("path", &FeatureFile::path)
        .def_readonly("features", &FeatureFile::features)
        .def_readonly("parse_errors", &FeatureFile::parse_errors)
        .def("step_count", &FeatureFile::step_count);

    m.def("parse_feature", &parse_feature, py::arg("source"), py::arg("repo_id") = "repo",
          py::arg("path") = "input.feature");
    m.def("scan_tree", &scan_tree, py::arg("root"));

    // --- identity ---
    py::class_<StepOccurrence>(m, "StepOccurrence")
        .def_readonly("repo_id", &StepOccurrence::repo_id)
        .def_readonly("path", &StepOccurrence::path)
        .def_readonly("line_no", &StepOccurrence::line_no)
        .def_property_readonly("keyword",
                               [](const StepOccurrence& o) { return to_string(o.keyword); })
        .def_readonly("raw_text", &StepOccurrence::raw_text)
        .def_readonly("normalized_text", &StepOccurrence::normalized_text)
        .def_readonly("identity_digest", &StepOccurrence::identity_digest)
        .def_readonly("has_docstring", &StepOccurrence::has_docstring)
        .def_readonly("has_datatable", &StepOccurrence::has_datatable)
        .def_readonly("is_background", &StepOccurrence::is_background)
        .def_readonly("is_outline", &StepOccurrence::is_outline)
        .def_property_readonly(
            "license_class", [](const StepOccurrence& o) { return to_string(o.license_class); });

    m.def("collect_occurrences",
          [](const std::vector<FeatureFile>& files) { return collect_occurrences(files); },
          py::arg("files"));
    m.def("whitespace_collapse", &whitespace_collapse, py::arg("text"));
    m.def("step_identity", &step_identity, py::arg("normalized_text"));
    m.def(
        "tokenize",
        [](const std::string& text, const std::string& mode) {
            return tokenize(text, param_mode(mode)).tokens;
        },
        py::arg("text"), py::arg("mode") = "quoted_only");
    m.def(
        "canonicalize",
        [](const std::vector<std::string>& tokens, const py::dict& synonyms) {
            const SynonymTable table = table_from_dict(synonyms);
            return canonicalize(TokenSequence{tokens}, table).tokens;
        },
        py::arg("tokens"), py::arg("synonyms"));

    // --- similarity ---
    m.def("levenshtein_ratio", &levenshtein_ratio, py::arg("a"), py::arg("b"));
    m.def(
        "token_jaccard",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
            return token_jaccard(TokenSequence{a}, TokenSequence{b});
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "subsequence_containment",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
            return subsequence_containment(TokenSequence{a}, TokenSequence{b});
        },
        py::arg("a"), py::arg("b"));

    py::class_<TfidfModel>(m, "TfidfModel")
        .def_static("fit", &fit_tfidf, py::arg("texts"))
        .def("cosine", [](const TfidfModel& model, const std::string& a,
                          const std::string& b) { return tfidf_cosine(model, a, b); })
        .def_property_readonly("fitted_on", [](const TfidfModel& m_) { return m_.fitted_on; })
        .def_property_readonly("vocabulary_size",
                               [](const TfidfModel& m_) { return m_.vocabulary.size(); });

    m.def(
        "embed_texts",
        [](const std::vector<std::string>& texts) {
            FallbackProvider provider;
            const auto vectors = embed_batch(provider, texts);
            std::vector<std::vector<float>> out;
            out.reserve(vectors.size());
            for (const auto& v : vectors) out.push_back(v.values);
            return out;
        },
        py::arg("texts"), "Embed with the deterministic offline fallback provider (384-dim).");
    m.def(
        "cosine",
        [](const std::vector<float>& u, const std::vector<float>& v) {
            return cosine(EmbeddingVector{u}, EmbeddingVector{v});
        },
        py::arg("u"), py::arg("v"));

    // --- detection ---
    py::class_<StrategyConfig>(m, "StrategyConfig")
        .def(py::init<>())
        .def_readwrite("cosine_threshold", &StrategyConfig::cosine_threshold)
        .def_readwrite("levenshtein_threshold", &StrategyConfig::levenshtein_threshold)
        .def_readwrite("hybrid_band_low", &StrategyConfig::hybrid_band_low)
        .def_readwrite("hybrid_band_high", &StrategyConfig::hybrid_band_high)
        .def_readwrite("allow_large", &StrategyConfig::allow_large);

    py::class_<Cluster>(m, "Cluster")
        .def_property_readonly("strategy", [](const Cluster& c) { return to_string(c.strategy); })
        .def_readonly("members", &Cluster::members)
        .def_readonly("canonical_text", &Cluster::canonical_text)
        .def_readonly("occurrence_count", &Cluster::occurrence_count)
        .def_readonly("distinct_files", &Cluster::distinct_files)
        .def_readonly("distinct_repos", &Cluster::distinct_repos);

    m.def(
        "detect",
        [](const std::vector<StepOccurrence>& occurrences, const std::string& strategy,
           const StrategyConfig& config) {
            FallbackProvider provider;
            return detect(occurrences, strategy_arg(strategy), config, &provider);
        },
        py::arg("occurrences"), py::arg("strategy"), py::arg("config") = StrategyConfig());
    m.def(
        "cluster_texts",
        [](const std::vector<std::string>& texts, const std::string& strategy,
           const StrategyConfig& config) {
            std::vector<StepOccurrence> occurrences;
            occurrences.reserve(texts.size());
            for (std::size_t i = 0; i < texts.size(); ++i) {
                StepOccurrence occ;
                occ.repo_id = "texts";
                occ.path = "texts";
                occ.line_no = static_cast<int>(i + 1);
                occ.raw_text = texts[i];
                occ.normalized_text = whitespace_collapse(texts[i]);
                occ.identity_digest = step_identity(occ.normalized_text);
                occurrences.push_back(std::move(occ));
            }
            FallbackProvider provider;
            const auto clusters = detect(occurrences, strategy_arg(strategy), config, &provider);
            std::vector<std::vector<std::size_t>> out;
            out.reserve(clusters.size());
            for (const auto& c : clusters) out.push_back(c.members);
            return out;
        },
        py::arg("texts"), py::arg("strategy") = "exact", py::arg("config") = StrategyConfig(),
        "Cluster plain texts; returns member indices per cluster.");
    m.def(
        "duplication_rate",
        [](const std::vector<Cluster>& clusters, std::size_t total_steps) {
            return duplication_rate(clusters, total_steps);
        },
        py::arg("clusters"), py::arg("total_steps"));

    // --- calibration ---
    m.def(
        "prf",
        [](const std::vector<double>& scores, const std::vector<bool>& labels, double threshold) {
            std::vector<std::uint8_t> l(labels.begin(), labels.end());
            return metric_dict(prf(scores, l, threshold));
        },
        py::arg("scores"), py::arg("labels"), py::arg("threshold"));
    m.def(
        "bootstrap_ci",
        [](const std::vector<double>& scores, const std::vector<bool>& labels, double threshold,
           int samples, std::uint64_t seed) {
            std::vector<std::uint8_t> l(labels.begin(), labels.end());
            return metric_dict(bootstrap_ci(scores, l, threshold, samples, seed));
        },
        py::arg("scores"), py::arg("labels"), py::arg("threshold"), py::arg("samples") = 10000,
        py::arg("seed") = 0);
    m.def(
        "threshold_sweep",
        [](const std::vector<double>& scores, const std::vector<bool>& labels, double lo,
           double hi, double step) {
            std::vector<std::uint8_t> l(labels.begin(), labels.end());
            const auto sweep = threshold_sweep(scores, l, lo, hi, step);
            py::list grid;
            for (const auto& point : sweep.grid) grid.append(metric_dict(point));
            py::dict out;
            out["grid"] = grid;
            out["best"] = metric_dict(sweep.best);
            return out;
        },
        py::arg("scores"), py::arg("labels"), py::arg("lo") = 0.50, py::arg("hi") = 1.00,
        py::arg("step") = 0.01);
    m.def(
        "kfold_cv",
        [](const std::vector<double>& scores, const std::vector<bool>& labels, int k,
           std::uint64_t seed) {
            std::vector<std::uint8_t> l(labels.begin(), labels.end());
            const auto cv = kfold_cv(scores, l, k, seed);
            py::dict out;
            out["fold_thresholds"] = cv.fold_thresholds;
            out["fold_f1"] = cv.fold_f1;
            out["mean_f1"] = cv.mean_f1;
            out["sd_f1"] = cv.sd_f1;
            out["min_f1"] = cv.min_f1;
            out["max_f1"] = cv.max_f1;
            return out;
        },
        py::arg("scores"), py::arg("labels"), py::arg("k") = 5, py::arg("seed") = 0);
    m.def("fleiss_kappa", &fleiss_kappa, py::arg("counts"));
    m.def(
        "cohen_kappa",
        [](const std::vector<bool>& a, const std::vector<bool>& b) {
            std::vector<std::uint8_t> ua(a.begin(), a.end()), ub(b.begin(), b.end());
            const auto stats = cohen_kappa_stats(ua, ub);
            py::dict out;
            out["kappa"] = stats.kappa;
            out["observed_agreement"] = stats.observed_agreement;
            out["expected_agreement"] = stats.expected_agreement;
            out["disagreements"] = stats.disagreements;
            return out;
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "descriptive_stats",
        [](std::vector<double> values) {
            const auto d = descriptive_stats(std::move(values));
            py::dict out;
            out["p25"] = d.p25;
            out["median"] = d.median;
            out["p75"] = d.p75;
            out["p99"] = d.p99;
            out["mean"] = d.mean;
            return out;
        },
        py::arg("values"));
    m.def(
        "spearman_rho",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return spearman_rho(x, y);
        },
        py::arg("x"), py::arg("y"));
    m.def("load_pairs", &load_pairs, py::arg("file"));
    py::class_<LabeledPair>(m, "LabeledPair")
        .def_readonly("pair_id", &LabeledPair::pair_id)
        .def_readonly("text_a", &LabeledPair::text_a)
        .def_readonly("text_b", &LabeledPair::text_b)
        .def_property_readonly("cosine_band",
                               [](const LabeledPair& p) { return to_string(p.band); })
        .def_property_readonly("label", [](const LabeledPair& p) { return to_string(p.label); })
        .def_readonly("rule_fired", &LabeledPair::rule_fired)
        .def_readonly("annotator", &LabeledPair::annotator)
        .def_property_readonly("protocol",
                               [](const LabeledPair& p) { return to_string(p.protocol); });

    // --- score-free relabelling ---
    m.def(
        "score_free_label",
        [](const std::string& a, const std::string& b, const py::object& synonyms) {
            const SynonymTable table = synonyms.is_none() ? SynonymTable::defaults()
                                                          : table_from_dict(py::cast<py::dict>(synonyms));
            const RuleVerdict verdict = score_free_label(a, b, table);
            py::dict out;
            out["label"] = to_string(verdict.label);
            out["rule"] = to_string(verdict.rule);
            out["evidence"] = verdict.evidence;
            return out;
        },
        py::arg("text_a"), py::arg("text_b"), py::arg("synonyms") = py::none());

    // --- savings ---
    m.def("cluster_savings", &cluster_savings, py::arg("occurrence_count"), py::arg("confidence"));
    m.def(
        "savings_from_counts",
        [](std::size_t exact_occ, std::size_t exact_clusters, std::size_t hybrid_occ,
           std::size_t hybrid_clusters, double hybrid_confidence) {
            const auto agg = aggregate_from_counts(exact_occ, exact_clusters, hybrid_occ,
                                                   hybrid_clusters, hybrid_confidence);
            py::dict out;
            out["aggregate_exact"] = agg.aggregate_exact;
            out["hybrid_surplus"] = agg.hybrid_surplus;
            out["aggregate_combined"] = agg.aggregate_combined;
            out["sensitivity"] = agg.sensitivity;
            return out;
        },
        py::arg("exact_occurrences"), py::arg("exact_clusters"), py::arg("hybrid_occurrences"),
        py::arg("hybrid_clusters"), py::arg("hybrid_confidence") = 0.57);
}
