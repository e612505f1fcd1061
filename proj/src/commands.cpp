// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/commands.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "stepdedup/calibration.hpp"
#include "stepdedup/levenshtein.hpp"
#include "stepdedup/relabel.hpp"
#include "stepdedup/reports.hpp"
#include "stepdedup/savings.hpp"
#include "stepdedup/tfidf.hpp"
#include "stepdedup/token_metrics.hpp"

namespace stepdedup {

namespace fs = std::filesystem;

namespace {

bool wants_format(const RunConfig& config, std::string_view format) {
    return std::find(config.formats.begin(), config.formats.end(), format) !=
           config.formats.end();
}

void write_json(CommandResult& result, const fs::path& path, const ordered_json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
    result.outputs.push_back(path);
}

SynonymTable synonyms_for(const RunConfig& config) {
    if (!config.synonyms_path.empty()) return SynonymTable::load(config.synonyms_path);
    return SynonymTable::defaults();
}

ordered_json descriptive_to_json(const Descriptive& d) {
    ordered_json out;
    out["p25"] = d.p25;
    out["median"] = d.median;
    out["p75"] = d.p75;
    out["p99"] = d.p99;
    out["mean"] = d.mean;
    return out;
}

ordered_json metric_to_json(const MetricPoint& m) {
    ordered_json out;
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

CommandResult cmd_scan(const fs::path& root, const fs::path& out_dir, const RunConfig& config) {
    if (!fs::exists(root) || !fs::is_directory(root))
        throw DataError("corpus root is not a directory: " + root.string());

    const auto files = scan_tree(root);
    if (files.empty()) throw DataError("empty corpus: no .feature files under " + root.string());

    LicenseMap licenses;
    const LicenseMap* license_ptr = nullptr;
    fs::path license_file = config.license_map_path.empty() ? root / "licenses.json"
                                                            : fs::path(config.license_map_path);
    if (fs::exists(license_file)) {
        licenses = load_license_map(license_file);
        license_ptr = &licenses;
    } else if (!config.license_map_path.empty()) {
        throw DataError("license map not found: " + license_file.string());
    }

    const auto occurrences = collect_occurrences(files, license_ptr);
    if (occurrences.empty())
        throw DataError("empty corpus: no parseable steps under " + root.string());

    auto provider = make_provider(config);
    fs::create_directories(out_dir);
    CommandResult result;

    // Steps table: CSV always, other encodings per requested formats.
    write_text_file(out_dir / "steps.csv", steps_table_csv(occurrences));
    result.outputs.push_back(out_dir / "steps.csv");

    ordered_json meta;  // provider dim may be refined after embedding runs

    std::size_t background = 0, outline = 0, docstrings = 0, datatables = 0, parse_errors = 0;
    for (const auto& occ : occurrences) {
        background += occ.is_background;
        outline += occ.is_outline;
        docstrings += occ.has_docstring;
        datatables += occ.has_datatable;
    }
    for (const auto& file : files) parse_errors += file.parse_errors.size();

    std::set<std::string_view> unique_texts;
    std::vector<double> occ_lengths;
    occ_lengths.reserve(occurrences.size());
    for (const auto& occ : occurrences) {
        unique_texts.insert(occ.normalized_text);
        occ_lengths.push_back(static_cast<double>(occ.normalized_text.size()));
    }
    std::vector<double> unique_lengths;
    unique_lengths.reserve(unique_texts.size());
    for (const auto& t : unique_texts) unique_lengths.push_back(static_cast<double>(t.size()));

    std::map<std::string, std::size_t> license_mix;
    for (const auto& occ : occurrences) ++license_mix[to_string(occ.license_class)];

    ordered_json strategies_block;
    for (Strategy strategy : config.strategies) {
        const auto clusters = detect(occurrences, strategy, config.strategy, provider.get());
        std::size_t multi = 0;
        for (const auto& c : clusters) multi += c.occurrence_count >= 2;

        ordered_json block;
        block["clusters_total"] = clusters.size();
        block["clusters_multi"] = multi;
        block["duplication_rate"] = duplication_rate(clusters, occurrences.size());
        ordered_json top = ordered_json::array();
        for (std::size_t i = 0; i < std::min<std::size_t>(clusters.size(), 10); ++i) {
            ordered_json row;
            row["canonical_text"] = clusters[i].canonical_text;
            row["occurrence_count"] = clusters[i].occurrence_count;
            row["distinct_files"] = clusters[i].distinct_files;
            row["distinct_repos"] = clusters[i].distinct_repos;
            top.push_back(std::move(row));
        }
        block["top_clusters"] = std::move(top);
        strategies_block[to_string(strategy)] = std::move(block);

        const fs::path cluster_file =
            out_dir / (std::string("clusters_") + to_string(strategy) + ".json");
        ordered_json cluster_doc;
        cluster_doc["meta"] = report_meta(config, provider->name(), provider->dim());
        cluster_doc["clusters"] = clusters_to_json(clusters, occurrences);
        write_json(result, cluster_file, cluster_doc);
    }

    // Per-repository rates always use the exact strategy: cheap and
    // well-defined on every corpus.
    const auto repo_rates = per_repo_rates(occurrences, Strategy::exact, config.strategy);
    ordered_json per_repo;
    for (const auto& [repo, rate] : repo_rates.rates) {
        ordered_json row;
        row["steps"] = repo_rates.steps.at(repo);
        row["duplication_rate"] = rate;
        per_repo[repo] = std::move(row);
    }

    meta = report_meta(config, provider->name(), provider->dim());
    ordered_json summary;
    summary["meta"] = meta;
    ordered_json totals;
    totals["repos"] = repo_rates.rates.size();
    totals["files"] = files.size();
    totals["parse_errors"] = parse_errors;
    totals["steps"] = occurrences.size();
    totals["unique_normalized_texts"] = unique_texts.size();
    totals["background_steps"] = background;
    totals["outline_steps"] = outline;
    totals["docstring_steps"] = docstrings;
    totals["datatable_steps"] = datatables;
    summary["totals"] = std::move(totals);
    summary["license_mix"] = license_mix;
    summary["length_stats"] = {
        {"occurrences", descriptive_to_json(descriptive_stats(occ_lengths))},
        {"unique_texts", descriptive_to_json(descriptive_stats(unique_lengths))},
    };
    summary["strategies"] = std::move(strategies_block);
    ordered_json repo_block;
    repo_block["strategy"] = "exact";
    repo_block["rates"] = std::move(per_repo);
    repo_block["median_rate"] = repo_rates.median;
    if (repo_rates.spearman_vs_size)
        repo_block["spearman_rate_vs_steps"] = *repo_rates.spearman_vs_size;
    else
        repo_block["spearman_rate_vs_steps"] = nullptr;
    summary["per_repo"] = std::move(repo_block);

    write_json(result, out_dir / "summary.json", summary);

    if (wants_format(config, "columnar")) {
        ordered_json doc;
        doc["meta"] = meta;
        doc["columns"] = steps_table_columnar(occurrences);
        write_json(result, out_dir / "steps.columnar.json", doc);
    }
    if (wants_format(config, "json")) {
        ordered_json doc;
        doc["meta"] = meta;
        doc["rows"] = steps_table_rows(occurrences);
        write_json(result, out_dir / "steps.rows.json", doc);
    }
    if (wants_format(config, "html")) {
        std::vector<std::pair<std::string, ordered_json>> sections;
        sections.emplace_back("totals", summary["totals"]);
        sections.emplace_back("strategies", summary["strategies"]);
        sections.emplace_back("per-repository", summary["per_repo"]);
        write_text_file(out_dir / "report.html", html_report("corpus scan", meta, sections));
        result.outputs.push_back(out_dir / "report.html");
    }

    result.numbers["steps"] = static_cast<double>(occurrences.size());
    result.numbers["files"] = static_cast<double>(files.size());
    if (summary["strategies"].contains("exact"))
        result.numbers["duplication_rate_exact"] =
            summary["strategies"]["exact"]["duplication_rate"].get<double>();
    return result;
}

namespace {

struct ScoredMethod {
    std::string name;
    std::vector<double> scores;
};

}  // namespace

CommandResult cmd_calibrate(const fs::path& pairs_file, const fs::path& out_dir,
                            const RunConfig& config) {
    const auto pairs = load_pairs(pairs_file);
    if (pairs.empty()) throw DataError("no pairs in " + pairs_file.string());

    std::vector<std::uint8_t> primary(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        primary[i] = pairs[i].label == PairLabel::duplicate;

    const SynonymTable synonyms = synonyms_for(config);
    auto [relabelled, relabel_summary] = relabel_benchmark(pairs, synonyms);
    std::vector<std::uint8_t> score_free(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        score_free[i] = relabelled[i].label == PairLabel::duplicate;

    // Embed each distinct collapsed text once.
    auto provider = make_provider(config);
    std::vector<std::string> collapsed_a(pairs.size()), collapsed_b(pairs.size());
    std::vector<std::string> unique_texts;
    std::unordered_map<std::string, std::size_t> text_index;
    auto intern = [&](const std::string& text) {
        auto [it, inserted] = text_index.try_emplace(text, unique_texts.size());
        if (inserted) unique_texts.push_back(text);
        return it->second;
    };
    std::vector<std::size_t> index_a(pairs.size()), index_b(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        collapsed_a[i] = whitespace_collapse(pairs[i].text_a);
        collapsed_b[i] = whitespace_collapse(pairs[i].text_b);
        index_a[i] = intern(collapsed_a[i]);
        index_b[i] = intern(collapsed_b[i]);
    }
    const auto vectors = embed_batch(*provider, unique_texts);

    // All step texts in the labelled set, duplicates included, fit the
    // TF-IDF baseline.
    std::vector<std::string> all_texts;
    all_texts.reserve(pairs.size() * 2);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        all_texts.push_back(collapsed_a[i]);
        all_texts.push_back(collapsed_b[i]);
    }
    const TfidfModel tfidf = fit_tfidf(all_texts);

    std::vector<ScoredMethod> methods;
    {
        ScoredMethod semantic{"semantic", {}};
        ScoredMethod near_exact{"near_exact", {}};
        ScoredMethod hybrid{"hybrid", {}};
        ScoredMethod jaccard{"baseline_token_jaccard", {}};
        ScoredMethod tfidf_cos{"baseline_tfidf_char_ngram", {}};
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const std::string& a = collapsed_a[i];
            const std::string& b = collapsed_b[i];
            const double cos = cosine(vectors[index_a[i]], vectors[index_b[i]]);
            const double lev = levenshtein_ratio(a, b);
            semantic.scores.push_back(cos);
            near_exact.scores.push_back(lev);
            // Exact pairs are always in for hybrid; outside the band the
            // pair can never be predicted positive.
            double hybrid_score;
            if (a == b) hybrid_score = 1.0;
            else if (lev >= config.strategy.hybrid_band_low &&
                     lev <= config.strategy.hybrid_band_high)
                hybrid_score = cos;
            else hybrid_score = -1.0;
            hybrid.scores.push_back(hybrid_score);
            jaccard.scores.push_back(token_jaccard(tokenize(a, ParamMode::quoted_only),
                                                   tokenize(b, ParamMode::quoted_only)));
            tfidf_cos.scores.push_back(tfidf_cosine(tfidf, a, b));
        }
        methods = {std::move(semantic), std::move(near_exact), std::move(hybrid),
                   std::move(jaccard), std::move(tfidf_cos)};
    }

    fs::create_directories(out_dir);
    CommandResult result;
    ordered_json meta = report_meta(config, provider->name(), provider->dim());

    ordered_json methods_block;
    for (const auto& method : methods) {
        ordered_json block;
        const auto sweep = threshold_sweep(method.scores, primary, config.sweep_lo,
                                           config.sweep_hi, config.sweep_step);
        const auto best = bootstrap_ci(method.scores, primary, sweep.best.threshold,
                                       config.bootstrap_samples, config.seed);
        block["primary"] = metric_to_json(best);

        ordered_json sf;
        sf["at_primary_threshold"] =
            metric_to_json(prf(method.scores, score_free, sweep.best.threshold));
        const auto sf_sweep = threshold_sweep(method.scores, score_free, config.sweep_lo,
                                              config.sweep_hi, config.sweep_step);
        sf["best"] = metric_to_json(bootstrap_ci(method.scores, score_free,
                                                 sf_sweep.best.threshold,
                                                 config.bootstrap_samples, config.seed));
        block["score_free"] = std::move(sf);

        try {
            const auto cv = kfold_cv(method.scores, primary, config.cv_folds, config.seed);
            ordered_json cv_block;
            cv_block["folds"] = config.cv_folds;
            cv_block["mean_f1"] = cv.mean_f1;
            cv_block["sd_f1"] = cv.sd_f1;
            cv_block["min_f1"] = cv.min_f1;
            cv_block["max_f1"] = cv.max_f1;
            cv_block["fold_thresholds"] = cv.fold_thresholds;
            cv_block["fold_f1"] = cv.fold_f1;
            block["cv"] = std::move(cv_block);
        } catch (const std::invalid_argument& e) {
            block["cv"] = {{"skipped", e.what()}};
        }

        ordered_json grid = ordered_json::array();
        for (const auto& point : sweep.grid) grid.push_back(metric_to_json(point));
        block["sweep"] = std::move(grid);
        methods_block[method.name] = std::move(block);
        result.numbers["f1_" + method.name] = best.f1;
    }

    ordered_json doc;
    doc["meta"] = meta;
    ordered_json labels_block;
    labels_block["pairs"] = pairs.size();
    labels_block["primary_positives"] = std::count(primary.begin(), primary.end(), 1);
    labels_block["primary_negatives"] = std::count(primary.begin(), primary.end(), 0);
    labels_block["score_free_positives"] = relabel_summary.positives;
    labels_block["score_free_negatives"] = relabel_summary.negatives;
    doc["labels"] = std::move(labels_block);
    ordered_json kappa_block;
    if (relabel_summary.kappa_vs_primary) {
        kappa_block["cohen_kappa_primary_vs_score_free"] = *relabel_summary.kappa_vs_primary;
        kappa_block["chance_disagreement"] = *relabel_summary.chance_disagreement;
        kappa_block["disagreements"] = relabel_summary.disagreements;
    }
    doc["protocol_agreement"] = std::move(kappa_block);
    doc["methods"] = std::move(methods_block);

    write_json(result, out_dir / "calibration.json", doc);

    if (wants_format(config, "html")) {
        // Condensed operating-point table plus the protocol comparison.
        ordered_json table = ordered_json::array();
        for (const auto& [name, block] : doc["methods"].items()) {
            ordered_json row;
            row["method"] = name;
            row["threshold"] = block["primary"]["threshold"];
            row["precision"] = block["primary"]["precision"];
            row["recall"] = block["primary"]["recall"];
            row["f1_primary"] = block["primary"]["f1"];
            row["f1_score_free"] = block["score_free"]["at_primary_threshold"]["f1"];
            table.push_back(std::move(row));
        }
        std::vector<std::pair<std::string, ordered_json>> sections;
        sections.emplace_back("operating points", table);
        sections.emplace_back("labels", doc["labels"]);
        sections.emplace_back("protocol agreement", doc["protocol_agreement"]);
        write_text_file(out_dir / "calibration.html",
                        html_report("calibration", meta, sections));
        result.outputs.push_back(out_dir / "calibration.html");
    }
    return result;
}

CommandResult cmd_relabel(const fs::path& pairs_file, const fs::path& out_dir,
                          const RunConfig& config) {
    const auto pairs = load_pairs(pairs_file);
    const SynonymTable synonyms = synonyms_for(config);
    auto [relabelled, summary] = relabel_benchmark(pairs, synonyms);

    fs::create_directories(out_dir);
    CommandResult result;
    const fs::path out_pairs = out_dir / "pairs_score_free.jsonl";
    save_pairs(out_pairs, relabelled);
    result.outputs.push_back(out_pairs);

    ordered_json doc;
    doc["meta"] = report_meta(config, "none", 0);
    doc["pairs"] = summary.pair_count;
    doc["positives"] = summary.positives;
    doc["negatives"] = summary.negatives;
    doc["positive_rate"] = summary.positive_rate;
    doc["rule_counts"] = summary.rule_counts;
    if (summary.kappa_vs_primary) {
        doc["cohen_kappa_vs_primary"] = *summary.kappa_vs_primary;
        doc["chance_disagreement"] = *summary.chance_disagreement;
        doc["disagreements"] = summary.disagreements;
    }
    write_json(result, out_dir / "relabel_summary.json", doc);

    if (wants_format(config, "html")) {
        std::vector<std::pair<std::string, ordered_json>> sections;
        ordered_json counts;
        counts["pairs"] = summary.pair_count;
        counts["positives"] = summary.positives;
        counts["negatives"] = summary.negatives;
        sections.emplace_back("summary", counts);
        sections.emplace_back("rule fire counts", doc["rule_counts"]);
        write_text_file(out_dir / "relabel.html",
                        html_report("score-free relabelling", doc["meta"], sections));
        result.outputs.push_back(out_dir / "relabel.html");
    }
    result.numbers["positives"] = static_cast<double>(summary.positives);
    result.numbers["negatives"] = static_cast<double>(summary.negatives);
    return result;
}

CommandResult cmd_savings(const fs::path& artifacts_dir, const fs::path& out_dir,
                          const RunConfig& config) {
    const fs::path steps_file = artifacts_dir / "steps.csv";
    const auto occurrences = read_steps_table_csv(steps_file);
    if (occurrences.empty()) throw DataError("steps table has no rows: " + steps_file.string());

    auto provider = make_provider(config);
    const bool want_hybrid = std::find(config.strategies.begin(), config.strategies.end(),
                                       Strategy::hybrid) != config.strategies.end();

    const auto exact_clusters = detect(occurrences, Strategy::exact, config.strategy);
    std::vector<Cluster> hybrid_clusters;
    if (want_hybrid)
        hybrid_clusters = detect(occurrences, Strategy::hybrid, config.strategy, provider.get());

    const SavingsReport report =
        aggregate_savings(exact_clusters, hybrid_clusters, occurrences, config.strategy,
                          config.cross_repo_attribution, provider.get());

    fs::create_directories(out_dir);
    CommandResult result;
    ordered_json meta = report_meta(config, provider->name(), provider->dim());

    ordered_json doc;
    doc["meta"] = meta;
    ordered_json aggregates;
    aggregates["aggregate_exact"] = report.aggregate_exact;
    aggregates["hybrid_surplus"] = report.hybrid_surplus;
    aggregates["hybrid_confidence"] = report.hybrid_confidence;
    aggregates["aggregate_combined"] = report.aggregate_combined;
    doc["aggregates"] = std::move(aggregates);
    ordered_json sensitivity = ordered_json::array();
    for (const auto& [conf, value] : report.sensitivity) {
        ordered_json row;
        row["hybrid_confidence"] = conf;
        row["aggregate"] = value;
        sensitivity.push_back(std::move(row));
    }
    doc["sensitivity"] = std::move(sensitivity);

    ordered_json per_repo;
    std::vector<double> rates;
    for (const auto& [repo, rs] : report.per_repo) {
        ordered_json row;
        row["steps"] = rs.steps;
        row["exact_eliminable"] = rs.exact_eliminable;
        row["eliminable"] = rs.eliminable;
        row["rate"] = rs.rate;
        per_repo[repo] = std::move(row);
        rates.push_back(rs.rate);
    }
    doc["per_repo_attribution"] = report.per_repo_attribution;
    doc["per_repo"] = std::move(per_repo);
    doc["median_rate"] = descriptive_stats(rates).median;

    ordered_json tiers = ordered_json::array();
    std::size_t tier_steps_total = 0, tier_repos_total = 0;
    double tier_eliminable_total = 0.0;
    for (const auto& row : report.tiers) {
        ordered_json t;
        t["tier"] = row.tier;
        t["repos"] = row.repo_count;
        t["steps"] = row.tier_steps;
        t["eliminable"] = row.tier_eliminable;
        tiers.push_back(std::move(t));
        tier_steps_total += row.tier_steps;
        tier_repos_total += row.repo_count;
        tier_eliminable_total += row.tier_eliminable;
    }
    ordered_json tier_totals;
    tier_totals["repos"] = tier_repos_total;
    tier_totals["steps"] = tier_steps_total;
    tier_totals["eliminable"] = tier_eliminable_total;
    doc["tiers"] = std::move(tiers);
    doc["tier_totals"] = std::move(tier_totals);

    ordered_json iso = ordered_json::array();
    for (const auto& tag : iso25010_tags()) {
        ordered_json row;
        row["characteristic"] = tag.characteristic;
        row["sub_characteristic"] = tag.sub_characteristic;
        row["report_section"] = tag.report_section;
        row["note"] = tag.note;
        iso.push_back(std::move(row));
    }
    doc["iso25010"] = std::move(iso);

    write_json(result, out_dir / "savings.json", doc);

    // Per-cluster member rosters: every member's repo/path/line.
    {
        std::ostringstream roster;
        roster << "strategy,cluster_id,canonical_text,occurrence_count,repo,path,line\n";
        auto emit = [&](const std::vector<Cluster>& clusters) {
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                for (std::size_t m : clusters[c].members) {
                    roster << to_string(clusters[c].strategy) << ',' << c << ','
                           << csv_escape(clusters[c].canonical_text) << ','
                           << clusters[c].occurrence_count << ','
                           << csv_escape(occurrences[m].repo_id) << ','
                           << csv_escape(occurrences[m].path) << ',' << occurrences[m].line_no
                           << '\n';
                }
            }
        };
        emit(exact_clusters);
        emit(hybrid_clusters);
        write_text_file(out_dir / "rosters.csv", roster.str());
        result.outputs.push_back(out_dir / "rosters.csv");
    }

    if (wants_format(config, "html")) {
        std::vector<std::pair<std::string, ordered_json>> sections;
        sections.emplace_back("aggregates", doc["aggregates"]);
        sections.emplace_back("sensitivity", doc["sensitivity"]);
        sections.emplace_back("size tiers", doc["tiers"]);
        sections.emplace_back("quality mapping", doc["iso25010"]);
        write_text_file(out_dir / "savings.html",
                        html_report("consolidation savings", meta, sections));
        result.outputs.push_back(out_dir / "savings.html");
    }

    result.numbers["aggregate_exact"] = report.aggregate_exact;
    result.numbers["aggregate_combined"] = report.aggregate_combined;
    return result;
}

}  // namespace stepdedup
