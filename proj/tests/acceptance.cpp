// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

// Acceptance suite: every release criterion as one pass/fail line.
// Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "stepdedup/calibration.hpp"
#include "stepdedup/commands.hpp"
#include "stepdedup/detector.hpp"
#include "stepdedup/levenshtein.hpp"
#include "stepdedup/relabel.hpp"
#include "stepdedup/reports.hpp"
#include "stepdedup/rng.hpp"
#include "stepdedup/savings.hpp"

using namespace stepdedup;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void run(const std::string& name, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::printf("[%s] %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                static_cast<long long>(ms), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<StepOccurrence> occurrences_from_texts(const std::vector<std::string>& texts) {
    std::vector<StepOccurrence> out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        StepOccurrence occ;
        occ.repo_id = "r";
        occ.path = "r/f.feature";
        occ.line_no = static_cast<int>(i + 1);
        occ.raw_text = texts[i];
        occ.normalized_text = whitespace_collapse(texts[i]);
        occ.identity_digest = step_identity(occ.normalized_text);
        out.push_back(std::move(occ));
    }
    return out;
}

std::string random_text(Rng& rng, std::size_t max_len, const std::string& alphabet) {
    std::string s;
    const std::size_t len = rng.next_below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.next_below(alphabet.size())];
    return s;
}

int oracle_levenshtein(const std::string& a, const std::string& b) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::vector<int>> d(m + 1, std::vector<int>(n + 1));
    for (std::size_t i = 0; i <= m; ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= n; ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[m][n];
}

/// All-pairs match matrix + BFS components; no union-find.
std::set<std::vector<std::size_t>> oracle_partition(const std::vector<StepOccurrence>& occs,
                                                    double theta) {
    const std::size_t n = occs.size();
    std::vector<std::vector<bool>> match(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            match[i][j] = match[j][i] =
                levenshtein_ratio(occs[i].normalized_text, occs[j].normalized_text) >= theta;
    std::vector<int> component(n, -1);
    int next = 0;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (component[seed] >= 0) continue;
        std::vector<std::size_t> queue = {seed};
        component[seed] = next;
        while (!queue.empty()) {
            const std::size_t u = queue.back();
            queue.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (match[u][v] && component[v] < 0) {
                    component[v] = next;
                    queue.push_back(v);
                }
        }
        ++next;
    }
    std::vector<std::vector<std::size_t>> groups(next);
    for (std::size_t i = 0; i < n; ++i) groups[component[i]].push_back(i);
    return {groups.begin(), groups.end()};
}

std::set<std::vector<std::size_t>> partition_of(const std::vector<Cluster>& clusters) {
    std::set<std::vector<std::size_t>> out;
    for (const auto& c : clusters) {
        auto members = c.members;
        std::sort(members.begin(), members.end());
        out.insert(members);
    }
    return out;
}

}  // namespace

int main() {
    const fs::path data_dir = STEPDEDUP_TEST_DATA_DIR;
    const fs::path source_dir = STEPDEDUP_SOURCE_DIR;

    // C1: savings aggregates from the corpus-scale fixture summary.
    run("C1 savings aggregates (893,357 / 966,212 / 934,884 +/- 1)", [&](std::string& detail) {
        const auto agg = aggregate_from_counts(975902, 82545, 1031454, 65242, 0.57);
        detail = "exact=" + std::to_string(agg.aggregate_exact) +
                 " combined=" + std::to_string(agg.aggregate_combined);
        return agg.aggregate_exact == 893357.0 && agg.sensitivity.back().second == 966212.0 &&
               agg.sensitivity.front().second == 893357.0 &&
               close(agg.aggregate_combined, 934884.0, 1.0);
    });

    // C2: duplication rate over the same fixture counts.
    run("C2 duplication rate 80.22% +/- 0.01pp", [&](std::string& detail) {
        // One large cluster plus singletons reproduces the fixture sums:
        // 82,545 clusters covering 975,902 occurrences.
        std::vector<Cluster> clusters;
        Cluster big;
        big.occurrence_count = 975902 - 82544;
        clusters.push_back(big);
        for (int i = 0; i < 82544; ++i) {
            Cluster single;
            single.occurrence_count = 1;
            clusters.push_back(single);
        }
        const double rate = duplication_rate(clusters, 1113616);
        detail = "rate=" + std::to_string(rate * 100.0) + "%";
        return close(rate * 100.0, 80.22, 0.01);
    });

    // C3: F1 harmonic-mean identities for the published operating points.
    run("C3 F1 harmonic-mean identities (five rows, +/- 0.0005)", [&](std::string&) {
        const std::vector<std::array<double, 3>> rows = {
            {0.828, 1.000, 0.906}, {0.827, 0.901, 0.862}, {0.772, 0.680, 0.723},
            {0.636, 0.947, 0.761}, {0.717, 0.903, 0.799},
        };
        for (const auto& [p, r, f1] : rows)
            if (!close(2.0 * p * r / (p + r), f1, 0.0005)) return false;
        return true;
    });

    // C4: Cohen's kappa on the constructed 1,020-pair label vectors.
    run("C4 Cohen kappa 0.470 +/- 0.002, chance disagreement 0.502 +/- 0.002",
        [&](std::string& detail) {
            std::vector<std::uint8_t> a, b;
            auto append = [&](std::size_t count, std::uint8_t va, std::uint8_t vb) {
                for (std::size_t i = 0; i < count; ++i) {
                    a.push_back(va);
                    b.push_back(vb);
                }
            };
            append(394, 1, 1);   // agreements on positive
            append(100, 1, 0);   // 494 positives in a
            append(171, 0, 1);   // 565 positives in b, 271 disagreements
            append(355, 0, 0);
            if (a.size() != 1020) return false;
            const auto stats = cohen_kappa_stats(a, b);
            detail = "kappa=" + std::to_string(stats.kappa) +
                     " chance_disagreement=" + std::to_string(1.0 - stats.expected_agreement);
            return stats.disagreements == 271 && close(stats.kappa, 0.470, 0.002) &&
                   close(1.0 - stats.expected_agreement, 0.502, 0.002);
        });

    // C5: tier table arithmetic.
    run("C5 tier arithmetic (1,113,616 steps, 347 repos, 893,357 +/- 1)",
        [&](std::string& detail) {
            const std::vector<TierRow> rows = {
                {"small", 240, 64181, 38742.0},
                {"medium", 82, 247828, 175706.0},
                {"large", 24, 624000, 504455.0},
                {"enterprise", 1, 177607, 174453.0},
            };
            std::size_t steps = 0, repos = 0;
            double eliminable = 0.0;
            for (const auto& row : rows) {
                steps += row.tier_steps;
                repos += row.repo_count;
                eliminable += row.tier_eliminable;
            }
            detail = "steps=" + std::to_string(steps) + " repos=" + std::to_string(repos) +
                     " eliminable=" + std::to_string(eliminable);
            return steps == 1113616 && repos == 347 && close(eliminable, 893357.0, 1.0);
        });

    // C6: near-exact clustering equals the brute-force oracle.
    run("C6 clustering oracle (50 fixtures, <=200 unique texts)", [&](std::string& detail) {
        StrategyConfig config;
        for (int fixture = 0; fixture < 50; ++fixture) {
            Rng rng(9000 + fixture);
            const std::size_t n = 20 + rng.next_below(181);  // up to 200
            std::vector<std::string> texts;
            static const std::vector<std::string> words = {"the", "request", "response", "is",
                                                           "sent", "status", "user", "cart",
                                                           "ok",  "a"};
            for (std::size_t i = 0; i < n; ++i) {
                std::string s;
                const std::size_t k = 1 + rng.next_below(5);
                for (std::size_t w = 0; w < k; ++w) {
                    if (w) s += ' ';
                    s += words[rng.next_below(words.size())];
                }
                texts.push_back(std::move(s));
            }
            const auto occs = occurrences_from_texts(texts);
            const auto got = partition_of(detect(occs, Strategy::near_exact, config));
            const auto expected = oracle_partition(occs, config.levenshtein_threshold);
            if (got != expected) {
                detail = "fixture " + std::to_string(fixture) + " diverged";
                return false;
            }
        }
        return true;
    });

    // C7: Levenshtein against the full-DP reference, plus banded agreement.
    run("C7 Levenshtein oracle (10,000 pairs) and banded agreement", [&](std::string& detail) {
        Rng rng(4242);
        const std::string alphabet = "abcdef";
        for (int trial = 0; trial < 10000; ++trial) {
            const std::string a = random_text(rng, 30, alphabet);
            const std::string b = random_text(rng, 30, alphabet);
            const int expected = oracle_levenshtein(a, b);
            if (levenshtein_distance(a, b) != expected) {
                detail = "distance mismatch at trial " + std::to_string(trial);
                return false;
            }
            for (double theta : {0.7, 0.8, 0.9}) {
                const std::size_t max_len = std::max(a.size(), b.size());
                const bool full = max_len == 0
                                      ? true
                                      : (1.0 - static_cast<double>(expected) /
                                                   static_cast<double>(max_len)) >= theta;
                if (levenshtein_at_least(a, b, theta) != full) {
                    detail = "banded disagreement at trial " + std::to_string(trial);
                    return false;
                }
            }
        }
        return true;
    });

    // C8: structural invariants on random fixtures.
    run("C8 exact refines hybrid; thresholds are monotone", [&](std::string& detail) {
        FallbackProvider provider;
        for (int fixture = 0; fixture < 5; ++fixture) {
            Rng rng(7100 + fixture);
            std::vector<std::string> texts;
            static const std::vector<std::string> words = {"the", "user", "clicks", "button",
                                                           "page", "is",   "shown",  "request"};
            for (int i = 0; i < 60; ++i) {
                std::string s;
                const std::size_t k = 1 + rng.next_below(5);
                for (std::size_t w = 0; w < k; ++w) {
                    if (w) s += ' ';
                    s += words[rng.next_below(words.size())];
                }
                texts.push_back(std::move(s));
            }
            const auto occs = occurrences_from_texts(texts);

            const auto exact = detect(occs, Strategy::exact, StrategyConfig{});
            const auto hybrid = detect(occs, Strategy::hybrid, StrategyConfig{}, &provider);
            std::map<std::size_t, std::size_t> hybrid_of;
            for (std::size_t c = 0; c < hybrid.size(); ++c)
                for (std::size_t m : hybrid[c].members) hybrid_of[m] = c;
            for (const auto& c : exact) {
                const std::size_t target = hybrid_of.at(c.members.front());
                for (std::size_t m : c.members)
                    if (hybrid_of.at(m) != target) {
                        detail = "exact cluster split by hybrid";
                        return false;
                    }
            }

            auto largest = [](const std::vector<Cluster>& clusters) {
                std::size_t best = 0;
                for (const auto& c : clusters) best = std::max(best, c.occurrence_count);
                return best;
            };
            StrategyConfig lo, hi;
            lo.levenshtein_threshold = 0.6;
            hi.levenshtein_threshold = 0.9;
            const auto at_lo = detect(occs, Strategy::near_exact, lo);
            const auto at_hi = detect(occs, Strategy::near_exact, hi);
            if (largest(at_hi) > largest(at_lo) || at_hi.size() < at_lo.size()) {
                detail = "threshold monotonicity violated";
                return false;
            }

            StrategyConfig cos_lo, cos_hi;
            cos_lo.cosine_threshold = 0.70;
            cos_hi.cosine_threshold = 0.95;
            const auto sem_lo = detect(occs, Strategy::semantic, cos_lo, &provider);
            const auto sem_hi = detect(occs, Strategy::semantic, cos_hi, &provider);
            if (largest(sem_hi) > largest(sem_lo) || sem_hi.size() < sem_lo.size()) {
                detail = "cosine threshold monotonicity violated";
                return false;
            }
        }
        return true;
    });

    // C9: bootstrap determinism and Monte-Carlo coverage.
    run("C9 bootstrap determinism and coverage >= 93/100", [&](std::string& detail) {
        const std::vector<double> scores = {0.9, 0.8, 0.7, 0.6, 0.4, 0.3, 0.2, 0.1};
        const std::vector<std::uint8_t> labels = {1, 1, 0, 1, 0, 1, 0, 0};
        const auto a = bootstrap_ci(scores, labels, 0.5, 2000, 11);
        const auto b = bootstrap_ci(scores, labels, 0.5, 2000, 11);
        if (!(a.f1_ci == b.f1_ci && a.precision_ci == b.precision_ci &&
              a.recall_ci == b.recall_ci)) {
            detail = "same seed produced different intervals";
            return false;
        }

        // Generative model: score s ~ U[0,1), P(positive | s) = s. At
        // threshold t: precision (1+t)/2, recall 1 - t^2.
        const double threshold = 0.7;
        const double true_p = (1.0 + threshold) / 2.0;
        const double true_r = 1.0 - threshold * threshold;
        const double true_f1 = 2.0 * true_p * true_r / (true_p + true_r);
        int covered = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Rng rng(100000 + trial);
            std::vector<double> s(200);
            std::vector<std::uint8_t> l(200);
            for (int i = 0; i < 200; ++i) {
                s[i] = rng.next_double();
                l[i] = rng.next_double() < s[i];
            }
            const auto ci = bootstrap_ci(s, l, threshold, 1000, 100000 + trial);
            if ((*ci.f1_ci)[0] <= true_f1 && true_f1 <= (*ci.f1_ci)[1]) ++covered;
        }
        detail = "coverage=" + std::to_string(covered) + "/100";
        return covered >= 93;
    });

    // C10: Fleiss kappa behaviour.
    run("C10 Fleiss kappa (perfect, frozen table, random near zero)", [&](std::string& detail) {
        std::vector<std::vector<int>> perfect(10, {3, 0});
        perfect[2] = {0, 3};
        if (fleiss_kappa(perfect) != 1.0) {
            detail = "perfect agreement != 1.0";
            return false;
        }
        const std::vector<std::vector<int>> table = {{3, 0}, {0, 3}, {2, 1}, {1, 2}, {3, 0},
                                                     {2, 1}, {0, 3}, {3, 0}, {1, 2}, {2, 1}};
        if (!close(fleiss_kappa(table), 0.3212669683257919, 1e-9)) {
            detail = "hand table mismatch: " + std::to_string(fleiss_kappa(table));
            return false;
        }
        Rng rng(606);
        std::vector<std::vector<int>> random_table;
        for (int i = 0; i < 5000; ++i) {
            int ones = 0;
            for (int r = 0; r < 3; ++r) ones += static_cast<int>(rng.next_below(2));
            random_table.push_back({3 - ones, ones});
        }
        const double kappa = fleiss_kappa(random_table);
        detail = "random kappa=" + std::to_string(kappa);
        return std::abs(kappa) < 0.05;
    });

    // C11: score-free relabeller contract.
    run("C11 score-free: symmetry, determinism, score-independence, rule examples",
        [&](std::string& detail) {
            const SynonymTable synonyms = SynonymTable::defaults();

            const auto r5 = score_free_label("I send a GET request to \"/x\"",
                                             "I send a POST request to \"/x\"", synonyms);
            if (r5.rule != RuleId::R5 || r5.label != PairLabel::not_duplicate) {
                detail = "R5 example failed";
                return false;
            }
            const auto p1 = score_free_label("the response status is 200",
                                             "the response status is 404", synonyms);
            if (p1.rule != RuleId::P1 || p1.label != PairLabel::duplicate) {
                detail = "P1 example failed";
                return false;
            }
            const auto same = score_free_label("the branches", "the branches", synonyms);
            if (same.rule != RuleId::P1 || same.label != PairLabel::duplicate) {
                detail = "identity example failed";
                return false;
            }

            Rng rng(33);
            static const std::vector<std::string> words = {
                "the", "user", "clicks", "button", "not", "GET", "POST",
                "exists", "should", "be", "visible", "200", "\"x\"", "page"};
            for (int trial = 0; trial < 500; ++trial) {
                std::string a, b;
                const std::size_t ka = 1 + rng.next_below(6), kb = 1 + rng.next_below(6);
                for (std::size_t w = 0; w < ka; ++w)
                    a += (w ? " " : "") + words[rng.next_below(words.size())];
                for (std::size_t w = 0; w < kb; ++w)
                    b += (w ? " " : "") + words[rng.next_below(words.size())];
                const auto ab = score_free_label(a, b, synonyms);
                const auto ba = score_free_label(b, a, synonyms);
                const auto again = score_free_label(a, b, synonyms);
                if (ab.label != ba.label || ab.rule != ba.rule || ab.rule != again.rule) {
                    detail = "symmetry/determinism violated on trial " + std::to_string(trial);
                    return false;
                }
            }

            // Score independence, enforced by module dependency: the
            // relabeller sources may not include the similarity-score
            // headers.
            for (const char* file : {"src/relabel.cpp", "include/stepdedup/relabel.hpp",
                                     "include/stepdedup/token_metrics.hpp",
                                     "src/token_metrics.cpp"}) {
                const std::string source = read_text_file(source_dir / file);
                for (const char* banned :
                     {"levenshtein.hpp", "embedding.hpp", "tfidf.hpp"}) {
                    if (source.find(banned) != std::string::npos) {
                        detail = std::string(file) + " includes " + banned;
                        return false;
                    }
                }
            }
            return true;
        });

    // C12: scan twice, byte-identical structured outputs.
    run("C12 end-to-end determinism of scan artifacts", [&](std::string& detail) {
        const fs::path out1 = fs::temp_directory_path() / "stepdedup_acc_scan1";
        const fs::path out2 = fs::temp_directory_path() / "stepdedup_acc_scan2";
        fs::remove_all(out1);
        fs::remove_all(out2);
        RunConfig config;
        config.formats = {"json", "csv", "columnar"};
        cmd_scan(data_dir / "corpus", out1, config);
        cmd_scan(data_dir / "corpus", out2, config);
        for (const char* name :
             {"steps.csv", "summary.json", "clusters_exact.json", "clusters_near_exact.json",
              "clusters_semantic.json", "clusters_hybrid.json", "steps.columnar.json",
              "steps.rows.json"}) {
            if (read_text_file(out1 / name) != read_text_file(out2 / name)) {
                detail = std::string(name) + " differs between runs";
                return false;
            }
        }
        fs::remove_all(out1);
        fs::remove_all(out2);
        return true;
    });

    if (g_failures != 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
