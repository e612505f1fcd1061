// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace stepdedup {

namespace {

template <typename Fn>
void for_each_ngram(std::string_view text, int nmin, int nmax, Fn&& fn) {
    for (int n = nmin; n <= nmax; ++n) {
        if (text.size() < static_cast<std::size_t>(n)) break;
        for (std::size_t i = 0; i + n <= text.size(); ++i) fn(text.substr(i, n));
    }
}

}  // namespace

TfidfModel fit_tfidf(const std::vector<std::string>& texts) {
    TfidfModel model;
    model.fitted_on = texts.size();
    std::vector<int> df;
    std::vector<char> seen_in_doc;
    for (const auto& text : texts) {
        std::fill(seen_in_doc.begin(), seen_in_doc.end(), 0);
        for_each_ngram(text, model.ngram_min, model.ngram_max, [&](std::string_view gram) {
            auto [it, inserted] = model.vocabulary.try_emplace(std::string(gram),
                                                               static_cast<int>(df.size()));
            if (inserted) {
                df.push_back(0);
                seen_in_doc.push_back(0);
            }
            if (!seen_in_doc[it->second]) {
                seen_in_doc[it->second] = 1;
                ++df[it->second];
            }
        });
    }
    const double n = static_cast<double>(texts.size());
    model.idf.resize(df.size());
    for (std::size_t i = 0; i < df.size(); ++i)
        model.idf[i] = std::log((1.0 + n) / (1.0 + df[i])) + 1.0;
    return model;
}

std::vector<std::pair<int, double>> TfidfModel::transform(std::string_view text) const {
    std::map<int, double> counts;  // ordered: output sorted by index
    for_each_ngram(text, ngram_min, ngram_max, [&](std::string_view gram) {
        auto it = vocabulary.find(std::string(gram));
        if (it != vocabulary.end()) counts[it->second] += 1.0;
    });
    std::vector<std::pair<int, double>> vec;
    vec.reserve(counts.size());
    double norm_sq = 0.0;
    for (const auto& [index, tf] : counts) {
        const double w = tf * idf[index];
        vec.emplace_back(index, w);
        norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [index, w] : vec) w *= inv;
    }
    return vec;
}

double tfidf_cosine(const TfidfModel& model, std::string_view a, std::string_view b) {
    const auto va = model.transform(a);
    const auto vb = model.transform(b);
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < va.size() && j < vb.size()) {
        if (va[i].first < vb[j].first) ++i;
        else if (va[i].first > vb[j].first) ++j;
        else dot += va[i++].second * vb[j++].second;
    }
    return dot;
}

}  // namespace stepdedup
