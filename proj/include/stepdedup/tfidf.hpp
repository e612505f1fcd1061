// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace stepdedup {

/// Character-3..5-gram TF-IDF vectoriser. tf is the raw count,
/// idf = ln((1+N)/(1+df)) + 1, vectors are L2-normalised.
struct TfidfModel {
    int ngram_min = 3;
    int ngram_max = 5;
    std::unordered_map<std::string, int> vocabulary;
    std::vector<double> idf;
    std::size_t fitted_on = 0;

    /// Sparse unit vector, (index, weight) sorted by index. A text
    /// with no in-vocabulary ngrams transforms to the zero vector.
    std::vector<std::pair<int, double>> transform(std::string_view text) const;
};

TfidfModel fit_tfidf(const std::vector<std::string>& texts);

/// Cosine of the two transformed vectors; 0 when either is zero.
double tfidf_cosine(const TfidfModel& model, std::string_view a, std::string_view b);

}  // namespace stepdedup
