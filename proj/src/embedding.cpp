// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <unordered_map>

#include <httplib.h>

#include "stepdedup/rng.hpp"

namespace stepdedup {

std::string truncate_tokens(const std::string& text, int max_tokens) {
    if (max_tokens <= 0) return text;
    int tokens = 0;
    bool in_token = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const bool blank = text[i] == ' ' || text[i] == '\t';
        if (!blank && !in_token) {
            in_token = true;
            if (++tokens > max_tokens) return text.substr(0, i);
        } else if (blank) {
            in_token = false;
        }
    }
    return text;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim() != v.dim())
        throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(u.dim()) +
                                    " vs " + std::to_string(v.dim()) + ")");
    double dot = 0.0;
    for (int i = 0; i < u.dim(); ++i)
        dot += static_cast<double>(u.values[i]) * static_cast<double>(v.values[i]);
    return dot;
}

std::vector<EmbeddingVector> embed_batch(EmbeddingProvider& provider,
                                         const std::vector<std::string>& texts) {
    std::vector<std::string> truncated;
    truncated.reserve(texts.size());
    for (const auto& t : texts) truncated.push_back(truncate_tokens(t, provider.max_tokens()));
    auto vectors = provider.embed(truncated);
    if (vectors.size() != texts.size())
        throw ProviderError(provider.name(), vectors.size(),
                            "provider returned " + std::to_string(vectors.size()) +
                                " vectors for " + std::to_string(texts.size()) + " texts");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        double norm_sq = 0.0;
        for (float x : vectors[i].values) norm_sq += static_cast<double>(x) * x;
        if (!(norm_sq > 0.0))
            throw ProviderError(provider.name(), i, "zero-norm vector from provider");
        const double inv = 1.0 / std::sqrt(norm_sq);
        if (std::abs(norm_sq - 1.0) > 1e-9)
            for (float& x : vectors[i].values) x = static_cast<float>(x * inv);
    }
    return vectors;
}

namespace {

constexpr std::uint64_t kProjectionSeed = 0x7a3e1f4bc95d2680ULL;

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::vector<EmbeddingVector> FallbackProvider::embed(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        // Term weights over character 3..5-grams; whole text stands in
        // when it is too short to produce any.
        std::unordered_map<std::uint64_t, double> grams;
        for (int n = 3; n <= 5; ++n) {
            if (text.size() < static_cast<std::size_t>(n)) break;
            for (std::size_t i = 0; i + n <= text.size(); ++i)
                grams[fnv1a64(std::string_view(text).substr(i, n))] += 1.0;
        }
        if (grams.empty()) grams[fnv1a64(text)] = 1.0;

        std::vector<double> acc(kDim, 0.0);
        for (const auto& [hash, count] : grams) {
            const double weight = 1.0 + std::log(count);
            // Fixed sign projection: 384 deterministic bits per gram.
            Rng rng(hash ^ kProjectionSeed);
            for (int d = 0; d < kDim; d += 64) {
                std::uint64_t bits = rng.next();
                for (int b = 0; b < 64; ++b)
                    acc[d + b] += (bits >> b) & 1u ? weight : -weight;
            }
        }
        double norm_sq = 0.0;
        for (double x : acc) norm_sq += x * x;
        const double inv = 1.0 / std::sqrt(norm_sq);
        EmbeddingVector vec;
        vec.values.resize(kDim);
        for (int d = 0; d < kDim; ++d) vec.values[d] = static_cast<float>(acc[d] * inv);
        out.push_back(std::move(vec));
    }
    return out;
}

ExternalProvider::ExternalProvider(std::string endpoint, int max_tokens)
    : endpoint_(std::move(endpoint)), max_tokens_(max_tokens) {}

std::vector<EmbeddingVector> ExternalProvider::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) return {};

    // Split "http://host:port/path" into base and path.
    std::string base = endpoint_, path = "/";
    std::size_t scheme = endpoint_.find("://");
    if (scheme != std::string::npos) {
        std::size_t slash = endpoint_.find('/', scheme + 3);
        if (slash != std::string::npos) {
            base = endpoint_.substr(0, slash);
            path = endpoint_.substr(slash);
        }
    }

    std::string body;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        std::string line = texts[i];
        std::replace(line.begin(), line.end(), '\n', ' ');
        body += line;
        body += '\n';
    }

    httplib::Client client(base);
    client.set_read_timeout(60, 0);
    auto res = client.Post(path, body, "text/plain");
    if (!res)
        throw ProviderError(name(), 0, "request to " + endpoint_ + " failed: " +
                                           httplib::to_string(res.error()));
    if (res->status != 200)
        throw ProviderError(name(), 0,
                            "endpoint returned HTTP " + std::to_string(res->status));

    std::vector<EmbeddingVector> out;
    std::istringstream lines(res->body);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() && out.size() == texts.size()) break;  // trailing newline
        EmbeddingVector vec;
        std::istringstream fields(line);
        double x;
        while (fields >> x) vec.values.push_back(static_cast<float>(x));
        if (vec.values.empty())
            throw ProviderError(name(), out.size(), "unparseable vector line from endpoint");
        if (dim_ == 0) dim_ = vec.dim();
        if (vec.dim() != dim_)
            throw ProviderError(name(), out.size(),
                                "inconsistent dimension: expected " + std::to_string(dim_) +
                                    ", got " + std::to_string(vec.dim()));
        out.push_back(std::move(vec));
    }
    if (out.size() != texts.size())
        throw ProviderError(name(), out.size(),
                            "endpoint returned " + std::to_string(out.size()) + " vectors for " +
                                std::to_string(texts.size()) + " texts");
    return out;
}

}  // namespace stepdedup
