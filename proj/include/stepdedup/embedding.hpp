// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepdedup {

struct EmbeddingVector {
    std::vector<float> values;

    int dim() const { return static_cast<int>(values.size()); }
};

/// Thrown when a provider cannot produce a vector; carries the
/// provider name and the index of the failing input.
class ProviderError : public std::runtime_error {
public:
    ProviderError(std::string provider, std::size_t failing_index, const std::string& what)
        : std::runtime_error(what), provider_(std::move(provider)), failing_index_(failing_index) {}

    const std::string& provider() const { return provider_; }
    std::size_t failing_index() const { return failing_index_; }

private:
    std::string provider_;
    std::size_t failing_index_;
};

/// Sentence-embedding source. embed must be deterministic for a fixed
/// provider and input, and must return unit-normalised vectors in
/// input order.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::string name() const = 0;
    virtual int dim() const = 0;
    virtual int max_tokens() const = 0;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

/// Truncates each text to the provider's token window, embeds, and
/// enforces unit normalisation. Order preserved.
std::vector<EmbeddingVector> embed_batch(EmbeddingProvider& provider,
                                         const std::vector<std::string>& texts);

/// Dot product of unit vectors. Throws std::invalid_argument on a
/// dimension mismatch.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

/// Offline deterministic provider: hashed character-3..5-gram term
/// weights projected to 384 dimensions through a fixed seeded sign
/// projection, unit-normalised. Two runs produce bit-identical
/// vectors; useful wherever the real sentence-transformer service is
/// not attached.
class FallbackProvider final : public EmbeddingProvider {
public:
    static constexpr int kDim = 384;
    static constexpr int kMaxTokens = 256;

    std::string name() const override { return "fallback"; }
    int dim() const override { return kDim; }
    int max_tokens() const override { return kMaxTokens; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
};

/// Remote provider speaking the line protocol: POST newline-delimited
/// texts, receive one vector per line as whitespace-separated
/// decimals. The endpoint is "http://host:port[/path]". dim() is 0
/// until the first successful embed.
class ExternalProvider final : public EmbeddingProvider {
public:
    explicit ExternalProvider(std::string endpoint, int max_tokens = 256);

    std::string name() const override { return "external:" + endpoint_; }
    int dim() const override { return dim_; }
    int max_tokens() const override { return max_tokens_; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    std::string endpoint_;
    int max_tokens_;
    int dim_ = 0;
};

/// First max_tokens whitespace-separated tokens of text.
std::string truncate_tokens(const std::string& text, int max_tokens);

}  // namespace stepdedup
