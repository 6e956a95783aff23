#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hgr {

/// Dense unit-norm vector. Zero vectors (empty or featureless text) stay zero
/// and report isZero() so callers can exclude them from clustering.
struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const { return values.size(); }
    double norm() const;
    bool isZero() const;
    /// In-place L2 normalization; zero vectors are left untouched.
    void normalize();
};

enum class EmbeddingMode { BuiltinHash, ExternalHttp };

struct EmbeddingProviderConfig {
    EmbeddingMode mode = EmbeddingMode::BuiltinHash;
    std::int64_t dimension = 384;
    std::string endpoint;    // external mode only
    std::string model_name;  // external mode only
    std::int64_t batch_size = 32;
};

/// Embeds each text; output order matches input order.
/// Builtin mode: case-folded character 3-gram feature hashing with signed
/// buckets, then L2 normalization. Deterministic, zero-dependency.
std::vector<EmbeddingVector> embedTexts(const std::vector<std::string>& texts,
                                        const EmbeddingProviderConfig& cfg);

EmbeddingVector embedText(const std::string& text, const EmbeddingProviderConfig& cfg);

/// Cosine similarity. Unnormalized inputs are divided by their norms;
/// any zero-norm input yields 0. Dimension mismatch throws.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// Plain dot product (for already unit-norm vectors this equals cosine).
double dot(const EmbeddingVector& a, const EmbeddingVector& b);

double squaredDistance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace hgr
