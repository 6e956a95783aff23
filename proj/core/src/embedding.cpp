#include <hgr/embedding.hpp>

#include <hgr/error.hpp>
#include <hgr/http_client.hpp>

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>

namespace hgr {

double EmbeddingVector::norm() const {
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return std::sqrt(acc);
}

bool EmbeddingVector::isZero() const {
    for (double v : values)
        if (v != 0.0) return false;
    return true;
}

void EmbeddingVector::normalize() {
    double n = norm();
    if (n == 0.0) return;
    for (double& v : values) v /= n;
}

namespace {

// FNV-1a 64-bit over a byte window. Hashing scheme is frozen: the test
// suite carries an independent re-implementation and asserts equality.
std::uint64_t fnv1a64(const unsigned char* data, std::size_t len) {
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

EmbeddingVector hashEmbed(const std::string& text, std::int64_t dim) {
    EmbeddingVector vec;
    vec.values.assign(static_cast<std::size_t>(dim), 0.0);
    if (text.empty()) return vec;

    // Case-fold and pad so even single-character texts yield one 3-gram.
    std::string folded;
    folded.reserve(text.size() + 2);
    folded.push_back('^');
    for (char c : text)
        folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    folded.push_back('$');

    const auto* bytes = reinterpret_cast<const unsigned char*>(folded.data());
    for (std::size_t i = 0; i + 3 <= folded.size(); ++i) {
        std::uint64_t h = fnv1a64(bytes + i, 3);
        auto bucket = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim));
        double sign = (h >> 63) ? -1.0 : 1.0;
        vec.values[bucket] += sign;
    }
    vec.normalize();
    return vec;
}

std::vector<EmbeddingVector> embedExternal(const std::vector<std::string>& texts,
                                           const EmbeddingProviderConfig& cfg) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    std::size_t batch = static_cast<std::size_t>(std::max<std::int64_t>(1, cfg.batch_size));
    for (std::size_t start = 0; start < texts.size(); start += batch) {
        std::size_t end = std::min(texts.size(), start + batch);
        nlohmann::json body;
        body["model"] = cfg.model_name;
        body["input"] = std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                                 texts.begin() + static_cast<std::ptrdiff_t>(end));
        std::string response;
        try {
            response = postJson(cfg.endpoint, body.dump(), HttpService::Embedding);
        } catch (const ProviderError& e) {
            throw ProviderError("embedding batch starting at index " + std::to_string(start) +
                                " failed: " + e.what());
        }
        auto parsed = nlohmann::json::parse(response, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("data"))
            throw ProviderError("embedding endpoint returned malformed JSON for batch at index " +
                                std::to_string(start));
        for (const auto& item : parsed["data"]) {
            EmbeddingVector vec;
            vec.values = item.at("embedding").get<std::vector<double>>();
            if (static_cast<std::int64_t>(vec.values.size()) != cfg.dimension)
                throw ProviderError("embedding endpoint returned dimension " +
                                    std::to_string(vec.values.size()) + ", expected " +
                                    std::to_string(cfg.dimension));
            vec.normalize();
            out.push_back(std::move(vec));
        }
    }
    if (out.size() != texts.size())
        throw ProviderError("embedding endpoint returned " + std::to_string(out.size()) +
                            " vectors for " + std::to_string(texts.size()) + " inputs");
    return out;
}

} // namespace

std::vector<EmbeddingVector> embedTexts(const std::vector<std::string>& texts,
                                        const EmbeddingProviderConfig& cfg) {
    if (cfg.dimension <= 0) throw DimensionError("embedding dimension must be positive");
    if (cfg.mode == EmbeddingMode::ExternalHttp) return embedExternal(texts, cfg);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(hashEmbed(t, cfg.dimension));
    return out;
}

EmbeddingVector embedText(const std::string& text, const EmbeddingProviderConfig& cfg) {
    return embedTexts({text}, cfg).front();
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.values.size() != b.values.size())
        throw DimensionError("dot: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return acc;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

double squaredDistance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("squaredDistance: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

} // namespace hgr
