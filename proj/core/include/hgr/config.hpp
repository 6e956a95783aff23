#pragma once

#include <hgr/corpus.hpp>
#include <hgr/embedding.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace hgr {

struct ClusteringConfig {
    double birch_threshold = 0.5;   // radius bound T in unit-norm space
    std::int64_t birch_branching = 50;
    double tau = 1.0;               // kernel temperature
    std::int64_t top_d = 100;       // entities kept per semantic hyperedge
};

struct DiffusionConfig {
    double gamma = 0.1;             // semantic expansion decay
    std::int64_t t_max = 3;         // structural diffusion rounds
    double epsilon = 0.5;           // frontier pruning threshold (strict >)
    std::int64_t top_l = 1;         // query-gated sentence count
    std::int64_t anchors_per_entity = 1;
};

struct ScoringConfig {
    double lambda1 = 1.5;           // explicit-evidence weight
    double lambda2 = 0.5;           // semantic-reward weight
    double alpha = 0.5;             // PPR restart probability
    double ppr_tol = 1e-8;
    std::int64_t ppr_max_iters = 100;
    std::int64_t top_k = 5;
};

struct EngineConfig {
    EmbeddingProviderConfig embedding;
    ExtractorConfig extractor;
    ClusteringConfig clustering;
    DiffusionConfig diffusion;
    ScoringConfig scoring;
    std::string generator_endpoint;  // empty: retrieval-only

    std::string toJson() const;
    static EngineConfig fromJson(const std::string& json_text);
    static EngineConfig loadFile(const std::string& path);
    void saveFile(const std::string& path) const;

    /// Where each default comes from: "preset" for values shipped as tuned
    /// recommendations, "artifact" for implementation-chosen defaults.
    static const std::map<std::string, std::string>& parameterProvenance();
};

} // namespace hgr
