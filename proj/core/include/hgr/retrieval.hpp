#pragma once

#include <hgr/config.hpp>
#include <hgr/embedding.hpp>
#include <hgr/index.hpp>
#include <hgr/sparse.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hgr {

struct QueryContext {
    std::string query_text;
    std::vector<std::string> query_entities;     // normalized surfaces
    EmbeddingVector query_embedding;
    std::vector<double> sentence_similarities;   // dense, one per sentence
};

/// Extracts query entities with the index's extractor, embeds the query and
/// precomputes sentence similarities for gating.
QueryContext buildQueryContext(const Index& index, const std::string& question);

/// Seed activation: for each query entity, the top-m vocabulary entities by
/// cosine get a0(v) = cos, combined across query entities by entrywise max.
/// Negative cosines clamp to 0. With no query entities, anchors fall back to
/// the query embedding itself.
SparseVector initAnchors(const QueryContext& query, const Index& index, std::int64_t anchors_per_entity);

struct SemanticExpansion {
    SparseVector a_sem;    // gamma * Hsem Hsem^T a0
    SparseVector frontier; // a0 + a_sem
    SparseVector w;        // initial accumulated weights (= frontier)
};

/// One-off semantic expansion through the cluster incidence.
SemanticExpansion semanticExpand(const SparseVector& a0, const SparseMatrix& h_sem, double gamma);

/// Diagonal gate over sentences: similarity for the top-L query-similar
/// sentences (ties by ascending sentence id), 0 elsewhere; negatives clamp to 0.
std::vector<double> gateValues(const QueryContext& query, std::int64_t top_l);

/// delta = Hstr * (gate ⊙ (Hstr^T frontier))
SparseVector structuralStep(const SparseVector& frontier, const SparseMatrix& h_str,
                            const std::vector<double>& gate);

/// Keep entries strictly greater than epsilon.
SparseVector thresholdPrune(const SparseVector& x, double epsilon);

struct DiffusionResult {
    SparseVector w_star;
    SparseVector a_sem;
    std::vector<SparseVector> frontiers;  // frontier after each structural round
    std::vector<std::size_t> frontierSizes() const;
};

/// Full two-phase diffusion: anchors, one semantic expansion, then up to
/// t_max gated structural rounds with pruning and accumulation. Stops early
/// once the frontier empties.
DiffusionResult diffuse(const QueryContext& query, const Index& index, const DiffusionConfig& cfg);

} // namespace hgr
