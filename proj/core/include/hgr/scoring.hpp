#pragma once

#include <hgr/config.hpp>
#include <hgr/index.hpp>
#include <hgr/retrieval.hpp>
#include <hgr/sparse.hpp>

#include <cstdint>
#include <vector>

namespace hgr {

/// Query-independent PPR transition structure over entity + passage nodes.
/// Node layout: entities first (0..|V|-1), then passages (|V|..|V|+P-1).
struct PprAdjacency {
    SparseMatrix transition;     // column-stochastic except dangling columns
    std::vector<bool> dangling;  // columns with no outgoing edges
    std::int64_t entity_count = 0;
    std::int64_t passage_count = 0;
};

struct PassageScores {
    std::vector<double> global;
    std::vector<double> evidence;
    std::vector<double> semantic_reward;
    std::vector<double> combined;
    std::vector<double> ppr;
};

double denseScore(const EmbeddingVector& query, const EmbeddingVector& passage);

/// Sum over the passage's distinct entities of ln(1 + w(v)).
double evidenceScore(const std::vector<std::int64_t>& passage_entities, const SparseVector& w_star);

/// Per-cluster activation: sum of a_sem over entities with nonzero incidence
/// in that cluster column.
std::vector<double> topicScores(const SparseVector& a_sem, const SparseMatrix& h_sem);

/// ln(1 + sum of topic scores over the distinct clusters the passage touches).
double semanticReward(const std::vector<std::int64_t>& passage_entities,
                      const std::vector<std::vector<std::int64_t>>& entity_clusters,
                      const std::vector<double>& topic_scores);

double combineScores(double global, double evidence, double reward, const ScoringConfig& cfg);

/// Undirected entity-passage containment edges (weight 1) plus entity-entity
/// clique-expansion edges (summed incidence products over shared clusters),
/// column-normalized. Cached on the index after the first call.
std::shared_ptr<const PprAdjacency> pprAdjacency(const Index& index);

/// Restart distribution over passage nodes proportional to max(combined, 0);
/// uniform over passages when every score is <= 0.
std::vector<double> pprRestart(const PprAdjacency& adj, const std::vector<double>& combined);

/// Power iteration r <- (1-alpha) M r + alpha r_init with dangling columns
/// redirected to r_init. Stops when the L1 step falls below tol.
std::vector<double> pprIterate(const PprAdjacency& adj, const std::vector<double>& r_init,
                               double alpha, double tol, std::int64_t max_iters);

/// All per-passage score components for one query.
PassageScores scorePassages(const QueryContext& query, const Index& index,
                            const DiffusionResult& diffusion, const ScoringConfig& cfg);

/// Passage ids by descending ppr, ties by descending combined, then ascending id.
std::vector<std::int64_t> rankTopK(const PassageScores& scores, std::int64_t k);

} // namespace hgr
