#include <hgr/scoring.hpp>

#include <hgr/error.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace hgr {

double denseScore(const EmbeddingVector& query, const EmbeddingVector& passage) {
    return dot(query, passage);
}

double evidenceScore(const std::vector<std::int64_t>& passage_entities,
                     const SparseVector& w_star) {
    double acc = 0.0;
    for (std::int64_t ent : passage_entities) {
        double w = w_star.get(ent);
        if (w > 0.0) acc += std::log1p(w);
    }
    return acc;
}

std::vector<double> topicScores(const SparseVector& a_sem, const SparseMatrix& h_sem) {
    std::vector<double> dense = a_sem.toDense();
    std::vector<double> scores(static_cast<std::size_t>(h_sem.cols()), 0.0);
    for (std::int64_t k = 0; k < h_sem.cols(); ++k) {
        double acc = 0.0;
        h_sem.forEachInColumn(k, [&](std::int64_t ent, double) {
            acc += dense[static_cast<std::size_t>(ent)];
        });
        scores[static_cast<std::size_t>(k)] = acc;
    }
    return scores;
}

double semanticReward(const std::vector<std::int64_t>& passage_entities,
                      const std::vector<std::vector<std::int64_t>>& entity_clusters,
                      const std::vector<double>& topic_scores) {
    std::vector<std::int64_t> touched;
    for (std::int64_t ent : passage_entities)
        for (std::int64_t k : entity_clusters[static_cast<std::size_t>(ent)])
            touched.push_back(k);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    double acc = 0.0;
    for (std::int64_t k : touched) acc += topic_scores[static_cast<std::size_t>(k)];
    return std::log1p(acc);
}

double combineScores(double global, double evidence, double reward, const ScoringConfig& cfg) {
    return global + cfg.lambda1 * evidence + cfg.lambda2 * reward;
}

namespace {

std::shared_ptr<const PprAdjacency> buildAdjacency(const Index& index) {
    auto adj = std::make_shared<PprAdjacency>();
    adj->entity_count = index.vocabSize();
    adj->passage_count = index.documentCount();
    std::int64_t n = adj->entity_count + adj->passage_count;

    std::map<std::pair<std::int64_t, std::int64_t>, double> weights;
    // entity-passage containment, weight 1, undirected
    for (std::int64_t d = 0; d < adj->passage_count; ++d) {
        std::int64_t pnode = adj->entity_count + d;
        for (std::int64_t ent : index.doc_entities[static_cast<std::size_t>(d)]) {
            weights[{ent, pnode}] = 1.0;
            weights[{pnode, ent}] = 1.0;
        }
    }
    // entity-entity clique expansion over shared clusters
    for (std::int64_t k = 0; k < index.h_sem.cols(); ++k) {
        std::vector<std::pair<std::int64_t, double>> members;
        index.h_sem.forEachInColumn(
            k, [&](std::int64_t ent, double w) { members.emplace_back(ent, w); });
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                double w = members[a].second * members[b].second;
                weights[{members[a].first, members[b].first}] += w;
                weights[{members[b].first, members[a].first}] += w;
            }
    }

    std::vector<double> col_sums(static_cast<std::size_t>(n), 0.0);
    for (const auto& [key, w] : weights) col_sums[static_cast<std::size_t>(key.second)] += w;

    std::vector<Triplet> triplets;
    triplets.reserve(weights.size());
    for (const auto& [key, w] : weights)
        triplets.push_back({key.first, key.second, w / col_sums[static_cast<std::size_t>(key.second)]});

    adj->transition = SparseMatrix(n, n, std::move(triplets));
    adj->dangling.assign(static_cast<std::size_t>(n), false);
    for (std::int64_t j = 0; j < n; ++j)
        adj->dangling[static_cast<std::size_t>(j)] = (col_sums[static_cast<std::size_t>(j)] == 0.0);
    return adj;
}

std::mutex g_adjacency_mutex;

} // namespace

std::shared_ptr<const PprAdjacency> pprAdjacency(const Index& index) {
    std::lock_guard<std::mutex> lock(g_adjacency_mutex);
    if (!index.ppr_adjacency) index.ppr_adjacency = buildAdjacency(index);
    return index.ppr_adjacency;
}

std::vector<double> pprRestart(const PprAdjacency& adj, const std::vector<double>& combined) {
    std::int64_t n = adj.entity_count + adj.passage_count;
    std::vector<double> r(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (double s : combined) total += std::max(0.0, s);
    if (total > 0.0) {
        for (std::int64_t d = 0; d < adj.passage_count; ++d)
            r[static_cast<std::size_t>(adj.entity_count + d)] =
                std::max(0.0, combined[static_cast<std::size_t>(d)]) / total;
    } else if (adj.passage_count > 0) {
        double uniform = 1.0 / static_cast<double>(adj.passage_count);
        for (std::int64_t d = 0; d < adj.passage_count; ++d)
            r[static_cast<std::size_t>(adj.entity_count + d)] = uniform;
    }
    return r;
}

std::vector<double> pprIterate(const PprAdjacency& adj, const std::vector<double>& r_init,
                               double alpha, double tol, std::int64_t max_iters) {
    std::int64_t n = adj.entity_count + adj.passage_count;
    if (static_cast<std::int64_t>(r_init.size()) != n)
        throw DimensionError("pprIterate: restart vector has wrong dimension");

    // construction bug guard: every non-dangling column must sum to 1
    {
        auto sums = adj.transition.colSums();
        for (std::int64_t j = 0; j < n; ++j) {
            if (adj.dangling[static_cast<std::size_t>(j)]) continue;
            if (std::abs(sums[static_cast<std::size_t>(j)] - 1.0) > 1e-9)
                throw DimensionError("pprIterate: transition matrix is not column-stochastic");
        }
    }

    std::vector<double> r = r_init;
    for (std::int64_t it = 0; it < max_iters; ++it) {
        std::vector<double> walked = adj.transition.multiply(r);
        double dangling_mass = 0.0;
        for (std::int64_t j = 0; j < n; ++j)
            if (adj.dangling[static_cast<std::size_t>(j)])
                dangling_mass += r[static_cast<std::size_t>(j)];
        double step = 0.0;
        std::vector<double> next(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            auto idx = static_cast<std::size_t>(i);
            next[idx] = (1.0 - alpha) * (walked[idx] + dangling_mass * r_init[idx]) +
                        alpha * r_init[idx];
            step += std::abs(next[idx] - r[idx]);
        }
        r = std::move(next);
        if (step < tol) break;
    }
    return r;
}

PassageScores scorePassages(const QueryContext& query, const Index& index,
                            const DiffusionResult& diffusion, const ScoringConfig& cfg) {
    PassageScores scores;
    std::size_t docs = static_cast<std::size_t>(index.documentCount());
    scores.global.resize(docs);
    scores.evidence.resize(docs);
    scores.semantic_reward.resize(docs);
    scores.combined.resize(docs);
    scores.ppr.resize(docs);

    std::vector<double> topics = topicScores(diffusion.a_sem, index.h_sem);
    for (std::size_t d = 0; d < docs; ++d) {
        scores.global[d] = denseScore(query.query_embedding, index.passage_embeddings[d]);
        scores.evidence[d] = evidenceScore(index.doc_entities[d], diffusion.w_star);
        scores.semantic_reward[d] =
            semanticReward(index.doc_entities[d], index.entity_clusters, topics);
        scores.combined[d] =
            combineScores(scores.global[d], scores.evidence[d], scores.semantic_reward[d], cfg);
    }

    auto adj = pprAdjacency(index);
    std::vector<double> r_init = pprRestart(*adj, scores.combined);
    if (adj->transition.nnz() == 0) {
        // no edges at all: refinement degenerates to the normalized combined scores
        for (std::size_t d = 0; d < docs; ++d)
            scores.ppr[d] = r_init[static_cast<std::size_t>(adj->entity_count) + d];
        return scores;
    }
    std::vector<double> r_star =
        pprIterate(*adj, r_init, cfg.alpha, cfg.ppr_tol, cfg.ppr_max_iters);
    for (std::size_t d = 0; d < docs; ++d)
        scores.ppr[d] = r_star[static_cast<std::size_t>(adj->entity_count) + d];
    return scores;
}

std::vector<std::int64_t> rankTopK(const PassageScores& scores, std::int64_t k) {
    if (k < 1) throw DimensionError("rankTopK: k must be >= 1");
    std::vector<std::int64_t> order(scores.ppr.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
        if (scores.ppr[ia] != scores.ppr[ib]) return scores.ppr[ia] > scores.ppr[ib];
        if (scores.combined[ia] != scores.combined[ib])
            return scores.combined[ia] > scores.combined[ib];
        return a < b;
    });
    if (static_cast<std::int64_t>(order.size()) > k) order.resize(static_cast<std::size_t>(k));
    return order;
}

} // namespace hgr
