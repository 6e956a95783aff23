#include <hgr/retrieval.hpp>

#include <hgr/error.hpp>

#include <algorithm>
#include <cmath>

namespace hgr {

QueryContext buildQueryContext(const Index& index, const std::string& question) {
    QueryContext ctx;
    ctx.query_text = question;
    ctx.query_entities = extractEntities(question, index.config.extractor);
    ctx.query_embedding = embedText(question, index.config.embedding);
    ctx.sentence_similarities.reserve(index.sentence_embeddings.size());
    for (const auto& sent_emb : index.sentence_embeddings)
        ctx.sentence_similarities.push_back(dot(sent_emb, ctx.query_embedding));
    return ctx;
}

namespace {

// Top-m entity ids by cosine against `target`, ties by ascending ent_id.
std::vector<std::pair<std::int64_t, double>> topAnchors(const EmbeddingVector& target,
                                                        const Index& index, std::int64_t m) {
    std::vector<std::pair<double, std::int64_t>> scored;
    scored.reserve(index.entity_embeddings.size());
    for (std::size_t i = 0; i < index.entity_embeddings.size(); ++i)
        scored.emplace_back(cosine(target, index.entity_embeddings[i]),
                            static_cast<std::int64_t>(i));
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::size_t keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(m));
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::size_t i = 0; i < keep; ++i) out.emplace_back(scored[i].second, scored[i].first);
    return out;
}

} // namespace

SparseVector initAnchors(const QueryContext& query, const Index& index,
                         std::int64_t anchors_per_entity) {
    SparseVector a0(index.vocabSize());
    if (index.vocabSize() == 0) return a0;
    std::int64_t m = std::max<std::int64_t>(1, anchors_per_entity);

    if (query.query_entities.empty()) {
        for (auto [ent, cos_val] : topAnchors(query.query_embedding, index, m))
            a0.maxWith(ent, cos_val);
        return a0;
    }
    for (const auto& surface : query.query_entities) {
        EmbeddingVector e = embedText(surface, index.config.embedding);
        for (auto [ent, cos_val] : topAnchors(e, index, m)) a0.maxWith(ent, cos_val);
    }
    return a0;
}

SemanticExpansion semanticExpand(const SparseVector& a0, const SparseMatrix& h_sem, double gamma) {
    SemanticExpansion out;
    SparseVector cluster_mass = h_sem.transpose().multiply(a0);
    out.a_sem = h_sem.multiply(cluster_mass).scaled(gamma);
    out.frontier = a0.plus(out.a_sem);
    out.w = out.frontier;
    return out;
}

std::vector<double> gateValues(const QueryContext& query, std::int64_t top_l) {
    const auto& sims = query.sentence_similarities;
    std::vector<double> gate(sims.size(), 0.0);
    if (sims.empty()) return gate;

    std::vector<std::int64_t> order(sims.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return sims[static_cast<std::size_t>(a)] != sims[static_cast<std::size_t>(b)]
                   ? sims[static_cast<std::size_t>(a)] > sims[static_cast<std::size_t>(b)]
                   : a < b;
    });
    std::size_t keep = std::min<std::size_t>(order.size(), static_cast<std::size_t>(top_l));
    for (std::size_t i = 0; i < keep; ++i) {
        std::size_t j = static_cast<std::size_t>(order[i]);
        gate[j] = std::max(0.0, sims[j]);
    }
    return gate;
}

SparseVector structuralStep(const SparseVector& frontier, const SparseMatrix& h_str,
                            const std::vector<double>& gate) {
    SparseVector sentence_mass(h_str.cols());
    {
        // (Hstr^T f)(j) gathered per column of Hstr, gated in the same pass
        std::vector<double> acc(static_cast<std::size_t>(h_str.cols()), 0.0);
        for (const auto& [ent, value] : frontier.entries)
            h_str.forEachInRow(ent, [&](std::int64_t sent, double hv) {
                acc[static_cast<std::size_t>(sent)] += hv * value;
            });
        for (std::size_t j = 0; j < acc.size(); ++j) {
            double gated = acc[j] * gate[j];
            if (gated != 0.0)
                sentence_mass.entries.emplace_back(static_cast<std::int64_t>(j), gated);
        }
    }
    return h_str.multiply(sentence_mass);
}

SparseVector thresholdPrune(const SparseVector& x, double epsilon) {
    if (epsilon < 0.0) throw DimensionError("thresholdPrune: epsilon must be >= 0");
    return x.pruned(epsilon);
}

std::vector<std::size_t> DiffusionResult::frontierSizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(frontiers.size());
    for (const auto& f : frontiers) sizes.push_back(f.nnz());
    return sizes;
}

DiffusionResult diffuse(const QueryContext& query, const Index& index,
                        const DiffusionConfig& cfg) {
    DiffusionResult result;
    SparseVector a0 = initAnchors(query, index, cfg.anchors_per_entity);
    auto expansion = semanticExpand(a0, index.h_sem, cfg.gamma);
    result.a_sem = expansion.a_sem;

    SparseVector w = expansion.w;
    SparseVector frontier = expansion.frontier;
    std::vector<double> gate = gateValues(query, cfg.top_l);

    for (std::int64_t t = 0; t < cfg.t_max && !frontier.empty(); ++t) {
        SparseVector delta = structuralStep(frontier, index.h_str, gate);
        frontier = thresholdPrune(delta, cfg.epsilon);
        w.accumulate(frontier);
        result.frontiers.push_back(frontier);
    }
    result.w_star = std::move(w);
    return result;
}

} // namespace hgr
