#include <hgr/hypergraph.hpp>

namespace hgr {

SparseMatrix buildStructuralIncidence(const Corpus& corpus) {
    std::vector<Triplet> triplets;
    for (const auto& sent : corpus.sentences)
        for (std::int64_t ent : sent.entity_ids)
            triplets.push_back({ent, sent.sent_id, 1.0});
    return SparseMatrix(static_cast<std::int64_t>(corpus.vocabulary.size()),
                        static_cast<std::int64_t>(corpus.sentences.size()), std::move(triplets));
}

} // namespace hgr
