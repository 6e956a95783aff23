// Shared test fixtures: synthetic indexes with randomized incidence matrices
// and the hand-constructed alias-gap corpus.
#pragma once

#include <hgr/index.hpp>

#include "oracles.hpp"

#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

inline std::vector<double> randomUnitVector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(dim);
    double norm_sq = 0.0;
    for (double& x : v) {
        x = gauss(rng);
        norm_sq += x * x;
    }
    double norm = std::sqrt(norm_sq);
    for (double& x : v) x /= norm;
    return v;
}

/// Synthetic index: |V| entities, |S| sentences, K clusters, random unit
/// embeddings, random binary H_str and kernel-ish H_sem weights in (0, 1].
/// Only the fields the diffusion and scoring paths touch are populated.
inline hgr::Index makeSyntheticIndex(std::int64_t vocab, std::int64_t sentences,
                                     std::int64_t clusters, std::uint64_t seed,
                                     std::int64_t dim = 16) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    hgr::Index index;
    index.config.embedding.dimension = dim;

    // one document holding everything; corpus plumbing only needs ids
    hgr::Document doc;
    doc.doc_id = 0;
    doc.orig_id = "synthetic";
    for (std::int64_t s = 0; s < sentences; ++s) {
        hgr::Sentence sent;
        sent.sent_id = s;
        sent.doc_id = 0;
        sent.text = "sentence " + std::to_string(s);
        doc.sentence_ids.push_back(s);
        index.corpus.sentences.push_back(std::move(sent));
    }
    for (std::int64_t v = 0; v < vocab; ++v) {
        hgr::Entity ent;
        ent.ent_id = v;
        ent.surface = "entity " + std::to_string(v);
        index.corpus.vocabulary.push_back(std::move(ent));
    }
    index.corpus.documents.push_back(std::move(doc));

    for (std::int64_t v = 0; v < vocab; ++v) {
        hgr::EmbeddingVector e;
        e.values = randomUnitVector(rng, static_cast<std::size_t>(dim));
        index.entity_embeddings.push_back(std::move(e));
    }
    for (std::int64_t s = 0; s < sentences; ++s) {
        hgr::EmbeddingVector e;
        e.values = randomUnitVector(rng, static_cast<std::size_t>(dim));
        index.sentence_embeddings.push_back(std::move(e));
    }
    index.passage_embeddings.push_back({randomUnitVector(rng, static_cast<std::size_t>(dim))});

    std::vector<hgr::Triplet> str_triplets;
    for (std::int64_t s = 0; s < sentences; ++s) {
        std::uniform_int_distribution<std::int64_t> count_dist(0, 4);
        std::uniform_int_distribution<std::int64_t> ent_dist(0, vocab - 1);
        std::vector<std::int64_t> members;
        for (std::int64_t c = count_dist(rng); c > 0; --c) members.push_back(ent_dist(rng));
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::int64_t v : members) {
            str_triplets.push_back({v, s, 1.0});
            index.corpus.sentences[static_cast<std::size_t>(s)].entity_ids.push_back(v);
        }
    }
    index.h_str = hgr::SparseMatrix(vocab, sentences, std::move(str_triplets));

    std::vector<hgr::Triplet> sem_triplets;
    for (std::int64_t k = 0; k < clusters; ++k) {
        std::uniform_int_distribution<std::int64_t> count_dist(1, 5);
        std::uniform_int_distribution<std::int64_t> ent_dist(0, vocab - 1);
        std::vector<std::int64_t> members;
        for (std::int64_t c = count_dist(rng); c > 0; --c) members.push_back(ent_dist(rng));
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::int64_t v : members)
            sem_triplets.push_back({v, k, 0.05 + 0.95 * uniform(rng)});
    }
    index.h_sem = hgr::SparseMatrix(vocab, clusters, std::move(sem_triplets));
    index.rebuildLookups();
    return index;
}

inline oracle::DenseMatrix denseView(const hgr::SparseMatrix& m) {
    oracle::DenseMatrix dense(static_cast<std::size_t>(m.rows()),
                              oracle::Dense(static_cast<std::size_t>(m.cols()), 0.0));
    for (const auto& t : m.toTriplets())
        dense[static_cast<std::size_t>(t.row)][static_cast<std::size_t>(t.col)] = t.value;
    return dense;
}

/// 20-document corpus with an aliasing gap. The question names two entities
/// ("Monarchos", "Veltania") that each appear verbatim in one single-topic
/// bridge document. The answer document never shares a surface with the
/// query: it uses the aliases "Monarchia" and "Veltanya", which land in the
/// same embedding clusters as the exact surfaces. Only the semantic pathway
/// can reward a passage for touching both query topics at once, so zeroing
/// H_sem (and lambda2) flips the top-1 result away from the answer document.
struct AliasGapCorpus {
    std::string jsonl;
    std::string question;
    std::string gold_id;
    std::vector<std::string> answers;
};

inline AliasGapCorpus makeAliasGapCorpus() {
    AliasGapCorpus fixture;
    fixture.question = "who wed the ruler called Monarchos of Veltania long ago";
    fixture.gold_id = "gold";
    fixture.answers = {"Qiala Senn"};

    std::vector<std::pair<std::string, std::string>> docs;
    // bridge documents: each carries exactly one of the query surfaces
    docs.emplace_back("bridge-ruler",
                      "the ruler Monarchos held court beneath the eastern gate");
    docs.emplace_back("bridge-realm",
                      "merchants of Veltania traded amber along the river road");
    // answer document: aliased surfaces only, touches both query topics
    docs.emplace_back("gold",
                      "the sovereign Monarchia wed Qiala Senn in the citadel of Veltanya");
    // filler passages about unrelated matters
    const char* fillers[] = {
        "Brindle Harbor exports salted fish and rope to the northern coast",
        "the astronomer Pell Oristano charted seven comets from a stone tower",
        "Kelvar Ridge miners struck a seam of blue quartz last spring",
        "a traveling troupe performed the Saga of Embers in Duskwell",
        "the cartographer Imre Fallon redrew the borders of the Mistral Marches",
        "Orchard Vale celebrates the first frost with lantern boats",
        "the physician Darl Evet catalogued remedies from coastal herbs",
        "Stonegate keeps a bell foundry that cast a bronze carillon",
        "the archivist Lun Prewitt restored the burned ledgers of Fenwick",
        "glassblowers of Amber Reach supply the observatory with lenses",
        "the shepherd Tam Culloch drives flocks across the high passes",
        "Riverbend millers grind winter wheat for the garrison",
        "the poet Essa Varn composed elegies for the drowned lighthouse",
        "Coppersmith Lane rings with hammers from dawn until dusk",
        "the navigator Joss Umber sailed beyond the Shattered Shoals",
        "Thornfield beekeepers trade candle wax at the solstice fair",
        "the mason Gedry Holt repaired the aqueduct after the quake",
    };
    int filler_idx = 0;
    for (const char* text : fillers)
        docs.emplace_back("filler" + std::to_string(filler_idx++), text);

    for (const auto& [id, text] : docs) {
        fixture.jsonl += "{\"id\":\"" + id + "\",\"text\":\"" + text + "\"}\n";
    }
    return fixture;
}

/// Engine config tuned for the desk-scale alias-gap scenario: a clustering
/// threshold that merges string-similar aliases without merging unrelated
/// entities, a strong semantic expansion and a topic-dominant score mix.
inline hgr::EngineConfig aliasGapConfig() {
    hgr::EngineConfig cfg;
    cfg.embedding.dimension = 384;
    cfg.clustering.birch_threshold = 0.55;
    cfg.clustering.tau = 1.0;
    cfg.clustering.top_d = 2;  // keep semantic hyperedges tight at this corpus size
    cfg.diffusion.gamma = 1.0;
    cfg.diffusion.t_max = 2;
    cfg.diffusion.epsilon = 0.05;
    cfg.diffusion.top_l = 1;
    cfg.scoring.lambda1 = 0.1;
    cfg.scoring.lambda2 = 3.0;
    cfg.scoring.alpha = 0.9;
    cfg.scoring.top_k = 5;
    return cfg;
}

inline std::string writeTempFile(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
    return path;
}

/// Same index with the semantic pathway disabled: H_sem zeroed, lambda2 = 0.
inline void disableSemanticPathway(hgr::Index& index) {
    index.h_sem = hgr::SparseMatrix(index.vocabSize(), 0, {});
    index.config.scoring.lambda2 = 0.0;
    index.rebuildLookups();
}

} // namespace fixtures
