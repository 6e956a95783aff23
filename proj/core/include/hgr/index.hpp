#pragma once

#include <hgr/clustering.hpp>
#include <hgr/config.hpp>
#include <hgr/corpus.hpp>
#include <hgr/embedding.hpp>
#include <hgr/sparse.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace hgr {

struct PprAdjacency;  // scoring.hpp

/// Fully built, read-only retrieval index. Safe to share across query threads.
struct Index {
    Corpus corpus;
    EngineConfig config;
    std::string corpus_digest;

    std::vector<EmbeddingVector> entity_embeddings;    // one per vocabulary entry
    std::vector<EmbeddingVector> sentence_embeddings;  // one per sentence
    std::vector<EmbeddingVector> passage_embeddings;   // one per document

    SparseMatrix h_str;  // |V| x |S|, binary
    SparseMatrix h_sem;  // |V| x K, kernel-weighted
    std::vector<Cluster> clusters;

    // Derived lookup tables, rebuilt on load.
    std::vector<std::vector<std::int64_t>> doc_entities;     // distinct entity ids per document
    std::vector<std::vector<std::int64_t>> entity_clusters;  // clusters with nonzero weight

    // Query-independent PPR adjacency, built on first use.
    mutable std::shared_ptr<const PprAdjacency> ppr_adjacency;

    std::int64_t vocabSize() const { return static_cast<std::int64_t>(corpus.vocabulary.size()); }
    std::int64_t sentenceCount() const { return static_cast<std::int64_t>(corpus.sentences.size()); }
    std::int64_t documentCount() const { return static_cast<std::int64_t>(corpus.documents.size()); }
    std::int64_t clusterCount() const { return static_cast<std::int64_t>(clusters.size()); }

    void rebuildLookups();
};

/// Offline pipeline: load -> segment -> extract -> embed -> cluster -> incidences.
Index buildIndex(const std::string& corpus_path, const EngineConfig& config);

/// Build from an already loaded corpus (fixtures, synthetic tests).
Index buildIndexFromCorpus(Corpus corpus, const EngineConfig& config,
                           const std::string& corpus_digest = "");

/// Persist to a directory: manifest.json, config.json, vocab.jsonl,
/// embeddings.bin, h_str.bin, h_sem.bin, clusters.json, passages.jsonl.
/// Every file is digest-checked on load; any mismatch fails closed.
void saveIndex(const Index& index, const std::string& dir);
Index loadIndex(const std::string& dir);

constexpr std::int64_t kIndexFormatVersion = 1;

struct ScoredPassage {
    std::int64_t doc_id = 0;
    std::string orig_id;
    std::string title;
    std::string text;
    double global = 0.0;
    double evidence = 0.0;
    double semantic_reward = 0.0;
    double combined = 0.0;
    double ppr = 0.0;
    std::int64_t rank = 0;
};

struct QueryResult {
    std::string question;
    std::vector<ScoredPassage> passages;  // ranked, at most top_k
    std::string prompt;
    std::string answer;          // filled when a generator endpoint is configured
    std::string generator_error; // nonempty when the generator call failed

    std::string toJson() const;
};

/// Online pipeline: anchors -> diffusion -> scoring -> PPR -> top-k + prompt.
QueryResult answerQuery(const Index& index, const std::string& question);

/// The prompt handed to a downstream generator; versioned with the engine.
std::string assemblePrompt(const std::string& question,
                           const std::vector<ScoredPassage>& passages);

/// FNV-1a 64 content hash, hex-encoded. Used for manifest digests.
std::string contentDigest(const std::string& bytes);
std::string fileDigest(const std::string& path);

} // namespace hgr
