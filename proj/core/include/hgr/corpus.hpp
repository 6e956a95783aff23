#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hgr {

struct Document {
    std::int64_t doc_id = 0;
    std::string orig_id;  // "id" field from the corpus file
    std::string title;
    std::string text;
    std::vector<std::int64_t> sentence_ids;  // ordered
};

struct Sentence {
    std::int64_t sent_id = 0;
    std::int64_t doc_id = 0;
    std::string text;
    std::vector<std::int64_t> entity_ids;  // sorted unique
};

struct Entity {
    std::int64_t ent_id = 0;
    std::string surface;  // canonical: case-folded, whitespace-collapsed
    std::vector<std::int64_t> mention_sent_ids;

    std::int64_t mentionCount() const { return static_cast<std::int64_t>(mention_sent_ids.size()); }
};

enum class ExtractorMode { BuiltinHeuristic, ExternalHttp };

struct ExtractorConfig {
    std::string name = "heuristic";
    ExtractorMode mode = ExtractorMode::BuiltinHeuristic;
    std::string endpoint;  // external mode only
    std::vector<std::string> abbreviation_guard = defaultAbbreviationGuard();

    static std::vector<std::string> defaultAbbreviationGuard();
};

struct Corpus {
    std::vector<Document> documents;
    std::vector<Sentence> sentences;
    std::vector<Entity> vocabulary;

    std::int64_t entityId(const std::string& surface) const;  // -1 if absent
};

/// Case-fold and collapse internal whitespace; leading/trailing whitespace trimmed.
std::string normalizeSurface(const std::string& raw);

/// Byte spans (offset, length) of each sentence. Splits after terminal
/// punctuation (. ! ?) followed by whitespace, unless the trailing token is in
/// the abbreviation guard. Text without terminal punctuation is one sentence.
std::vector<std::pair<std::size_t, std::size_t>> segmentSentences(
    const std::string& text, const std::vector<std::string>& abbreviation_guard);

/// Normalized entity surfaces in first-appearance order, deduplicated within
/// the sentence. Builtin mode: maximal runs of capitalized tokens plus tokens
/// containing digits; consecutive identical tokens inside a run collapse.
std::vector<std::string> extractEntities(const std::string& sentence,
                                         const ExtractorConfig& extractor);

/// Parse a JSONL corpus ({"id", "title"?, "text"} per line) and segment each
/// document into sentences. Entities are attached later by buildVocabulary.
Corpus loadCorpus(const std::string& path,
                  const std::vector<std::string>& abbreviation_guard =
                      ExtractorConfig::defaultAbbreviationGuard());

/// Run the extractor over every sentence, populate Sentence::entity_ids and
/// the deduplicated vocabulary. Entity ids follow first-occurrence order.
void buildVocabulary(Corpus& corpus, const ExtractorConfig& extractor);

} // namespace hgr
