#pragma once

#include <hgr/index.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hgr {

struct QAExample {
    std::string question;
    std::vector<std::string> answers;       // at least one
    std::vector<std::string> gold_doc_ids;  // optional, corpus "id" strings
};

struct ExampleRecord {
    std::size_t example_index = 0;
    std::string question;
    bool subem = false;
    bool has_gold = false;
    bool recall_hit = false;
    std::vector<std::string> retrieved_ids;
    std::string warning;  // nonempty for skipped/malformed examples
};

struct EvalReport {
    std::int64_t n = 0;            // evaluated examples
    std::int64_t skipped = 0;      // malformed examples
    std::int64_t gold_examples = 0;
    double subem = 0.0;
    double recall_at_k = 0.0;
    std::int64_t k = 5;
    bool retrieval_only = true;    // SubEM computed on retrieved text, not a generator answer
    std::vector<ExampleRecord> records;

    std::string toJson() const;
    std::string summary() const;
};

/// Normalization applied to answers and predictions before the substring
/// test: case-fold, collapse whitespace, strip surrounding punctuation.
std::string normalizeAnswer(const std::string& text);

/// True iff any normalized answer is a substring of the normalized prediction.
bool subem(const std::string& prediction, const std::vector<std::string>& answers);

/// True iff any gold id appears within the first k ranked ids.
bool recallAtK(const std::vector<std::string>& ranked_ids,
               const std::vector<std::string>& gold_ids, std::int64_t k);

std::vector<QAExample> loadDataset(const std::string& path);

/// Runs answerQuery per example. Without a generator endpoint, SubEM is
/// matched against the concatenated top-k passage texts (retrieval-only
/// upper bound, flagged in the report).
EvalReport runEval(const Index& index, const std::string& dataset_path, std::int64_t k);

} // namespace hgr
