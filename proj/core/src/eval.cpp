#include <hgr/eval.hpp>

#include <hgr/error.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace hgr {

std::string normalizeAnswer(const std::string& text) {
    std::string folded;
    folded.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !folded.empty();
            continue;
        }
        if (pending_space) {
            folded.push_back(' ');
            pending_space = false;
        }
        folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    std::size_t start = 0, end = folded.size();
    while (start < end && std::ispunct(static_cast<unsigned char>(folded[start]))) ++start;
    while (end > start && std::ispunct(static_cast<unsigned char>(folded[end - 1]))) --end;
    return folded.substr(start, end - start);
}

bool subem(const std::string& prediction, const std::vector<std::string>& answers) {
    std::string pred = normalizeAnswer(prediction);
    if (pred.empty()) return false;
    for (const auto& answer : answers) {
        std::string norm = normalizeAnswer(answer);
        if (!norm.empty() && pred.find(norm) != std::string::npos) return true;
    }
    return false;
}

bool recallAtK(const std::vector<std::string>& ranked_ids,
               const std::vector<std::string>& gold_ids, std::int64_t k) {
    if (k < 1) throw DimensionError("recallAtK: k must be >= 1");
    std::size_t limit = std::min<std::size_t>(ranked_ids.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < limit; ++i)
        if (std::find(gold_ids.begin(), gold_ids.end(), ranked_ids[i]) != gold_ids.end())
            return true;
    return false;
}

std::vector<QAExample> loadDataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path);
    std::vector<QAExample> examples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = json::parse(line, nullptr, false);
        QAExample ex;
        if (j.is_discarded() || !j.is_object() || !j.contains("question") ||
            !j.contains("answers") || !j["answers"].is_array() || j["answers"].empty()) {
            // keep the slot: runEval records a warning for it
            ex.question = "";
        } else {
            ex.question = j["question"].get<std::string>();
            for (const auto& a : j["answers"]) ex.answers.push_back(a.get<std::string>());
            if (j.contains("gold_doc_ids") && j["gold_doc_ids"].is_array())
                for (const auto& g : j["gold_doc_ids"])
                    ex.gold_doc_ids.push_back(g.get<std::string>());
        }
        examples.push_back(std::move(ex));
    }
    return examples;
}

EvalReport runEval(const Index& index, const std::string& dataset_path, std::int64_t k) {
    EvalReport report;
    report.k = k;
    report.retrieval_only = index.config.generator_endpoint.empty();

    auto examples = loadDataset(dataset_path);
    std::int64_t subem_hits = 0, recall_hits = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        ExampleRecord record;
        record.example_index = i;
        const auto& ex = examples[i];
        if (ex.answers.empty()) {
            record.warning = "malformed example skipped";
            ++report.skipped;
            report.records.push_back(std::move(record));
            continue;
        }
        record.question = ex.question;
        QueryResult result = answerQuery(index, ex.question);

        std::string prediction;
        if (!report.retrieval_only && !result.answer.empty()) {
            prediction = result.answer;
        } else {
            std::size_t limit =
                std::min<std::size_t>(result.passages.size(), static_cast<std::size_t>(k));
            for (std::size_t p = 0; p < limit; ++p) {
                prediction += result.passages[p].text;
                prediction += '\n';
            }
        }
        record.subem = subem(prediction, ex.answers);
        if (record.subem) ++subem_hits;

        for (const auto& p : result.passages) record.retrieved_ids.push_back(p.orig_id);
        if (!ex.gold_doc_ids.empty()) {
            record.has_gold = true;
            ++report.gold_examples;
            record.recall_hit = recallAtK(record.retrieved_ids, ex.gold_doc_ids, k);
            if (record.recall_hit) ++recall_hits;
        }
        ++report.n;
        report.records.push_back(std::move(record));
    }
    report.subem = report.n > 0 ? static_cast<double>(subem_hits) / static_cast<double>(report.n)
                                : 0.0;
    report.recall_at_k = report.gold_examples > 0
                             ? static_cast<double>(recall_hits) /
                                   static_cast<double>(report.gold_examples)
                             : 0.0;
    return report;
}

std::string EvalReport::toJson() const {
    json j;
    j["n"] = n;
    j["skipped"] = skipped;
    j["gold_examples"] = gold_examples;
    j["subem"] = subem;
    j["recall_at_k"] = recall_at_k;
    j["k"] = k;
    j["retrieval_only"] = retrieval_only;
    j["undefined_fractions"] = (n == 0);
    json records_json = json::array();
    for (const auto& r : records) {
        json rj;
        rj["example_index"] = r.example_index;
        rj["subem"] = r.subem;
        if (r.has_gold) rj["recall_hit"] = r.recall_hit;
        rj["retrieved_ids"] = r.retrieved_ids;
        if (!r.warning.empty()) rj["warning"] = r.warning;
        records_json.push_back(rj);
    }
    j["records"] = records_json;
    return j.dump(2);
}

std::string EvalReport::summary() const {
    std::ostringstream out;
    out << "examples: " << n << " (skipped " << skipped << ")\n";
    out << "subem: " << subem << (retrieval_only ? " [retrieval-only upper bound]" : "") << "\n";
    out << "recall@" << k << ": " << recall_at_k << " over " << gold_examples
        << " examples with gold ids\n";
    if (n == 0) out << "warning: empty dataset, fractions reported as 0\n";
    return out.str();
}

} // namespace hgr
