// hgr: build a hybrid structural-semantic hypergraph index over a JSONL
// corpus and answer questions against it.

#include <hgr/error.hpp>
#include <hgr/eval.hpp>
#include <hgr/index.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

hgr::EngineConfig loadConfigOrDefault(const std::string& path) {
    if (path.empty()) return hgr::EngineConfig{};
    return hgr::EngineConfig::loadFile(path);
}

int runBuild(const std::string& corpus, const std::string& out, const std::string& config_path) {
    hgr::EngineConfig config = loadConfigOrDefault(config_path);
    hgr::Index index = hgr::buildIndex(corpus, config);
    hgr::saveIndex(index, out);
    std::cout << "built index at " << out << ": " << index.documentCount() << " documents, "
              << index.sentenceCount() << " sentences, " << index.vocabSize() << " entities, "
              << index.clusterCount() << " clusters\n";
    return 0;
}

int runQuery(const std::string& index_dir, const std::string& question, std::int64_t top_k,
             bool as_json) {
    hgr::Index index = hgr::loadIndex(index_dir);
    if (top_k > 0) index.config.scoring.top_k = top_k;
    hgr::QueryResult result = hgr::answerQuery(index, question);
    if (as_json) {
        std::cout << result.toJson() << "\n";
        return 0;
    }
    for (const auto& p : result.passages) {
        std::cout << p.rank << ") [" << p.orig_id << "] ";
        if (!p.title.empty()) std::cout << p.title << ": ";
        std::cout << p.text << "\n";
        std::cout << "   global=" << p.global << " evidence=" << p.evidence
                  << " semantic_reward=" << p.semantic_reward << " combined=" << p.combined
                  << " ppr=" << p.ppr << "\n";
    }
    if (!result.answer.empty()) std::cout << "answer: " << result.answer << "\n";
    if (!result.generator_error.empty())
        std::cout << "generator error: " << result.generator_error << "\n";
    return 0;
}

int runEvalCmd(const std::string& index_dir, const std::string& dataset,
               const std::string& metric, std::int64_t k, bool as_json) {
    hgr::Index index = hgr::loadIndex(index_dir);
    hgr::EvalReport report = hgr::runEval(index, dataset, k);
    if (as_json) {
        std::cout << report.toJson() << "\n";
        return 0;
    }
    if (metric == "subem") {
        std::cout << "subem: " << report.subem
                  << (report.retrieval_only ? " [retrieval-only upper bound]" : "") << " over "
                  << report.n << " examples\n";
    } else {
        std::cout << "recall@" << k << ": " << report.recall_at_k << " over "
                  << report.gold_examples << " examples with gold ids\n";
    }
    return 0;
}

int runStats(const std::string& index_dir) {
    hgr::Index index = hgr::loadIndex(index_dir);
    std::cout << "documents:      " << index.documentCount() << "\n";
    std::cout << "sentences:      " << index.sentenceCount() << "\n";
    std::cout << "entities:       " << index.vocabSize() << "\n";
    std::cout << "clusters:       " << index.clusterCount() << "\n";
    std::cout << "h_str nnz:      " << index.h_str.nnz() << "\n";
    std::cout << "h_sem nnz:      " << index.h_sem.nnz() << "\n";
    std::cout << "corpus digest:  " << index.corpus_digest << "\n";
    const auto& c = index.config;
    std::cout << "build params:   T=" << c.clustering.birch_threshold
              << " B=" << c.clustering.birch_branching << " tau=" << c.clustering.tau
              << " D=" << c.clustering.top_d << " dim=" << c.embedding.dimension << "\n";
    std::cout << "query params:   gamma=" << c.diffusion.gamma << " t_max=" << c.diffusion.t_max
              << " epsilon=" << c.diffusion.epsilon << " L=" << c.diffusion.top_l
              << " lambda1=" << c.scoring.lambda1 << " lambda2=" << c.scoring.lambda2
              << " alpha=" << c.scoring.alpha << " k=" << c.scoring.top_k << "\n";
    for (const auto& [param, source] : hgr::EngineConfig::parameterProvenance())
        std::cout << "param source:   " << param << " = " << source << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypergraph retrieval engine"};
    app.require_subcommand(1);

    // index build
    auto* index_cmd = app.add_subcommand("index", "offline index operations");
    index_cmd->require_subcommand(1);
    auto* build_cmd = index_cmd->add_subcommand("build", "build an index from a JSONL corpus");
    std::string corpus_path, out_dir, config_path;
    build_cmd->add_option("--corpus", corpus_path, "corpus JSONL path")->required();
    build_cmd->add_option("--out", out_dir, "output index directory")->required();
    build_cmd->add_option("--config", config_path, "engine config JSON");

    // query
    auto* query_cmd = app.add_subcommand("query", "answer a question against an index");
    std::string query_index, question;
    std::int64_t query_top_k = 0;
    bool query_json = false;
    query_cmd->add_option("--index", query_index, "index directory")->required();
    query_cmd->add_option("--question", question, "question text")->required();
    query_cmd->add_option("--top-k", query_top_k, "override configured top-k");
    query_cmd->add_flag("--json", query_json, "emit the result record as JSON");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a QA dataset against an index");
    std::string eval_index, dataset_path, metric = "subem";
    std::int64_t eval_k = 5;
    bool eval_json = false;
    eval_cmd->add_option("--index", eval_index, "index directory")->required();
    eval_cmd->add_option("--dataset", dataset_path, "dataset JSONL path")->required();
    eval_cmd->add_option("--metric", metric, "metric to report")
        ->check(CLI::IsMember({"subem", "recall"}));
    eval_cmd->add_option("--k", eval_k, "retrieval depth");
    eval_cmd->add_flag("--json", eval_json, "emit the full report as JSON");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "print index statistics");
    std::string stats_index;
    stats_cmd->add_option("--index", stats_index, "index directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (build_cmd->parsed()) return runBuild(corpus_path, out_dir, config_path);
        if (query_cmd->parsed()) return runQuery(query_index, question, query_top_k, query_json);
        if (eval_cmd->parsed()) return runEvalCmd(eval_index, dataset_path, metric, eval_k, eval_json);
        if (stats_cmd->parsed()) return runStats(stats_index);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
