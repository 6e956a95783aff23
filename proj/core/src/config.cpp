#include <hgr/config.hpp>

#include <hgr/error.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace hgr {

namespace {

using nlohmann::json;

json embeddingToJson(const EmbeddingProviderConfig& cfg) {
    return json{{"mode", cfg.mode == EmbeddingMode::BuiltinHash ? "builtin-hash" : "external-http"},
                {"dimension", cfg.dimension},
                {"endpoint", cfg.endpoint},
                {"model_name", cfg.model_name},
                {"batch_size", cfg.batch_size}};
}

EmbeddingProviderConfig embeddingFromJson(const json& j) {
    EmbeddingProviderConfig cfg;
    std::string mode = j.value("mode", "builtin-hash");
    if (mode == "builtin-hash")
        cfg.mode = EmbeddingMode::BuiltinHash;
    else if (mode == "external-http")
        cfg.mode = EmbeddingMode::ExternalHttp;
    else
        throw ParseError("unknown embedding mode: " + mode);
    cfg.dimension = j.value("dimension", std::int64_t{384});
    cfg.endpoint = j.value("endpoint", std::string{});
    cfg.model_name = j.value("model_name", std::string{});
    cfg.batch_size = j.value("batch_size", std::int64_t{32});
    return cfg;
}

json extractorToJson(const ExtractorConfig& cfg) {
    return json{{"name", cfg.name},
                {"mode", cfg.mode == ExtractorMode::BuiltinHeuristic ? "builtin-heuristic"
                                                                     : "external-http"},
                {"endpoint", cfg.endpoint},
                {"abbreviation_guard", cfg.abbreviation_guard}};
}

ExtractorConfig extractorFromJson(const json& j) {
    ExtractorConfig cfg;
    cfg.name = j.value("name", std::string{"heuristic"});
    std::string mode = j.value("mode", "builtin-heuristic");
    if (mode == "builtin-heuristic")
        cfg.mode = ExtractorMode::BuiltinHeuristic;
    else if (mode == "external-http")
        cfg.mode = ExtractorMode::ExternalHttp;
    else
        throw ParseError("unknown extractor mode: " + mode);
    cfg.endpoint = j.value("endpoint", std::string{});
    if (j.contains("abbreviation_guard"))
        cfg.abbreviation_guard = j["abbreviation_guard"].get<std::vector<std::string>>();
    return cfg;
}

} // namespace

std::string EngineConfig::toJson() const {
    json j;
    j["embedding"] = embeddingToJson(embedding);
    j["extractor"] = extractorToJson(extractor);
    j["clustering"] = {{"birch_threshold", clustering.birch_threshold},
                       {"birch_branching", clustering.birch_branching},
                       {"tau", clustering.tau},
                       {"top_d", clustering.top_d}};
    j["diffusion"] = {{"gamma", diffusion.gamma},
                      {"t_max", diffusion.t_max},
                      {"epsilon", diffusion.epsilon},
                      {"top_l", diffusion.top_l},
                      {"anchors_per_entity", diffusion.anchors_per_entity}};
    j["scoring"] = {{"lambda1", scoring.lambda1},
                    {"lambda2", scoring.lambda2},
                    {"alpha", scoring.alpha},
                    {"ppr_tol", scoring.ppr_tol},
                    {"ppr_max_iters", scoring.ppr_max_iters},
                    {"top_k", scoring.top_k}};
    j["generator_endpoint"] = generator_endpoint;
    return j.dump(2) + "\n";
}

EngineConfig EngineConfig::fromJson(const std::string& json_text) {
    auto j = json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError("config: malformed JSON");
    EngineConfig cfg;
    if (j.contains("embedding")) cfg.embedding = embeddingFromJson(j["embedding"]);
    if (j.contains("extractor")) cfg.extractor = extractorFromJson(j["extractor"]);
    if (j.contains("clustering")) {
        const auto& c = j["clustering"];
        cfg.clustering.birch_threshold = c.value("birch_threshold", cfg.clustering.birch_threshold);
        cfg.clustering.birch_branching = c.value("birch_branching", cfg.clustering.birch_branching);
        cfg.clustering.tau = c.value("tau", cfg.clustering.tau);
        cfg.clustering.top_d = c.value("top_d", cfg.clustering.top_d);
    }
    if (j.contains("diffusion")) {
        const auto& d = j["diffusion"];
        cfg.diffusion.gamma = d.value("gamma", cfg.diffusion.gamma);
        cfg.diffusion.t_max = d.value("t_max", cfg.diffusion.t_max);
        cfg.diffusion.epsilon = d.value("epsilon", cfg.diffusion.epsilon);
        cfg.diffusion.top_l = d.value("top_l", cfg.diffusion.top_l);
        cfg.diffusion.anchors_per_entity =
            d.value("anchors_per_entity", cfg.diffusion.anchors_per_entity);
    }
    if (j.contains("scoring")) {
        const auto& s = j["scoring"];
        cfg.scoring.lambda1 = s.value("lambda1", cfg.scoring.lambda1);
        cfg.scoring.lambda2 = s.value("lambda2", cfg.scoring.lambda2);
        cfg.scoring.alpha = s.value("alpha", cfg.scoring.alpha);
        cfg.scoring.ppr_tol = s.value("ppr_tol", cfg.scoring.ppr_tol);
        cfg.scoring.ppr_max_iters = s.value("ppr_max_iters", cfg.scoring.ppr_max_iters);
        cfg.scoring.top_k = s.value("top_k", cfg.scoring.top_k);
    }
    cfg.generator_endpoint = j.value("generator_endpoint", std::string{});

    if (cfg.diffusion.gamma < 0.0 || cfg.diffusion.gamma > 1.0)
        throw ParseError("config: gamma must lie in [0, 1]");
    if (cfg.diffusion.epsilon < 0.0) throw ParseError("config: epsilon must be >= 0");
    if (cfg.diffusion.top_l < 1) throw ParseError("config: top_l must be >= 1");
    if (cfg.diffusion.t_max < 0) throw ParseError("config: t_max must be >= 0");
    if (cfg.scoring.alpha <= 0.0 || cfg.scoring.alpha > 1.0)
        throw ParseError("config: alpha must lie in (0, 1]");
    return cfg;
}

EngineConfig EngineConfig::loadFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fromJson(ss.str());
}

void EngineConfig::saveFile(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write config file: " + path);
    out << toJson();
}

const std::map<std::string, std::string>& EngineConfig::parameterProvenance() {
    static const std::map<std::string, std::string> provenance = {
        {"diffusion.t_max", "preset"},
        {"diffusion.epsilon", "preset"},
        {"diffusion.top_l", "preset"},
        {"diffusion.gamma", "preset"},
        {"diffusion.anchors_per_entity", "artifact"},
        {"clustering.top_d", "preset"},
        {"clustering.birch_threshold", "artifact"},
        {"clustering.birch_branching", "artifact"},
        {"clustering.tau", "artifact"},
        {"scoring.lambda1", "preset"},
        {"scoring.lambda2", "preset"},
        {"scoring.alpha", "artifact"},
        {"scoring.ppr_tol", "artifact"},
        {"scoring.ppr_max_iters", "artifact"},
        {"scoring.top_k", "preset"},
        {"embedding.dimension", "artifact"},
    };
    return provenance;
}

} // namespace hgr
