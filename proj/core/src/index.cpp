#include <hgr/index.hpp>

#include <hgr/error.hpp>
#include <hgr/http_client.hpp>
#include <hgr/hypergraph.hpp>
#include <hgr/retrieval.hpp>
#include <hgr/scoring.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace hgr {

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IndexError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IndexError("cannot write file: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IndexError("write failed: " + path);
}

} // namespace

std::string contentDigest(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

std::string fileDigest(const std::string& path) {
    return contentDigest(readFile(path));
}

void Index::rebuildLookups() {
    doc_entities.assign(corpus.documents.size(), {});
    for (const auto& doc : corpus.documents) {
        auto& ents = doc_entities[static_cast<std::size_t>(doc.doc_id)];
        for (std::int64_t sid : doc.sentence_ids)
            for (std::int64_t ent : corpus.sentences[static_cast<std::size_t>(sid)].entity_ids)
                ents.push_back(ent);
        std::sort(ents.begin(), ents.end());
        ents.erase(std::unique(ents.begin(), ents.end()), ents.end());
    }
    entity_clusters.assign(corpus.vocabulary.size(), {});
    for (const auto& t : h_sem.toTriplets())
        entity_clusters[static_cast<std::size_t>(t.row)].push_back(t.col);
    ppr_adjacency.reset();
}

Index buildIndexFromCorpus(Corpus corpus, const EngineConfig& config,
                           const std::string& corpus_digest) {
    Index index;
    index.config = config;
    index.corpus_digest = corpus_digest;

    buildVocabulary(corpus, config.extractor);
    index.corpus = std::move(corpus);

    std::vector<std::string> entity_texts, sentence_texts, passage_texts;
    for (const auto& e : index.corpus.vocabulary) entity_texts.push_back(e.surface);
    for (const auto& s : index.corpus.sentences) sentence_texts.push_back(s.text);
    for (const auto& d : index.corpus.documents) passage_texts.push_back(d.text);
    index.entity_embeddings = embedTexts(entity_texts, config.embedding);
    index.sentence_embeddings = embedTexts(sentence_texts, config.embedding);
    index.passage_embeddings = embedTexts(passage_texts, config.embedding);

    // zero-embedding entities are excluded from clustering
    std::vector<std::pair<std::int64_t, std::vector<double>>> points;
    for (std::size_t i = 0; i < index.entity_embeddings.size(); ++i)
        if (!index.entity_embeddings[i].isZero())
            points.emplace_back(static_cast<std::int64_t>(i), index.entity_embeddings[i].values);

    if (!points.empty()) {
        CFTree tree = birchFit(points, config.clustering.birch_threshold,
                               config.clustering.birch_branching);
        index.clusters = tree.leafClusters();
        index.h_sem = buildSemanticIncidence(index.clusters, points, index.vocabSize(),
                                             config.clustering.top_d, config.clustering.tau);
    } else {
        index.h_sem = SparseMatrix(index.vocabSize(), 0, {});
    }
    index.h_str = buildStructuralIncidence(index.corpus);
    index.rebuildLookups();
    return index;
}

Index buildIndex(const std::string& corpus_path, const EngineConfig& config) {
    std::string digest = fileDigest(corpus_path);
    Corpus corpus = loadCorpus(corpus_path, config.extractor.abbreviation_guard);
    return buildIndexFromCorpus(std::move(corpus), config, digest);
}

namespace {

std::string serializePassages(const Corpus& corpus) {
    std::string out;
    for (const auto& doc : corpus.documents) {
        json j;
        j["doc_id"] = doc.doc_id;
        j["id"] = doc.orig_id;
        j["title"] = doc.title;
        j["text"] = doc.text;
        json sentences = json::array();
        for (std::int64_t sid : doc.sentence_ids) {
            const auto& s = corpus.sentences[static_cast<std::size_t>(sid)];
            sentences.push_back(
                {{"sent_id", s.sent_id}, {"text", s.text}, {"entity_ids", s.entity_ids}});
        }
        j["sentences"] = sentences;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string serializeVocab(const Corpus& corpus) {
    std::string out;
    for (const auto& e : corpus.vocabulary) {
        json j;
        j["ent_id"] = e.ent_id;
        j["surface"] = e.surface;
        j["mention_sent_ids"] = e.mention_sent_ids;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string serializeEmbeddings(const Index& index) {
    std::ostringstream out(std::ios::binary);
    auto writeI64 = [&](std::int64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    writeI64(index.config.embedding.dimension);
    writeI64(static_cast<std::int64_t>(index.entity_embeddings.size()));
    writeI64(static_cast<std::int64_t>(index.sentence_embeddings.size()));
    writeI64(static_cast<std::int64_t>(index.passage_embeddings.size()));
    auto writeBlock = [&](const std::vector<EmbeddingVector>& block) {
        for (const auto& vec : block)
            out.write(reinterpret_cast<const char*>(vec.values.data()),
                      static_cast<std::streamsize>(vec.values.size() * sizeof(double)));
    };
    writeBlock(index.entity_embeddings);
    writeBlock(index.sentence_embeddings);
    writeBlock(index.passage_embeddings);
    return out.str();
}

std::string serializeClusters(const std::vector<Cluster>& clusters) {
    json arr = json::array();
    for (const auto& c : clusters)
        arr.push_back({{"cluster_id", c.cluster_id},
                       {"centroid", c.centroid},
                       {"member_ids", c.member_ids}});
    return json{{"clusters", arr}}.dump(2) + "\n";
}

std::string serializeMatrix(const SparseMatrix& m) {
    std::ostringstream out(std::ios::binary);
    m.serialize(out);
    return out.str();
}

} // namespace

void saveIndex(const Index& index, const std::string& dir) {
    bool created = fs::create_directories(dir);
    try {
        std::map<std::string, std::string> files;
        files["passages.jsonl"] = serializePassages(index.corpus);
        files["vocab.jsonl"] = serializeVocab(index.corpus);
        files["embeddings.bin"] = serializeEmbeddings(index);
        files["h_str.bin"] = serializeMatrix(index.h_str);
        files["h_sem.bin"] = serializeMatrix(index.h_sem);
        files["clusters.json"] = serializeClusters(index.clusters);
        files["config.json"] = index.config.toJson();

        json manifest;
        manifest["format_version"] = kIndexFormatVersion;
        manifest["corpus_digest"] = index.corpus_digest;
        manifest["embedder"] = {
            {"mode", index.config.embedding.mode == EmbeddingMode::BuiltinHash ? "builtin-hash"
                                                                               : "external-http"},
            {"dimension", index.config.embedding.dimension},
            {"model_name", index.config.embedding.model_name}};
        manifest["extractor"] = index.config.extractor.name;
        manifest["clustering"] = {{"birch_threshold", index.config.clustering.birch_threshold},
                                  {"birch_branching", index.config.clustering.birch_branching},
                                  {"tau", index.config.clustering.tau},
                                  {"top_d", index.config.clustering.top_d}};
        manifest["counts"] = {{"vocabulary", index.vocabSize()},
                              {"sentences", index.sentenceCount()},
                              {"documents", index.documentCount()},
                              {"clusters", index.clusterCount()}};
        json file_table;
        for (const auto& [name, bytes] : files) {
            writeFile((fs::path(dir) / name).string(), bytes);
            file_table[name] = {{"bytes", bytes.size()}, {"digest", contentDigest(bytes)}};
        }
        manifest["files"] = file_table;
        writeFile((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    } catch (...) {
        if (created) fs::remove_all(dir);
        throw;
    }
}

namespace {

Corpus loadPersistedCorpus(const std::string& passages_text, const std::string& vocab_text) {
    Corpus corpus;
    std::istringstream pin(passages_text);
    std::string line;
    while (std::getline(pin, line)) {
        if (line.empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw IndexError("passages.jsonl: malformed line");
        Document doc;
        doc.doc_id = j.at("doc_id").get<std::int64_t>();
        doc.orig_id = j.at("id").get<std::string>();
        doc.title = j.value("title", std::string{});
        doc.text = j.at("text").get<std::string>();
        for (const auto& sj : j.at("sentences")) {
            Sentence s;
            s.sent_id = sj.at("sent_id").get<std::int64_t>();
            s.doc_id = doc.doc_id;
            s.text = sj.at("text").get<std::string>();
            s.entity_ids = sj.at("entity_ids").get<std::vector<std::int64_t>>();
            doc.sentence_ids.push_back(s.sent_id);
            corpus.sentences.push_back(std::move(s));
        }
        corpus.documents.push_back(std::move(doc));
    }
    std::istringstream vin(vocab_text);
    while (std::getline(vin, line)) {
        if (line.empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw IndexError("vocab.jsonl: malformed line");
        Entity e;
        e.ent_id = j.at("ent_id").get<std::int64_t>();
        e.surface = j.at("surface").get<std::string>();
        e.mention_sent_ids = j.at("mention_sent_ids").get<std::vector<std::int64_t>>();
        corpus.vocabulary.push_back(std::move(e));
    }
    return corpus;
}

void loadEmbeddings(Index& index, const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    auto readI64 = [&]() {
        std::int64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        if (!in) throw IndexError("embeddings.bin: truncated header");
        return v;
    };
    std::int64_t dim = readI64();
    std::int64_t n_ent = readI64();
    std::int64_t n_sent = readI64();
    std::int64_t n_doc = readI64();
    auto readBlock = [&](std::int64_t count) {
        std::vector<EmbeddingVector> block(static_cast<std::size_t>(count));
        for (auto& vec : block) {
            vec.values.resize(static_cast<std::size_t>(dim));
            in.read(reinterpret_cast<char*>(vec.values.data()),
                    static_cast<std::streamsize>(static_cast<std::size_t>(dim) * sizeof(double)));
            if (!in) throw IndexError("embeddings.bin: truncated data");
        }
        return block;
    };
    index.entity_embeddings = readBlock(n_ent);
    index.sentence_embeddings = readBlock(n_sent);
    index.passage_embeddings = readBlock(n_doc);
}

std::vector<Cluster> loadClusters(const std::string& text) {
    auto j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("clusters"))
        throw IndexError("clusters.json: malformed JSON");
    std::vector<Cluster> clusters;
    for (const auto& cj : j["clusters"]) {
        Cluster c;
        c.cluster_id = cj.at("cluster_id").get<std::int64_t>();
        c.centroid = cj.at("centroid").get<std::vector<double>>();
        c.member_ids = cj.at("member_ids").get<std::vector<std::int64_t>>();
        clusters.push_back(std::move(c));
    }
    return clusters;
}

} // namespace

Index loadIndex(const std::string& dir) {
    fs::path root(dir);
    if (!fs::exists(root / "manifest.json"))
        throw IndexError("index load failed: missing manifest.json in " + dir);
    auto manifest = json::parse(readFile((root / "manifest.json").string()), nullptr, false);
    if (manifest.is_discarded()) throw IndexError("index load failed: manifest.json is malformed");

    std::int64_t version = manifest.value("format_version", std::int64_t{-1});
    if (version != kIndexFormatVersion)
        throw IndexError("index format version " + std::to_string(version) +
                         " is not supported (expected " + std::to_string(kIndexFormatVersion) +
                         ")");

    std::map<std::string, std::string> files;
    for (const auto& [name, meta] : manifest.at("files").items()) {
        fs::path p = root / name;
        if (!fs::exists(p)) throw IndexError("index load failed: missing file " + name);
        std::string bytes = readFile(p.string());
        if (bytes.size() != meta.at("bytes").get<std::size_t>() ||
            contentDigest(bytes) != meta.at("digest").get<std::string>())
            throw IndexError("index load failed: digest mismatch in " + name);
        files[name] = std::move(bytes);
    }
    for (const char* required : {"passages.jsonl", "vocab.jsonl", "embeddings.bin", "h_str.bin",
                                 "h_sem.bin", "clusters.json", "config.json"})
        if (!files.count(required))
            throw IndexError(std::string("index load failed: manifest lacks ") + required);

    Index index;
    index.config = EngineConfig::fromJson(files["config.json"]);
    index.corpus_digest = manifest.value("corpus_digest", std::string{});
    index.corpus = loadPersistedCorpus(files["passages.jsonl"], files["vocab.jsonl"]);
    loadEmbeddings(index, files["embeddings.bin"]);
    {
        std::istringstream in(files["h_str.bin"], std::ios::binary);
        index.h_str = SparseMatrix::deserialize(in);
    }
    {
        std::istringstream in(files["h_sem.bin"], std::ios::binary);
        index.h_sem = SparseMatrix::deserialize(in);
    }
    index.clusters = loadClusters(files["clusters.json"]);
    index.rebuildLookups();
    return index;
}

std::string assemblePrompt(const std::string& question,
                           const std::vector<ScoredPassage>& passages) {
    if (passages.empty()) return question;
    std::string prompt = "Answer the question using only the numbered passages below.\n\n";
    prompt += "Passages:\n";
    for (const auto& p : passages) {
        prompt += std::to_string(p.rank) + ") ";
        if (!p.title.empty()) prompt += p.title + ": ";
        prompt += p.text + "\n";
    }
    prompt += "\nQuestion: " + question + "\nAnswer:";
    return prompt;
}

QueryResult answerQuery(const Index& index, const std::string& question) {
    QueryResult result;
    result.question = question;

    QueryContext ctx = buildQueryContext(index, question);
    DiffusionResult diffusion = diffuse(ctx, index, index.config.diffusion);
    PassageScores scores = scorePassages(ctx, index, diffusion, index.config.scoring);
    std::vector<std::int64_t> ranked;
    if (index.documentCount() > 0) ranked = rankTopK(scores, index.config.scoring.top_k);

    std::int64_t rank = 1;
    for (std::int64_t d : ranked) {
        const auto& doc = index.corpus.documents[static_cast<std::size_t>(d)];
        ScoredPassage p;
        p.doc_id = d;
        p.orig_id = doc.orig_id;
        p.title = doc.title;
        p.text = doc.text;
        auto idx = static_cast<std::size_t>(d);
        p.global = scores.global[idx];
        p.evidence = scores.evidence[idx];
        p.semantic_reward = scores.semantic_reward[idx];
        p.combined = scores.combined[idx];
        p.ppr = scores.ppr[idx];
        p.rank = rank++;
        result.passages.push_back(std::move(p));
    }
    result.prompt = assemblePrompt(question, result.passages);

    if (!index.config.generator_endpoint.empty()) {
        try {
            json body{{"prompt", result.prompt}};
            std::string response =
                postJson(index.config.generator_endpoint, body.dump(), HttpService::Generator);
            auto parsed = json::parse(response, nullptr, false);
            if (parsed.is_discarded() || !parsed.contains("answer"))
                result.generator_error = "generator returned malformed JSON";
            else
                result.answer = parsed["answer"].get<std::string>();
        } catch (const ProviderError& e) {
            result.generator_error = e.what();
        }
    }
    return result;
}

std::string QueryResult::toJson() const {
    json j;
    j["question"] = question;
    json arr = json::array();
    for (const auto& p : passages)
        arr.push_back({{"doc_id", p.orig_id},
                       {"doc_index", p.doc_id},
                       {"title", p.title},
                       {"global", p.global},
                       {"evidence", p.evidence},
                       {"semantic_reward", p.semantic_reward},
                       {"combined", p.combined},
                       {"ppr", p.ppr},
                       {"rank", p.rank}});
    j["passages"] = arr;
    j["prompt"] = prompt;
    if (!answer.empty()) j["answer"] = answer;
    if (!generator_error.empty()) j["generator_error"] = generator_error;
    return j.dump(2);
}

} // namespace hgr
