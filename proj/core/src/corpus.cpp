#include <hgr/corpus.hpp>

#include <hgr/error.hpp>
#include <hgr/http_client.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace hgr {

std::vector<std::string> ExtractorConfig::defaultAbbreviationGuard() {
    return {"dr.", "mr.", "mrs.", "ms.", "prof.", "st.",  "no.", "vs.",
            "etc.", "e.g.", "i.e.", "jr.",  "sr.",   "fig.", "al.", "inc."};
}

std::int64_t Corpus::entityId(const std::string& surface) const {
    for (const auto& e : vocabulary)
        if (e.surface == surface) return e.ent_id;
    return -1;
}

namespace {

bool isSpaceByte(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

char foldByte(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

} // namespace

std::string normalizeSurface(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (isSpaceByte(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(foldByte(c));
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> segmentSentences(
    const std::string& text, const std::vector<std::string>& abbreviation_guard) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    const std::size_t n = text.size();

    auto lastToken = [&](std::size_t end_exclusive) {
        std::size_t tok_end = end_exclusive;
        std::size_t tok_start = tok_end;
        while (tok_start > 0 && !isSpaceByte(text[tok_start - 1])) --tok_start;
        std::string tok = text.substr(tok_start, tok_end - tok_start);
        for (char& c : tok) c = foldByte(c);
        return tok;
    };

    std::size_t start = 0;
    while (start < n && isSpaceByte(text[start])) ++start;

    std::size_t i = start;
    while (i < n) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            // consume a run of terminal punctuation ("?!", "...")
            std::size_t j = i;
            while (j + 1 < n && (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?'))
                ++j;
            bool boundary = (j + 1 < n) && isSpaceByte(text[j + 1]);
            if (boundary && c == '.' && j == i) {
                std::string tok = lastToken(i + 1);
                if (std::find(abbreviation_guard.begin(), abbreviation_guard.end(), tok) !=
                    abbreviation_guard.end())
                    boundary = false;
            }
            if (boundary) {
                spans.emplace_back(start, j + 1 - start);
                start = j + 1;
                while (start < n && isSpaceByte(text[start])) ++start;
                i = start;
                continue;
            }
            i = j + 1;
            continue;
        }
        ++i;
    }
    if (start < n) {
        std::size_t end = n;
        while (end > start && isSpaceByte(text[end - 1])) --end;
        if (end > start) spans.emplace_back(start, end - start);
    }
    return spans;
}

namespace {

struct Token {
    std::string core;  // surrounding punctuation stripped
    bool qualifies = false;
};

bool tokenQualifies(const std::string& core) {
    if (core.empty()) return false;
    for (char c : core)
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return std::isupper(static_cast<unsigned char>(core.front())) != 0;
}

std::vector<Token> tokenize(const std::string& sentence) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = sentence.size();
    while (i < n) {
        while (i < n && isSpaceByte(sentence[i])) ++i;
        if (i >= n) break;
        std::size_t j = i;
        while (j < n && !isSpaceByte(sentence[j])) ++j;
        std::size_t a = i, b = j;
        while (a < b && std::ispunct(static_cast<unsigned char>(sentence[a]))) ++a;
        while (b > a && std::ispunct(static_cast<unsigned char>(sentence[b - 1]))) --b;
        Token t;
        t.core = sentence.substr(a, b - a);
        t.qualifies = tokenQualifies(t.core);
        tokens.push_back(std::move(t));
        i = j;
    }
    return tokens;
}

std::vector<std::string> extractBuiltin(const std::string& sentence) {
    std::vector<std::string> mentions;
    std::unordered_set<std::string> seen;
    auto tokens = tokenize(sentence);
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (!tokens[i].qualifies) {
            ++i;
            continue;
        }
        std::vector<std::string> run;
        while (i < tokens.size() && tokens[i].qualifies) {
            std::string folded = normalizeSurface(tokens[i].core);
            if (run.empty() || run.back() != folded) run.push_back(folded);
            ++i;
        }
        std::string mention;
        for (const auto& part : run) {
            if (!mention.empty()) mention.push_back(' ');
            mention += part;
        }
        if (!mention.empty() && seen.insert(mention).second) mentions.push_back(mention);
    }
    return mentions;
}

std::vector<std::string> extractExternal(const std::string& sentence,
                                         const ExtractorConfig& extractor) {
    nlohmann::json body;
    body["text"] = sentence;
    std::string response = postJson(extractor.endpoint, body.dump(), HttpService::Extractor);
    auto parsed = nlohmann::json::parse(response, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("entities"))
        throw ProviderError("extractor endpoint returned malformed JSON");
    std::vector<std::string> mentions;
    std::unordered_set<std::string> seen;
    for (const auto& item : parsed["entities"]) {
        std::string surface = normalizeSurface(item.at("surface").get<std::string>());
        if (!surface.empty() && seen.insert(surface).second) mentions.push_back(surface);
    }
    return mentions;
}

} // namespace

std::vector<std::string> extractEntities(const std::string& sentence,
                                         const ExtractorConfig& extractor) {
    if (extractor.mode == ExtractorMode::ExternalHttp) return extractExternal(sentence, extractor);
    return extractBuiltin(sentence);
}

Corpus loadCorpus(const std::string& path, const std::vector<std::string>& abbreviation_guard) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file: " + path);

    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
            !obj.contains("text") || !obj["id"].is_string() || !obj["text"].is_string())
            throw ParseError(path + ": malformed corpus line " + std::to_string(line_no));

        Document doc;
        doc.doc_id = static_cast<std::int64_t>(corpus.documents.size());
        doc.orig_id = obj["id"].get<std::string>();
        if (!seen_ids.insert(doc.orig_id).second)
            throw ParseError(path + ": duplicate document id \"" + doc.orig_id + "\" at line " +
                             std::to_string(line_no));
        if (obj.contains("title") && obj["title"].is_string())
            doc.title = obj["title"].get<std::string>();
        doc.text = obj["text"].get<std::string>();

        for (auto [offset, length] : segmentSentences(doc.text, abbreviation_guard)) {
            Sentence sent;
            sent.sent_id = static_cast<std::int64_t>(corpus.sentences.size());
            sent.doc_id = doc.doc_id;
            sent.text = doc.text.substr(offset, length);
            doc.sentence_ids.push_back(sent.sent_id);
            corpus.sentences.push_back(std::move(sent));
        }
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

void buildVocabulary(Corpus& corpus, const ExtractorConfig& extractor) {
    corpus.vocabulary.clear();
    std::unordered_map<std::string, std::int64_t> surface_to_id;
    for (auto& sent : corpus.sentences) {
        std::vector<std::string> mentions;
        try {
            mentions = extractEntities(sent.text, extractor);
        } catch (const ProviderError& e) {
            throw ProviderError("extraction failed for sentence " + std::to_string(sent.sent_id) +
                                ": " + e.what());
        }
        sent.entity_ids.clear();
        for (const auto& surface : mentions) {
            auto it = surface_to_id.find(surface);
            std::int64_t ent_id;
            if (it == surface_to_id.end()) {
                ent_id = static_cast<std::int64_t>(corpus.vocabulary.size());
                surface_to_id.emplace(surface, ent_id);
                corpus.vocabulary.push_back({ent_id, surface, {}});
            } else {
                ent_id = it->second;
            }
            corpus.vocabulary[static_cast<std::size_t>(ent_id)].mention_sent_ids.push_back(
                sent.sent_id);
            sent.entity_ids.push_back(ent_id);
        }
        std::sort(sent.entity_ids.begin(), sent.entity_ids.end());
    }
}

} // namespace hgr
