#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace hgr {

/// Per-service call counters. Tests and the build pipeline use these to
/// assert that a given phase made no external calls at all.
struct HttpCallCounters {
    std::atomic<std::int64_t> extractor_calls{0};
    std::atomic<std::int64_t> embedding_calls{0};
    std::atomic<std::int64_t> generator_calls{0};

    void reset() {
        extractor_calls = 0;
        embedding_calls = 0;
        generator_calls = 0;
    }
};

HttpCallCounters& httpCounters();

enum class HttpService { Extractor, Embedding, Generator };

/// POST a JSON body to `url` (e.g. "http://127.0.0.1:8080/embed") and return
/// the response body. Non-200 status or connection failure throws ProviderError.
std::string postJson(const std::string& url, const std::string& json_body, HttpService service);

} // namespace hgr
