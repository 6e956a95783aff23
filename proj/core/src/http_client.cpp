#include <hgr/http_client.hpp>

#include <hgr/error.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

namespace hgr {

HttpCallCounters& httpCounters() {
    static HttpCallCounters counters;
    return counters;
}

namespace {

void bumpCounter(HttpService service) {
    switch (service) {
    case HttpService::Extractor: ++httpCounters().extractor_calls; break;
    case HttpService::Embedding: ++httpCounters().embedding_calls; break;
    case HttpService::Generator: ++httpCounters().generator_calls; break;
    }
}

// Splits "http://host:port/path" into origin and path.
std::pair<std::string, std::string> splitUrl(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ProviderError("invalid endpoint URL (missing scheme): " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

std::string postJson(const std::string& url, const std::string& json_body, HttpService service) {
    bumpCounter(service);
    auto [origin, path] = splitUrl(url);
    httplib::Client client(origin);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    auto res = client.Post(path, json_body, "application/json");
    if (!res)
        throw ProviderError("endpoint unreachable: " + url + " (" +
                            httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw ProviderError("endpoint " + url + " returned status " +
                            std::to_string(res->status));
    return res->body;
}

} // namespace hgr
