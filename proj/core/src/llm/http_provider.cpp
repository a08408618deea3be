#include "kerag/llm/http_provider.hpp"

#include "kerag/errors.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace kerag {

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint;
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("provider endpoint needs a scheme: " + url);
    size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host_ = url;
        path_ = "/";
    } else {
        scheme_host_ = url.substr(0, path_start);
        path_ = url.substr(path_start);
    }
}

std::string HttpProvider::complete(const RenderedPrompt& prompt, const ChatRequest& request) {
    nlohmann::json body = {
        {"model", config_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt.text}}})},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output}};

    httplib::Client client(scheme_host_);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.auth_token.empty())
        headers.emplace("Authorization", "Bearer " + config_.auth_token);

    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res)
        throw TransportError("provider request failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw TransportError("provider returned HTTP " + std::to_string(res->status));

    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) throw TransportError("provider returned non-JSON body");
    try {
        if (parsed.contains("choices"))
            return parsed["choices"].at(0)["message"]["content"].get<std::string>();
        if (parsed.contains("content")) return parsed["content"].get<std::string>();
        if (parsed.contains("text")) return parsed["text"].get<std::string>();
    } catch (const nlohmann::json::exception&) {
    }
    throw TransportError("provider response has no completion text");
}

std::optional<HttpProviderConfig> HttpProvider::config_from_env() {
    const char* endpoint = std::getenv("KERAG_ENDPOINT");
    if (!endpoint || !*endpoint) return std::nullopt;
    HttpProviderConfig config;
    config.endpoint = endpoint;
    if (const char* model = std::getenv("KERAG_MODEL")) config.model = model;
    if (const char* token = std::getenv("KERAG_AUTH_TOKEN")) config.auth_token = token;
    return config;
}

}  // namespace kerag
