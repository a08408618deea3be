#pragma once
#include "kerag/llm/provider.hpp"

#include <optional>
#include <string>

namespace kerag {

// Chat-completions endpoint reached over HTTP. Single-shot requests, one
// user message per call.
struct HttpProviderConfig {
    std::string endpoint;  // e.g. http://host:8080/v1/chat/completions
    std::string model;
    std::string auth_token;  // sent as a bearer token when non-empty
    int timeout_seconds = 60;
};

class HttpProvider : public Provider {
public:
    explicit HttpProvider(HttpProviderConfig config);

    std::string name() const override { return "http:" + config_.model; }
    std::string complete(const RenderedPrompt& prompt, const ChatRequest& request) override;

    // Reads KERAG_ENDPOINT, KERAG_MODEL, KERAG_AUTH_TOKEN. Empty when the
    // endpoint variable is unset.
    static std::optional<HttpProviderConfig> config_from_env();

private:
    HttpProviderConfig config_;
    std::string scheme_host_;
    std::string path_;
};

}  // namespace kerag
