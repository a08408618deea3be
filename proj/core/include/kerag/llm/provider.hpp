#pragma once
#include "kerag/llm/template.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace kerag {

struct ChatRequest {
    std::string template_id;
    Bindings bindings;
    double temperature = 0.0;  // 0 unless explicitly overridden
    int max_output = 1024;
};

struct ChatResponse {
    std::string text;
    std::string provider;
    std::string fingerprint;  // stable hash of the rendered prompt
};

struct RenderedPrompt {
    std::string template_id;
    std::string text;
    std::string fingerprint;
};

// fingerprint = hash(template_id, rendered text); two templates with equal
// text do not collide.
std::string prompt_fingerprint(std::string_view template_id, std::string_view rendered);

class Provider {
public:
    virtual ~Provider() = default;
    virtual std::string name() const = 0;
    // Must accept concurrent calls.
    virtual std::string complete(const RenderedPrompt& prompt, const ChatRequest& request) = 0;
};

// Line-delimited request log: fingerprint, template id, byte length,
// latency, temperature. Thread-safe.
class RequestLog {
public:
    struct Entry {
        std::string fingerprint;
        std::string template_id;
        size_t bytes = 0;
        double latency_ms = 0.0;
        double temperature = 0.0;
    };

    void append(Entry entry);
    std::vector<Entry> entries() const;
    size_t size() const;
    void write_jsonl(const std::string& path) const;

private:
    mutable std::mutex mutex_;
    std::vector<Entry> entries_;
};

// Template catalog + provider + optional request log, bundled the way the
// pipeline modules consume them.
class ChatClient {
public:
    ChatClient(const TemplateCatalog& catalog, Provider& provider, RequestLog* log = nullptr)
        : catalog_(&catalog), provider_(&provider), log_(log) {}

    const TemplateCatalog& catalog() const { return *catalog_; }
    RequestLog* log() const { return log_; }

    RenderedPrompt render_request(const ChatRequest& request) const;

    // Renders, completes, and retries once on transport failure. Malformed
    // content is the caller's policy.
    ChatResponse complete(const ChatRequest& request) const;

private:
    const TemplateCatalog* catalog_;
    Provider* provider_;
    RequestLog* log_;
};

}  // namespace kerag
