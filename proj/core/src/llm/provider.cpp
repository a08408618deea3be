#include "kerag/llm/provider.hpp"

#include "kerag/errors.hpp"
#include "kerag/util/hash.hpp"

#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

namespace kerag {

std::string prompt_fingerprint(std::string_view template_id, std::string_view rendered) {
    std::string buf;
    buf.reserve(template_id.size() + 1 + rendered.size());
    buf += template_id;
    buf += '\x1f';
    buf += rendered;
    return hex64(fnv1a64(buf));
}

void RequestLog::append(Entry entry) {
    std::lock_guard lock(mutex_);
    entries_.push_back(std::move(entry));
}

std::vector<RequestLog::Entry> RequestLog::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

size_t RequestLog::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void RequestLog::write_jsonl(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open request log for writing: " + path);
    for (const auto& e : entries()) {
        nlohmann::ordered_json rec = {{"fingerprint", e.fingerprint},
                                      {"template_id", e.template_id},
                                      {"bytes", e.bytes},
                                      {"latency_ms", e.latency_ms},
                                      {"temperature", e.temperature}};
        out << rec.dump() << '\n';
    }
}

RenderedPrompt ChatClient::render_request(const ChatRequest& request) const {
    RenderedPrompt prompt;
    prompt.template_id = request.template_id;
    prompt.text = render(catalog_->get(request.template_id), request.bindings);
    prompt.fingerprint = prompt_fingerprint(prompt.template_id, prompt.text);
    return prompt;
}

ChatResponse ChatClient::complete(const ChatRequest& request) const {
    RenderedPrompt prompt = render_request(request);
    auto start = std::chrono::steady_clock::now();
    std::string text;
    try {
        text = provider_->complete(prompt, request);
    } catch (const TransportError&) {
        text = provider_->complete(prompt, request);  // one retry, then surface
    }
    if (log_) {
        auto elapsed = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        log_->append({prompt.fingerprint, prompt.template_id, prompt.text.size(), elapsed,
                      request.temperature});
    }
    return ChatResponse{std::move(text), provider_->name(), prompt.fingerprint};
}

}  // namespace kerag
