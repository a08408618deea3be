#pragma once
#include "kerag/llm/provider.hpp"

#include <functional>
#include <map>
#include <optional>

namespace kerag {

// Deterministic provider for tests and reproducible runs: responses keyed
// by prompt fingerprint. Strict mode errors on any unscripted fingerprint;
// non-strict returns the designated fallback.
class ScriptedProvider : public Provider {
public:
    explicit ScriptedProvider(bool strict = true) : strict_(strict) {}

    std::string name() const override { return "scripted"; }

    void script(std::string fingerprint, std::string response);
    // Convenience: renders template+bindings against a catalog and scripts
    // the resulting fingerprint.
    void script_for(const TemplateCatalog& catalog, const std::string& template_id,
                    const Bindings& bindings, std::string response);
    void set_fallback(std::string response);

    bool strict() const { return strict_; }
    size_t size() const { return script_.size(); }

    std::string complete(const RenderedPrompt& prompt, const ChatRequest& request) override;

    // Script file: one JSON object per line, {"fingerprint": ..,
    // "response": ..}; a {"fallback": ..} line switches to non-strict.
    static ScriptedProvider from_file(const std::string& path);
    void save(const std::string& path) const;

private:
    std::map<std::string, std::string> script_;
    std::optional<std::string> fallback_;
    bool strict_;
};

// Adapter for programmable behaviors (randomized property tests).
class FnProvider : public Provider {
public:
    using Fn = std::function<std::string(const RenderedPrompt&, const ChatRequest&)>;
    explicit FnProvider(Fn fn, std::string name = "fn")
        : fn_(std::move(fn)), name_(std::move(name)) {}

    std::string name() const override { return name_; }
    std::string complete(const RenderedPrompt& prompt, const ChatRequest& request) override {
        return fn_(prompt, request);
    }

private:
    Fn fn_;
    std::string name_;
};

}  // namespace kerag
