#include "kerag/llm/scripted.hpp"

#include "kerag/errors.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace kerag {

void ScriptedProvider::script(std::string fingerprint, std::string response) {
    script_[std::move(fingerprint)] = std::move(response);
}

void ScriptedProvider::script_for(const TemplateCatalog& catalog, const std::string& template_id,
                                  const Bindings& bindings, std::string response) {
    std::string rendered = render(catalog.get(template_id), bindings);
    script(prompt_fingerprint(template_id, rendered), std::move(response));
}

void ScriptedProvider::set_fallback(std::string response) {
    fallback_ = std::move(response);
    strict_ = false;
}

std::string ScriptedProvider::complete(const RenderedPrompt& prompt, const ChatRequest&) {
    auto it = script_.find(prompt.fingerprint);
    if (it != script_.end()) return it->second;
    if (!strict_ && fallback_) return *fallback_;
    throw ScriptMissError(prompt.fingerprint, prompt.template_id);
}

ScriptedProvider ScriptedProvider::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open provider script: " + path);
    ScriptedProvider provider(true);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw FormatError(path, line_no, "script line is not a JSON object");
        if (obj.contains("fallback")) {
            provider.set_fallback(obj["fallback"].get<std::string>());
        } else if (obj.contains("fingerprint") && obj.contains("response")) {
            provider.script(obj["fingerprint"].get<std::string>(),
                            obj["response"].get<std::string>());
        } else {
            throw FormatError(path, line_no, "script line needs fingerprint+response or fallback");
        }
    }
    return provider;
}

void ScriptedProvider::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write provider script: " + path);
    for (const auto& [fp, response] : script_) {
        nlohmann::ordered_json rec = {{"fingerprint", fp}, {"response", response}};
        out << rec.dump() << '\n';
    }
    if (fallback_) out << nlohmann::ordered_json{{"fallback", *fallback_}}.dump() << '\n';
}

}  // namespace kerag
