#include "kerag/llm/template.hpp"

#include "kerag/errors.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kerag {

namespace {

// Finds <<NAME>> markers; NAME is [A-Z0-9_]+.
std::set<std::string> scan_placeholders(std::string_view skeleton) {
    std::set<std::string> names;
    size_t pos = 0;
    while ((pos = skeleton.find("<<", pos)) != std::string_view::npos) {
        size_t end = skeleton.find(">>", pos + 2);
        if (end == std::string_view::npos) break;
        std::string_view name = skeleton.substr(pos + 2, end - pos - 2);
        bool ok = !name.empty();
        for (char c : name)
            if (!(std::isupper(static_cast<unsigned char>(c)) ||
                  std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
                ok = false;
        if (ok) {
            names.emplace(name);
            pos = end + 2;
        } else {
            pos += 2;
        }
    }
    return names;
}

}  // namespace

PromptTemplate PromptTemplate::make(std::string id, std::string skeleton) {
    PromptTemplate t;
    t.id = std::move(id);
    t.required_placeholders = scan_placeholders(skeleton);
    t.skeleton = std::move(skeleton);
    return t;
}

std::string render(const PromptTemplate& tmpl, const Bindings& bindings) {
    for (const auto& name : tmpl.required_placeholders) {
        if (!bindings.count(name))
            throw RenderError("template '" + tmpl.id + "': missing placeholder '" + name + "'");
    }
    std::string out;
    out.reserve(tmpl.skeleton.size());
    size_t pos = 0;
    const std::string& s = tmpl.skeleton;
    while (pos < s.size()) {
        size_t open = s.find("<<", pos);
        if (open == std::string::npos) {
            out.append(s, pos, std::string::npos);
            break;
        }
        size_t close = s.find(">>", open + 2);
        std::string name = close == std::string::npos ? "" : s.substr(open + 2, close - open - 2);
        if (!name.empty() && tmpl.required_placeholders.count(name)) {
            out.append(s, pos, open - pos);
            out += bindings.at(name);
            pos = close + 2;
        } else {
            out.append(s, pos, open + 2 - pos);
            pos = open + 2;
        }
    }
    return out;
}

void TemplateCatalog::add(PromptTemplate tmpl) {
    templates_.insert_or_assign(tmpl.id, std::move(tmpl));
}

bool TemplateCatalog::has(std::string_view id) const { return templates_.count(id) > 0; }

const PromptTemplate& TemplateCatalog::get(std::string_view id) const {
    auto it = templates_.find(id);
    if (it == templates_.end())
        throw ConfigError("unknown prompt template '" + std::string(id) + "'");
    return it->second;
}

std::vector<std::string> TemplateCatalog::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, t] : templates_) out.push_back(id);
    return out;
}

TemplateCatalog load_catalog(const std::string& dir, bool include_defaults) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("template directory not found: " + dir);
    TemplateCatalog catalog;
    if (include_defaults) catalog = default_catalog();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path);
        std::ostringstream text;
        text << in.rdbuf();
        catalog.add(PromptTemplate::make(path.stem().string(), text.str()));
    }
    return catalog;
}

}  // namespace kerag
