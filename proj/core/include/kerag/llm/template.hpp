#pragma once
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kerag {

using Bindings = std::map<std::string, std::string>;

// A prompt skeleton with <<NAME>> placeholders. Every placeholder found in
// the skeleton is required, so a full rendering never leaves a marker
// behind.
struct PromptTemplate {
    std::string id;
    std::string skeleton;
    std::set<std::string> required_placeholders;

    static PromptTemplate make(std::string id, std::string skeleton);
};

// Verbatim substitution of all placeholders; byte-stable. Throws
// RenderError naming the first missing placeholder.
std::string render(const PromptTemplate& tmpl, const Bindings& bindings);

class TemplateCatalog {
public:
    void add(PromptTemplate tmpl);
    bool has(std::string_view id) const;
    const PromptTemplate& get(std::string_view id) const;  // throws ConfigError when absent
    std::vector<std::string> ids() const;

private:
    std::map<std::string, PromptTemplate, std::less<>> templates_;
};

// The built-in templates: planning.entity_domain, planning.time_cot,
// filter.tools, filter.hop_boundary, summarize.cot, summarize.plain,
// judge.crag, judge.head2tail, sft.judge.
const TemplateCatalog& default_catalog();

// Loads "<id>.txt" files from a directory, on top of the defaults.
// Missing directory → ConfigError.
TemplateCatalog load_catalog(const std::string& dir, bool include_defaults = true);

}  // namespace kerag
