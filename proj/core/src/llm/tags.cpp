#include "kerag/llm/tags.hpp"

#include "kerag/errors.hpp"

namespace kerag {

std::string parse_tagged(std::string_view text, const std::vector<std::string>& tagset) {
    if (tagset.empty()) throw ArgumentError("parse_tagged: tagset must be non-empty");
    size_t best_pos = std::string_view::npos;
    const std::string* best = nullptr;
    for (const auto& tag : tagset) {
        size_t pos = text.find(tag);
        if (pos != std::string_view::npos && pos < best_pos) {
            best_pos = pos;
            best = &tag;
        }
    }
    if (!best) {
        std::string names;
        for (const auto& tag : tagset) {
            if (!names.empty()) names += "/";
            names += tag;
        }
        throw TagParseError("no tag of {" + names + "} found in completion");
    }
    return *best;
}

}  // namespace kerag
