#pragma once
#include <string>
#include <string_view>
#include <vector>

namespace kerag {

// First tag from `tagset` occurring in `text`, by position; ties at the
// same position resolve in tagset order. Detection is case-sensitive on
// the bracketed token. Throws TagParseError when no tag is present.
std::string parse_tagged(std::string_view text, const std::vector<std::string>& tagset);

}  // namespace kerag
