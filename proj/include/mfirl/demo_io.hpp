#pragma once

#include <string>

#include "mfirl/types.hpp"

namespace mfirl {

/// Line-oriented demonstration file format:
///   env=<tag> episodes=<n>
///   s:a s:a ... s:a        (one line per episode, temporal order)
/// serialize(parse(text)) == text for any file this module wrote.
std::string serialize_demonstrations(const DemonstrationSet& demos);
DemonstrationSet parse_demonstrations(const std::string& text);

void save_demonstrations(const std::string& path, const DemonstrationSet& demos);
DemonstrationSet load_demonstrations(const std::string& path);

}  // namespace mfirl
