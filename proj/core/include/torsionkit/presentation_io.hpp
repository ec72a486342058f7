#pragma once

#include "torsionkit/fox.hpp"

#include <map>
#include <string>
#include <vector>

namespace torsionkit {

// linking i j q: L(h_i, k_j) = q with i a generator index and j a relative class index (both 1-based in files).
struct LinkingEntry {
    int generator;
    int relative;
    Rational value;
};

struct PresentationFile {
    Presentation presentation;
    std::map<int, CommutatorExpansion> expansions;  // keyed by 0-based relator index
    std::vector<LinkingEntry> linking;              // 0-based indices
};

// Throws ParseError with the offending line number.
PresentationFile parse_presentation(const std::string& text);
PresentationFile load_presentation(const std::string& path);
std::string format_presentation(const PresentationFile& file);

}  // namespace torsionkit
