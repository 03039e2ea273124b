#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relmine/graph.hpp"
#include "relmine/subgraph.hpp"

namespace relmine {

// Canonical label of a labeled subgraph: equal codes iff the subgraphs are
// attributed-isomorphic. Byte layout:
//   [k : 1 byte][sorted labels : k * 4 bytes LE]
//   [upper-triangle adjacency bits under the canonical permutation, MSB first]
// The canonical permutation is the label-respecting node order minimizing
// the adjacency bit string, found by exhaustive permutation within label
// groups.
struct PatternCode {
    std::string bytes;

    friend bool operator==(const PatternCode& a, const PatternCode& b) { return a.bytes == b.bytes; }
    friend bool operator!=(const PatternCode& a, const PatternCode& b) { return a.bytes != b.bytes; }
    friend bool operator<(const PatternCode& a, const PatternCode& b) { return a.bytes < b.bytes; }

    std::string hex() const;
    static PatternCode from_hex(const std::string& hex);
};

struct PatternCodeHash {
    std::size_t operator()(const PatternCode& c) const noexcept {
        return std::hash<std::string>()(c.bytes);
    }
};

// Throws SubgraphTooLarge when s has more than max_k nodes (canonicalization
// cost grows factorially).
PatternCode canonical_code(const AttributedGraph& g, const Subgraph& s, int max_k = 8);

struct PatternInfo {
    int k = 0;
    std::vector<Label> labels;                 // sorted
    std::vector<std::pair<int, int>> edges;    // positions into labels
};

PatternInfo decode_pattern(const PatternCode& code);

// "k|[labels]|[edges]" human-readable form used in reports.
std::string render_pattern(const PatternCode& code);

} // namespace relmine
