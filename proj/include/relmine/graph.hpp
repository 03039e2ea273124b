#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relmine/subgraph.hpp"

namespace relmine {

// Immutable undirected node-labeled graph. Node ids are dense integers
// [0, node_count). Adjacency lists are sorted and deduplicated; no self
// loops. Safe to share across threads after construction.
class AttributedGraph {
public:
    enum class Strictness {
        Reject, // duplicate edges / self-loops are a ParseError
        Drop,   // silently dropped
    };

    AttributedGraph() = default;

    static AttributedGraph from_edges(std::size_t node_count,
                                      std::span<const std::pair<NodeId, NodeId>> edges,
                                      std::span<const Label> labels = {},
                                      Strictness strictness = Strictness::Reject);

    // Text format: lines "v <id> <label>" then "e <u> <v>", '#' comments.
    static AttributedGraph load(std::istream& in, Strictness strictness = Strictness::Drop);
    static AttributedGraph load_file(const std::string& path,
                                     Strictness strictness = Strictness::Drop);

    std::size_t node_count() const noexcept { return adj_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    int label_count() const noexcept { return label_count_; }

    Label label(NodeId v) const noexcept { return labels_[v]; }
    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return std::span<const NodeId>(adj_[v].data(), adj_[v].size());
    }
    std::size_t degree(NodeId v) const noexcept { return adj_[v].size(); }

    bool has_edge(NodeId u, NodeId v) const noexcept {
        if (u >= adj_.size() || v >= adj_.size()) return false;
        const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
        NodeId t = adj_[u].size() <= adj_[v].size() ? v : u;
        return std::binary_search(a.begin(), a.end(), t);
    }

    std::size_t max_degree() const noexcept {
        std::size_t m = 0;
        for (const auto& a : adj_) m = std::max(m, a.size());
        return m;
    }

private:
    std::vector<std::vector<NodeId>> adj_;
    std::vector<Label> labels_;
    std::size_t edge_count_ = 0;
    int label_count_ = 0;

    void finalize();
};

} // namespace relmine
