#include "relmine/hon.hpp"

#include <algorithm>
#include <bit>

#include "relmine/error.hpp"

namespace relmine {

bool is_connected_induced(const AttributedGraph& g, const Subgraph& s) {
    const int k = s.size();
    if (k == 0) return false;
    if (k == 1) return true;
    if (k == 2) return g.has_edge(s[0], s[1]);

    // Adjacency bitmask over positions within the set, then bitmask BFS.
    std::uint32_t adj[Subgraph::kMaxNodes] = {};
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (g.has_edge(s[i], s[j])) {
                adj[i] |= 1u << j;
                adj[j] |= 1u << i;
            }
    std::uint32_t reached = 1u, frontier = 1u;
    const std::uint32_t all = (1u << k) - 1;
    while (frontier) {
        std::uint32_t next = 0;
        while (frontier) {
            int i = std::countr_zero(frontier);
            frontier &= frontier - 1;
            next |= adj[i];
        }
        frontier = next & ~reached;
        reached |= frontier;
        if (reached == all) return true;
    }
    return reached == all;
}

Subgraph induced_subgraph(const AttributedGraph& g, std::span<const NodeId> nodes) {
    if (nodes.empty()) throw UsageError("empty node set");
    Subgraph s = Subgraph::from_unsorted(nodes);
    for (NodeId v : s.nodes())
        if (v >= g.node_count())
            throw NodeOutOfRange("node " + std::to_string(v) + " not in graph of " +
                                 std::to_string(g.node_count()) + " nodes");
    if (!is_connected_induced(g, s))
        throw DisconnectedNodeSet("node set " + s.to_string() + " induces a disconnected subgraph");
    return s;
}

void for_each_hon_neighbor(const AttributedGraph& g, const Subgraph& s, const NodePredicate& h,
                           const std::function<void(const Subgraph&)>& fn) {
    const int k = s.size();
    if (k < 2) return; // a k-1 node overlap needs at least one retained node

    std::vector<NodeId> candidates;
    for (int drop = 0; drop < k; ++drop) {
        Subgraph retained = s.without(drop);
        candidates.clear();
        for (NodeId r : retained.nodes())
            for (NodeId u : g.neighbors(r))
                if (!s.contains(u)) candidates.push_back(u);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        // Only the final k-set must be connected; the retained set need not be.
        for (NodeId u : candidates) {
            Subgraph cand = retained.with(u);
            if (!is_connected_induced(g, cand)) continue;
            if (!passes(h, cand)) continue;
            fn(cand);
        }
    }
}

std::vector<Subgraph> hon_neighborhood(const AttributedGraph& g, const Subgraph& s,
                                       const NodePredicate& h) {
    std::vector<Subgraph> out;
    for_each_hon_neighbor(g, s, h, [&](const Subgraph& n) { out.push_back(n); });
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t hon_degree(const AttributedGraph& g, const Subgraph& s, const NodePredicate& h) {
    std::size_t n = 0;
    for_each_hon_neighbor(g, s, h, [&](const Subgraph&) { ++n; });
    return n;
}

} // namespace relmine
