#pragma once

#include <functional>
#include <vector>

#include "relmine/graph.hpp"
#include "relmine/subgraph.hpp"

namespace relmine {

// Optional validity predicate restricting the high-order network. An empty
// function accepts everything.
using NodePredicate = std::function<bool(const Subgraph&)>;

inline bool passes(const NodePredicate& h, const Subgraph& s) {
    return !h || h(s);
}

// Throws NodeOutOfRange / DisconnectedNodeSet when the set is not a CIS.
Subgraph induced_subgraph(const AttributedGraph& g, std::span<const NodeId> nodes);

// Connectivity of the induced subgraph on the node set of s.
bool is_connected_induced(const AttributedGraph& g, const Subgraph& s);

// All subgraphs sharing exactly k-1 nodes with s in the (optionally
// h-restricted) high-order network, in ascending node-set order.
std::vector<Subgraph> hon_neighborhood(const AttributedGraph& g, const Subgraph& s,
                                       const NodePredicate& h = {});

// |hon_neighborhood(g, s, h)| without materializing or sorting the list.
std::size_t hon_degree(const AttributedGraph& g, const Subgraph& s,
                       const NodePredicate& h = {});

// Generation core shared by the two calls above; emits candidates in an
// unspecified (but deterministic) order.
void for_each_hon_neighbor(const AttributedGraph& g, const Subgraph& s, const NodePredicate& h,
                           const std::function<void(const Subgraph&)>& fn);

} // namespace relmine
