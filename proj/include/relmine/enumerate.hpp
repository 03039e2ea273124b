#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "relmine/hon.hpp"
#include "relmine/rng.hpp"

namespace relmine {

// Yields every connected induced k-node subgraph exactly once (anchored
// recursive extension: each subgraph is grown from its minimum node id and
// extension candidates stay above it). h filters emitted subgraphs only.
// Returning false from emit stops the enumeration.
void enumerate_cis(const AttributedGraph& g, int k, const NodePredicate& h,
                   const std::function<bool(const Subgraph&)>& emit);

// Collects up to cap subgraphs; throws EnumerationCapExceeded if there are
// more.
std::vector<Subgraph> enumerate_cis_all(const AttributedGraph& g, int k,
                                        const NodePredicate& h = {},
                                        std::size_t cap = std::numeric_limits<std::size_t>::max());

std::size_t count_cis(const AttributedGraph& g, int k, const NodePredicate& h = {},
                      std::size_t cap = std::numeric_limits<std::size_t>::max());

// Uniform start node, greedy uniform frontier expansion to k nodes, retried
// until h holds. Throws SeedNotFound after max_attempts.
Subgraph random_seed_subgraph(const AttributedGraph& g, int k, const NodePredicate& h, Rng& rng,
                              int max_attempts = 1024);

} // namespace relmine
