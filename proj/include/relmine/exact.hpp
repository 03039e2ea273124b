#pragma once

#include <map>
#include <vector>

#include "relmine/enumerate.hpp"
#include "relmine/relation.hpp"

namespace relmine {

struct BoundedClassResult {
    double alpha_partial = 0;        // sum of g over members
    std::vector<Subgraph> members;   // found class members, sorted; anchor included
    bool complete = false;
    std::size_t visited_count = 0;   // |H|, budget consumed
    std::size_t uncertified_seen = 0;
    std::size_t membership_overflows = 0;
};

// Breadth-first search of the h-restricted high-order network from s, testing
// every newly visited subgraph for class membership, stopping once the
// visited set reaches the budget. complete certifies the class only within
// the h-valid component of s (some relations admit classes spanning several
// components). The anchor itself is a member by reflexivity and g(s) is part
// of alpha_partial.
BoundedClassResult bounded_class_bfs(const AttributedGraph& g, const Subgraph& s,
                                     const RelationSpec& rel, std::size_t budget,
                                     const WeightFn& gfn, const FilterFn& h,
                                     std::size_t state_cap = MembershipOracle::kDefaultStateCap);

// Full class of s (transitive closure of the local relation over all h-valid
// k-node CISes), independent of search order and certification. The
// authoritative oracle for alpha.
std::vector<Subgraph> exact_class_bruteforce(const AttributedGraph& g, const Subgraph& s,
                                             const RelationSpec& rel, const FilterFn& h,
                                             std::size_t enum_cap);

double exact_alpha_bruteforce(const AttributedGraph& g, const Subgraph& s, const RelationSpec& rel,
                              const WeightFn& gfn, const FilterFn& h, std::size_t enum_cap);

// Partition of all h-valid k-node CISes into relation classes.
struct ClassPartition {
    std::vector<Subgraph> subgraphs;              // ascending
    std::vector<std::vector<std::size_t>> classes; // indices into subgraphs
};
ClassPartition exact_classes(const AttributedGraph& g, int k, const RelationSpec& rel,
                             const FilterFn& h, std::size_t enum_cap);

struct ExactFReport {
    std::map<PatternCode, double> f; // raw fractions, sums to 1
    double lambda = 0;
    std::size_t class_count = 0;
    std::size_t subgraph_count = 0;
};

// F over all patterns by full enumeration: per-subgraph alpha/|C| aggregated
// by pattern and normalized.
ExactFReport exact_F(const AttributedGraph& g, int k, const RelationSpec& rel, const WeightFn& gfn,
                     const FilterFn& h, std::size_t enum_cap);

} // namespace relmine
