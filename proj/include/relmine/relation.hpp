#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "relmine/hon.hpp"
#include "relmine/pattern.hpp"

namespace relmine {

// -------------------------------------------------------------------------
// Relation / weight / filter plug-ins
// -------------------------------------------------------------------------

enum class RelationKind { Identity, Perc, SharedHubs, UserDefined };

using RelationPredicate =
    std::function<bool(const AttributedGraph&, const Subgraph&, const Subgraph&)>;

// An equivalence relation on k-node subgraphs that respects isomorphism.
// Perc is the only built-in whose membership needs class context (its
// definition closes transitively over shared-(k-1)-node chains).
struct RelationSpec {
    RelationKind kind = RelationKind::Identity;
    int hub_degree = 0;            // SharedHubs threshold d
    RelationPredicate user_pred;   // UserDefined; must itself be an equivalence

    bool requires_class_context() const { return kind == RelationKind::Perc; }

    static RelationSpec identity() { return {RelationKind::Identity, 0, {}}; }
    static RelationSpec perc() { return {RelationKind::Perc, 0, {}}; }
    static RelationSpec shared_hubs(int d) { return {RelationKind::SharedHubs, d, {}}; }
    static RelationSpec user_defined(RelationPredicate pred) {
        return {RelationKind::UserDefined, 0, std::move(pred)};
    }

    // "identity" | "perc" | "sh:<d>"
    static RelationSpec parse(const std::string& text);
    std::string to_string() const;
};

enum class WeightKind { Unit, HonDegree, UserDefined };

using WeightEval = std::function<double(const AttributedGraph&, const Subgraph&)>;

// Per-subgraph weight g. HonDegree uses the h-restricted high-order degree,
// consistently with every other degree the estimators touch.
struct WeightFn {
    WeightKind kind = WeightKind::Unit;
    WeightEval user_fn;

    double eval(const AttributedGraph& g, const Subgraph& s, const NodePredicate& h) const {
        switch (kind) {
        case WeightKind::Unit: return 1.0;
        case WeightKind::HonDegree: return static_cast<double>(hon_degree(g, s, h));
        case WeightKind::UserDefined: return user_fn(g, s);
        }
        return 1.0;
    }

    static WeightFn unit() { return {WeightKind::Unit, {}}; }
    static WeightFn hon_deg() { return {WeightKind::HonDegree, {}}; }
    static WeightFn user_defined(WeightEval fn) { return {WeightKind::UserDefined, std::move(fn)}; }

    // "unit" | "hondeg"
    static WeightFn parse(const std::string& text);
    std::string to_string() const;
};

enum class FilterKind { None, MinInternalDegree, UserDefined };

using FilterEval = std::function<bool(const AttributedGraph&, const Subgraph&)>;

// Validity filter h restricting the high-order network. MinInternalDegree(t)
// keeps subgraphs whose every node has at least t neighbors inside the
// subgraph (the quasi-clique density filter; t=2 for 4-node density > 0.5).
struct FilterFn {
    FilterKind kind = FilterKind::None;
    int min_internal_degree = 0;
    FilterEval user_fn;

    bool accepts(const AttributedGraph& g, const Subgraph& s) const;

    // Bind to a graph, producing the predicate the walk/enumeration code consumes.
    NodePredicate bind(const AttributedGraph& g) const;

    static FilterFn none() { return {}; }
    static FilterFn min_internal(int t) { return {FilterKind::MinInternalDegree, t, {}}; }
    static FilterFn user_defined(FilterEval fn) { return {FilterKind::UserDefined, 0, std::move(fn)}; }

    // "none" | "min-internal-degree:<t>"
    static FilterFn parse(const std::string& text);
    std::string to_string() const;
};

// -------------------------------------------------------------------------
// Relation primitives
// -------------------------------------------------------------------------

// Host-graph high degree nodes of s: { v in V(s) : deg_G(v) >= d }, sorted.
std::vector<NodeId> hubs(const AttributedGraph& g, const Subgraph& s, int d);

// The local (non-transitive) clause of the relation:
//   Identity     a == b
//   SharedHubs   a == b, or equal hub sets and equal canonical codes
//   Perc         a == b, or |V(a) n V(b)| = k-1 and equal canonical codes
// For Perc the full relation is the transitive closure of this clause.
bool related_local(const RelationSpec& rel, const AttributedGraph& g, const Subgraph& a,
                   const Subgraph& b);

enum class MembershipAnswer { Yes, No, Uncertified };

// Answers "is candidate in the class of anchor?" during walks and the
// bounded BFS. Identity/SharedHubs/UserDefined answer exactly from the local
// test. Perc certifies incrementally: a candidate is certified (Yes) when it
// is locally related to an already-certified member; otherwise the answer is
// Uncertified and the estimators count it as outside the class. Candidates
// with a matching pattern stay indexed as pending so a later certification
// cascades onto them; this makes the certified set independent of discovery
// order (it is always the closure of the seed within everything seen).
//
// State growth is bounded by state_cap; past it new certifications stop and
// overflow_count() reports how many were suppressed.
class MembershipOracle {
public:
    MembershipOracle(const AttributedGraph& g, const RelationSpec& rel, const Subgraph& anchor,
                     std::size_t state_cap = kDefaultStateCap);

    static constexpr std::size_t kDefaultStateCap = 1u << 20;

    // newly_certified, when given, receives every subgraph whose certification
    // this call established (the candidate itself and any cascade).
    MembershipAnswer test(const Subgraph& candidate, std::vector<Subgraph>* newly_certified = nullptr);

    // Seed a known class member (used for supernode members). No-op for
    // exact relations.
    void add_certified(const Subgraph& member);

    const Subgraph& anchor() const { return anchor_; }
    const PatternCode& anchor_code() const { return anchor_code_; }
    bool is_exact() const { return !rel_.requires_class_context(); }

    std::size_t certified_size() const { return certified_.size(); }
    bool is_certified(const Subgraph& s) const { return certified_.count(s) > 0; }
    std::size_t overflow_count() const { return overflow_; }
    std::size_t uncertified_count() const { return uncertified_answers_; }

private:
    MembershipAnswer test_perc(const Subgraph& candidate, std::vector<Subgraph>* newly_certified);
    void certify(const Subgraph& s, std::vector<Subgraph>* newly_certified);
    bool touches_certified(const Subgraph& s) const;

    const AttributedGraph& g_;
    RelationSpec rel_;
    Subgraph anchor_;
    PatternCode anchor_code_;
    std::vector<NodeId> anchor_hubs_;
    std::size_t state_cap_;
    std::size_t overflow_ = 0;
    std::size_t uncertified_answers_ = 0;

    // Perc state. cert_index_ holds every (k-1)-subset of certified members;
    // pending_index_ maps (k-1)-subsets of uncertified same-pattern nodes to
    // their owners for cascading.
    std::unordered_set<Subgraph, SubgraphHash> certified_;
    std::unordered_set<Subgraph, SubgraphHash> cert_index_;
    std::unordered_set<Subgraph, SubgraphHash> pending_;
    std::unordered_multimap<Subgraph, Subgraph, SubgraphHash> pending_index_;
};

} // namespace relmine
