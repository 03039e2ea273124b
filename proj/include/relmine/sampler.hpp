#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relmine/exact.hpp"
#include "relmine/rng.hpp"

namespace relmine {

// -------------------------------------------------------------------------
// Supernode + tours (lower layer)
// -------------------------------------------------------------------------

// Known class members collapsed into one walk state. Tours regenerate here:
// each tour starts by crossing a uniformly drawn boundary edge and ends when
// it re-enters any member.
struct SupernodeState {
    std::vector<Subgraph> members; // sorted
    std::unordered_set<Subgraph, SubgraphHash> member_set;
    std::vector<std::pair<Subgraph, Subgraph>> boundary_edges; // (member, outside neighbor)
    double alpha_inside = 0;        // sum of g over members
    double degree_inside_sum = 0;   // sum of h-restricted HON degrees over members
    std::size_t boundary_degree() const { return boundary_edges.size(); }
    bool contains(const Subgraph& s) const { return member_set.count(s) > 0; }
};

SupernodeState build_supernode(const AttributedGraph& g, const Subgraph& anchor,
                               const BoundedClassResult& bfs, const FilterFn& h,
                               const WeightFn& gfn);

struct TourResult {
    double interior_sum = 0;    // sum of g(S_i) 1{S_i R S} / |N(S_i)| over interior states
    double related_count = 0;   // sum of 1{S_i R S}; the same sum with g = HON degree
    std::size_t length = 0;     // states including both supernode endpoints
    std::size_t interior_visits = 0;
    bool truncated = false;
};

// One non-backtracking random walk tour on the h-restricted high-order
// network with sn collapsed into a single state. Interior degrees are the
// uncollapsed h-restricted degrees. The first interior state may not step
// straight back into any member unless it has nowhere else to go.
TourResult run_tour(const AttributedGraph& g, const SupernodeState& sn, MembershipOracle& oracle,
                    const WeightFn& gfn, const NodePredicate& h, Rng& rng, std::size_t max_len);

// One free-running non-backtracking step rule shared with run_tour: uniform
// over the neighborhood excluding the previous state, backtracking only when
// nothing else remains. Used directly by stationarity checks.
std::optional<Subgraph> nrw_next(const std::vector<Subgraph>& neighborhood, const Subgraph& prev,
                                 bool has_prev, Rng& rng);

// -------------------------------------------------------------------------
// Alpha estimation
// -------------------------------------------------------------------------

struct AlphaOptions {
    std::size_t budget = 1000;         // B
    std::size_t tours = 100;           // q
    std::size_t max_tour_len = 10'000'000;
    bool allow_truncation = false;
    int tour_threads = 1;              // Perc runs tours sequentially regardless
    std::size_t cert_cap = MembershipOracle::kDefaultStateCap;
};

struct AlphaEstimate {
    double value = 0;
    bool exact = false;        // supernode covered the whole class; sampling skipped
    bool no_boundary = false;  // incomplete class with no boundary: flagged partial value
    std::size_t tours_used = 0;
    double tour_mean = 0;      // mean of per-tour estimates
    double tour_stderr = 0;
    double tour_len_mean = 0;  // states per tour
    double tour_len_stderr = 0;
    std::size_t steps_total = 0;   // BFS budget consumed + supernode scan + tour steps
    std::size_t bfs_visited = 0;
    std::size_t tour_steps = 0;
    std::size_t supernode_size = 0;
    std::size_t boundary_degree = 0;
    bool class_complete = false;
    std::size_t truncated_tours = 0;
    std::size_t uncertified_hits = 0;
    std::size_t membership_overflows = 0;
};

// Bounded BFS first; exact when it drains, otherwise q independent tours from
// the collapsed supernode:
//   alpha_hat = alpha_inside + (D / q) * sum_r interior_sum_r.
// Per-tour RNG streams derive from (master_seed, anchor, tour index), so
// results do not depend on scheduling.
AlphaEstimate estimate_alpha(const AttributedGraph& g, const Subgraph& anchor,
                             const RelationSpec& rel, const WeightFn& gfn, const FilterFn& h,
                             const AlphaOptions& opts, std::uint64_t master_seed);

// Same tours feed both estimates: alpha1 with the user's g, alpha2 with
// g'(S) = h-restricted HON degree (so each related interior state adds
// exactly 1 to the tour sum).
std::pair<AlphaEstimate, AlphaEstimate> estimate_alpha_pair(const AttributedGraph& g,
                                                            const Subgraph& anchor,
                                                            const RelationSpec& rel,
                                                            const WeightFn& gfn, const FilterFn& h,
                                                            const AlphaOptions& opts,
                                                            std::uint64_t master_seed);

// -------------------------------------------------------------------------
// Upper layer
// -------------------------------------------------------------------------

std::size_t default_burn_in(const AttributedGraph& g, int k);

// Ordinary (backtracking-allowed) random walk on the h-restricted high-order
// network; discards burn_in steps, then yields t subgraphs in visit order.
// Throws StuckAtIsolatedNode when a step is required but the current state
// has no h-valid neighbor.
void upper_walk(const AttributedGraph& g, int k, std::size_t t, std::size_t burn_in,
                const NodePredicate& h, Rng& rng, const std::optional<Subgraph>& start,
                const std::function<void(const Subgraph&)>& yield);

// -------------------------------------------------------------------------
// F estimation
// -------------------------------------------------------------------------

// Maps upper-walk samples to discovered classes, in sample order. Exact keys
// for Identity (node set) and SharedHubs (pattern + hub set); Perc grows a
// per-class certified chain from the samples themselves.
class ClassCache {
public:
    ClassCache(const AttributedGraph& g, const RelationSpec& rel);

    // (class index, true when this sample opened a new class)
    std::pair<std::size_t, bool> lookup_or_insert(const Subgraph& s);

    std::size_t size() const { return anchors_.size(); }
    const Subgraph& anchor_of(std::size_t idx) const { return anchors_[idx]; }

private:
    const AttributedGraph& g_;
    RelationSpec rel_;
    std::vector<Subgraph> anchors_;
    std::unordered_map<Subgraph, std::size_t, SubgraphHash> by_subgraph_;
    std::map<std::pair<std::string, std::vector<NodeId>>, std::size_t> by_code_hubs_;
    std::vector<PatternCode> class_codes_;
    std::unordered_map<Subgraph, std::vector<std::size_t>, SubgraphHash> perc_subset_index_;
};

struct ClassEstimate {
    Subgraph anchor;
    PatternCode pattern;
    AlphaEstimate alpha1;
    AlphaEstimate alpha2;
    std::size_t sample_count = 0;
};

struct FEstimate {
    std::map<PatternCode, double> f; // raw fractions, sums to 1
    double lambda_hat = 0;
    std::size_t samples_used = 0;
    bool mcc_mode = false;
    std::vector<ClassEstimate> classes;
    std::vector<std::size_t> sample_class; // walk-order class index per sample
    std::vector<Subgraph> samples;         // walk-order sampled subgraphs
    std::size_t upper_steps = 0;
    std::size_t lower_steps = 0;
    std::size_t truncated_tours = 0;
    std::size_t uncertified_hits = 0;
    std::size_t membership_overflows = 0;
};

struct FOptions {
    int k = 3;
    std::size_t steps = 10000; // t
    std::optional<std::size_t> burn_in;
    AlphaOptions alpha;
    bool mcc = false; // alpha1 is the analytic constant 1 (class proportions)
    std::uint64_t seed = 1;
    std::optional<Subgraph> start;
};

// Fills f / lambda_hat from classes + sample_class. Throws EstimatorError on
// a zero alpha2 (only reachable through a degree-0 seed).
void aggregate_f(FEstimate& est);

// Sequential reference implementation; the parallel runtime produces
// bit-identical results.
FEstimate estimate_F(const AttributedGraph& g, const RelationSpec& rel, const WeightFn& gfn,
                     const FilterFn& h, const FOptions& opts);

} // namespace relmine
