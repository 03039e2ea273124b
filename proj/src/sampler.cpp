#include "relmine/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "relmine/error.hpp"

namespace relmine {

// -------------------------------------------------------------------------
// Supernode
// -------------------------------------------------------------------------

SupernodeState build_supernode(const AttributedGraph& g, const Subgraph& anchor,
                               const BoundedClassResult& bfs, const FilterFn& h,
                               const WeightFn& gfn) {
    (void)anchor; // identified by bfs.members; kept for call-site clarity
    if (bfs.members.empty()) throw EstimatorError("empty supernode");
    NodePredicate hpred = h.bind(g);

    SupernodeState sn;
    sn.members = bfs.members; // already sorted
    sn.member_set.insert(sn.members.begin(), sn.members.end());
    sn.alpha_inside = bfs.alpha_partial;
    (void)gfn;

    for (const Subgraph& m : sn.members) {
        for (const Subgraph& nb : hon_neighborhood(g, m, hpred)) {
            sn.degree_inside_sum += 1;
            if (!sn.member_set.count(nb)) sn.boundary_edges.emplace_back(m, nb);
        }
    }
    return sn;
}

// -------------------------------------------------------------------------
// Non-backtracking steps and tours
// -------------------------------------------------------------------------

std::optional<Subgraph> nrw_next(const std::vector<Subgraph>& neighborhood, const Subgraph& prev,
                                 bool has_prev, Rng& rng) {
    if (neighborhood.empty()) return std::nullopt;
    if (!has_prev) return neighborhood[rng.below(neighborhood.size())];
    std::size_t skip = neighborhood.size();
    for (std::size_t i = 0; i < neighborhood.size(); ++i)
        if (neighborhood[i] == prev) {
            skip = i;
            break;
        }
    if (skip == neighborhood.size()) return neighborhood[rng.below(neighborhood.size())];
    if (neighborhood.size() == 1) return prev; // degree 1: backtracking allowed
    std::size_t pick = rng.below(neighborhood.size() - 1);
    if (pick >= skip) ++pick;
    return neighborhood[pick];
}

TourResult run_tour(const AttributedGraph& g, const SupernodeState& sn, MembershipOracle& oracle,
                    const WeightFn& gfn, const NodePredicate& h, Rng& rng, std::size_t max_len) {
    if (sn.boundary_edges.empty()) throw NoBoundary("supernode has no boundary edges");
    if (max_len < 3) throw UsageError("max tour length must be >= 3");

    // On the collapsed multigraph the non-backtracking exclusion must be per
    // EDGE, not per node: after regeneration only the crossed boundary edge
    // is barred, other members stay reachable (each such step ends the
    // tour). Excluding every member would skew the walk's stationary law at
    // nodes with several supernode neighbors and bias the estimator.
    const auto& entry = sn.boundary_edges[rng.below(sn.boundary_edges.size())];
    Subgraph cur = entry.second;
    Subgraph prev = entry.first; // the member crossed on the way out

    TourResult t;
    t.length = 2; // collapsed start state + first interior state

    std::vector<Subgraph> candidates;
    for (;;) {
        std::vector<Subgraph> neigh = hon_neighborhood(g, cur, h);
        ++t.interior_visits;

        MembershipAnswer ans = oracle.test(cur);
        if (ans == MembershipAnswer::Yes && !neigh.empty()) {
            t.interior_sum += gfn.eval(g, cur, h) / static_cast<double>(neigh.size());
            t.related_count += 1.0;
        }

        candidates.clear();
        for (const Subgraph& n : neigh)
            if (n != prev) candidates.push_back(n);

        if (candidates.empty()) {
            // Degree-1 dead end: backtracking is the only move.
            if (sn.contains(prev)) {
                ++t.length;
                return t;
            }
            std::swap(cur, prev);
        } else {
            Subgraph next = candidates[rng.below(candidates.size())];
            if (sn.contains(next)) {
                ++t.length; // closing supernode state
                return t;
            }
            prev = cur;
            cur = next;
        }
        ++t.length;
        if (t.length >= max_len) {
            t.truncated = true;
            return t;
        }
    }
}

// -------------------------------------------------------------------------
// Alpha estimation
// -------------------------------------------------------------------------

namespace {

struct MeanStderr {
    double mean = 0, stderr_ = 0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return r;
    double ss = 0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    double var = ss / static_cast<double>(xs.size() - 1);
    r.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
    return r;
}

std::pair<AlphaEstimate, AlphaEstimate> estimate_alpha_impl(
    const AttributedGraph& g, const Subgraph& anchor, const RelationSpec& rel, const WeightFn& gfn,
    const FilterFn& h, const AlphaOptions& opts, std::uint64_t master_seed, bool want_pair) {
    if (opts.tours < 1) throw UsageError("tour count must be >= 1");
    NodePredicate hpred = h.bind(g);

    BoundedClassResult bfs =
        bounded_class_bfs(g, anchor, rel, opts.budget, gfn, h, opts.cert_cap);

    AlphaEstimate a1;
    a1.bfs_visited = bfs.visited_count;
    a1.class_complete = bfs.complete;
    a1.supernode_size = bfs.members.size();
    a1.uncertified_hits = bfs.uncertified_seen;
    a1.membership_overflows = bfs.membership_overflows;
    AlphaEstimate a2 = a1;

    if (bfs.complete) {
        a1.exact = true;
        a1.value = bfs.alpha_partial;
        a1.steps_total = bfs.visited_count;
        a2 = a1;
        if (want_pair) {
            double degsum = 0;
            for (const Subgraph& m : bfs.members)
                degsum += static_cast<double>(hon_degree(g, m, hpred));
            a2.value = degsum;
            a1.steps_total += bfs.members.size();
            a2.steps_total = a1.steps_total;
        }
        return {a1, a2};
    }

    SupernodeState sn = build_supernode(g, anchor, bfs, h, gfn);
    const double d_boundary = static_cast<double>(sn.boundary_degree());
    a1.boundary_degree = sn.boundary_degree();
    a2.boundary_degree = a1.boundary_degree;

    if (sn.boundary_edges.empty()) {
        // Isolated incomplete class: nothing to sample from. Report the
        // partial value, flagged.
        a1.no_boundary = true;
        a1.value = sn.alpha_inside;
        a1.steps_total = bfs.visited_count + sn.members.size();
        a2 = a1;
        a2.value = sn.degree_inside_sum;
        return {a1, a2};
    }

    const std::size_t q = opts.tours;
    std::vector<TourResult> tours(q);

    auto run_range = [&](std::size_t first, std::size_t stride) {
        for (std::size_t r = first; r < q; r += stride) {
            Rng rng = derive_rng(master_seed, rng_stream::kTour, anchor.hash(), r);
            MembershipOracle local(g, rel, anchor, opts.cert_cap);
            tours[r] = run_tour(g, sn, local, gfn, hpred, rng, opts.max_tour_len);
        }
    };

    if (rel.requires_class_context()) {
        // Certifications persist across tours, so tours must run in order.
        MembershipOracle oracle(g, rel, anchor, opts.cert_cap);
        for (const Subgraph& m : sn.members) oracle.add_certified(m);
        for (std::size_t r = 0; r < q; ++r) {
            Rng rng = derive_rng(master_seed, rng_stream::kTour, anchor.hash(), r);
            tours[r] = run_tour(g, sn, oracle, gfn, hpred, rng, opts.max_tour_len);
        }
        a1.uncertified_hits += oracle.uncertified_count();
        a1.membership_overflows += oracle.overflow_count();
    } else {
        int nthreads = std::max(1, opts.tour_threads);
        if (nthreads == 1 || q < 2) {
            MembershipOracle oracle(g, rel, anchor, opts.cert_cap);
            for (std::size_t r = 0; r < q; ++r) {
                Rng rng = derive_rng(master_seed, rng_stream::kTour, anchor.hash(), r);
                tours[r] = run_tour(g, sn, oracle, gfn, hpred, rng, opts.max_tour_len);
            }
        } else {
            std::vector<std::thread> pool;
            std::size_t stride = static_cast<std::size_t>(nthreads);
            for (std::size_t w = 0; w < stride; ++w) pool.emplace_back(run_range, w, stride);
            for (auto& th : pool) th.join();
        }
    }

    std::vector<double> per_tour1, per_tour2, lens;
    per_tour1.reserve(q);
    per_tour2.reserve(q);
    lens.reserve(q);
    double sum_g = 0, sum_rel = 0;
    for (const TourResult& t : tours) {
        if (t.truncated) ++a1.truncated_tours;
        sum_g += t.interior_sum;
        sum_rel += t.related_count;
        per_tour1.push_back(sn.alpha_inside + d_boundary * t.interior_sum);
        per_tour2.push_back(sn.degree_inside_sum + d_boundary * t.related_count);
        lens.push_back(static_cast<double>(t.length));
        a1.tour_steps += t.interior_visits;
    }
    if (a1.truncated_tours > 0 && !opts.allow_truncation)
        throw TourTruncated(std::to_string(a1.truncated_tours) + " of " + std::to_string(q) +
                            " tours exceeded max length " + std::to_string(opts.max_tour_len));

    a1.tours_used = q;
    a1.value = sn.alpha_inside + d_boundary / static_cast<double>(q) * sum_g;
    MeanStderr m1 = mean_stderr(per_tour1);
    a1.tour_mean = m1.mean;
    a1.tour_stderr = m1.stderr_;
    MeanStderr ml = mean_stderr(lens);
    a1.tour_len_mean = ml.mean;
    a1.tour_len_stderr = ml.stderr_;
    a1.steps_total = bfs.visited_count + sn.members.size() + a1.tour_steps;

    a2.tours_used = q;
    a2.boundary_degree = a1.boundary_degree;
    a2.truncated_tours = a1.truncated_tours;
    a2.tour_steps = a1.tour_steps;
    a2.value = sn.degree_inside_sum + d_boundary / static_cast<double>(q) * sum_rel;
    MeanStderr m2 = mean_stderr(per_tour2);
    a2.tour_mean = m2.mean;
    a2.tour_stderr = m2.stderr_;
    a2.tour_len_mean = a1.tour_len_mean;
    a2.tour_len_stderr = a1.tour_len_stderr;
    a2.steps_total = a1.steps_total;
    a2.uncertified_hits = a1.uncertified_hits;
    a2.membership_overflows = a1.membership_overflows;
    return {a1, a2};
}

} // namespace

AlphaEstimate estimate_alpha(const AttributedGraph& g, const Subgraph& anchor,
                             const RelationSpec& rel, const WeightFn& gfn, const FilterFn& h,
                             const AlphaOptions& opts, std::uint64_t master_seed) {
    return estimate_alpha_impl(g, anchor, rel, gfn, h, opts, master_seed, false).first;
}

std::pair<AlphaEstimate, AlphaEstimate> estimate_alpha_pair(const AttributedGraph& g,
                                                            const Subgraph& anchor,
                                                            const RelationSpec& rel,
                                                            const WeightFn& gfn, const FilterFn& h,
                                                            const AlphaOptions& opts,
                                                            std::uint64_t master_seed) {
    return estimate_alpha_impl(g, anchor, rel, gfn, h, opts, master_seed, true);
}

// -------------------------------------------------------------------------
// Upper layer
// -------------------------------------------------------------------------

std::size_t default_burn_in(const AttributedGraph& g, int k) {
    double n = static_cast<double>(std::max<std::size_t>(2, g.node_count()));
    return static_cast<std::size_t>(10.0 * k * std::ceil(std::log(n)));
}

void upper_walk(const AttributedGraph& g, int k, std::size_t t, std::size_t burn_in,
                const NodePredicate& h, Rng& rng, const std::optional<Subgraph>& start,
                const std::function<void(const Subgraph&)>& yield) {
    if (t < 1) throw UsageError("step count must be >= 1");
    Subgraph cur;
    if (start) {
        if (start->size() != k) throw UsageError("start subgraph has wrong size");
        if (!passes(h, *start)) throw InvalidStart("start subgraph rejected by the validity filter");
        cur = *start;
    } else {
        cur = random_seed_subgraph(g, k, h, rng);
    }

    auto advance = [&]() {
        std::vector<Subgraph> neigh = hon_neighborhood(g, cur, h);
        if (neigh.empty())
            throw StuckAtIsolatedNode("random walk stuck: subgraph " + cur.to_string() +
                                      " has no valid neighbor");
        cur = neigh[rng.below(neigh.size())];
    };

    for (std::size_t i = 0; i < burn_in; ++i) advance();
    yield(cur);
    for (std::size_t i = 1; i < t; ++i) {
        advance();
        yield(cur);
    }
}

// -------------------------------------------------------------------------
// Class cache + F estimation
// -------------------------------------------------------------------------

ClassCache::ClassCache(const AttributedGraph& g, const RelationSpec& rel) : g_(g), rel_(rel) {}

std::pair<std::size_t, bool> ClassCache::lookup_or_insert(const Subgraph& s) {
    switch (rel_.kind) {
    case RelationKind::Identity: {
        auto [it, inserted] = by_subgraph_.emplace(s, anchors_.size());
        if (inserted) anchors_.push_back(s);
        return {it->second, inserted};
    }
    case RelationKind::SharedHubs: {
        auto key = std::make_pair(canonical_code(g_, s).bytes, hubs(g_, s, rel_.hub_degree));
        auto [it, inserted] = by_code_hubs_.emplace(std::move(key), anchors_.size());
        if (inserted) anchors_.push_back(s);
        return {it->second, inserted};
    }
    case RelationKind::Perc: {
        auto hit = by_subgraph_.find(s);
        if (hit != by_subgraph_.end()) return {hit->second, false};
        PatternCode code = canonical_code(g_, s);
        // Lowest matching class wins, so the mapping is deterministic in
        // sample order.
        std::size_t best = anchors_.size();
        for (int i = 0; i < s.size(); ++i) {
            auto it = perc_subset_index_.find(s.without(i));
            if (it == perc_subset_index_.end()) continue;
            for (std::size_t idx : it->second)
                if (idx < best && class_codes_[idx] == code) best = idx;
        }
        bool is_new = best == anchors_.size();
        if (is_new) {
            anchors_.push_back(s);
            class_codes_.push_back(code);
        }
        by_subgraph_.emplace(s, best);
        for (int i = 0; i < s.size(); ++i) {
            auto& owners = perc_subset_index_[s.without(i)];
            if (std::find(owners.begin(), owners.end(), best) == owners.end())
                owners.push_back(best);
        }
        return {best, is_new};
    }
    case RelationKind::UserDefined: {
        for (std::size_t i = 0; i < anchors_.size(); ++i)
            if (related_local(rel_, g_, anchors_[i], s)) return {i, false};
        anchors_.push_back(s);
        return {anchors_.size() - 1, true};
    }
    }
    throw EstimatorError("unreachable relation kind");
}

void aggregate_f(FEstimate& est) {
    est.f.clear();
    est.lambda_hat = 0;
    for (std::size_t idx : est.sample_class) {
        const ClassEstimate& c = est.classes[idx];
        if (c.alpha2.value <= 0)
            throw EstimatorError("degree-weight estimate alpha2 is zero for class anchored at " +
                                 c.anchor.to_string() +
                                 " (isolated seed subgraph cannot be reweighted)");
        double ratio = (est.mcc_mode ? 1.0 : c.alpha1.value) / c.alpha2.value;
        est.f[c.pattern] += ratio;
        est.lambda_hat += ratio;
    }
    if (est.lambda_hat > 0)
        for (auto& [pattern, value] : est.f) value /= est.lambda_hat;
}

FEstimate estimate_F(const AttributedGraph& g, const RelationSpec& rel, const WeightFn& gfn,
                     const FilterFn& h, const FOptions& opts) {
    NodePredicate hpred = h.bind(g);
    std::size_t burn = opts.burn_in ? *opts.burn_in : default_burn_in(g, opts.k);

    std::optional<Subgraph> start = opts.start;
    if (!start) {
        Rng seed_rng = derive_rng(opts.seed, rng_stream::kSeedSubgraph);
        start = random_seed_subgraph(g, opts.k, hpred, seed_rng);
    }

    std::vector<Subgraph> samples;
    samples.reserve(opts.steps);
    Rng walk_rng = derive_rng(opts.seed, rng_stream::kUpperWalk);
    upper_walk(g, opts.k, opts.steps, burn, hpred, walk_rng, start,
               [&](const Subgraph& s) { samples.push_back(s); });

    FEstimate est;
    est.mcc_mode = opts.mcc;
    est.samples_used = samples.size();
    est.upper_steps = burn + (samples.size() > 0 ? samples.size() - 1 : 0);

    ClassCache cache(g, rel);
    for (const Subgraph& s : samples) {
        auto [idx, is_new] = cache.lookup_or_insert(s);
        if (is_new) {
            auto [a1, a2] = estimate_alpha_pair(g, s, rel, gfn, h, opts.alpha, opts.seed);
            ClassEstimate c;
            c.anchor = s;
            c.pattern = canonical_code(g, s);
            c.alpha1 = a1;
            c.alpha2 = a2;
            est.classes.push_back(std::move(c));
        }
        est.classes[idx].sample_count += 1;
        est.sample_class.push_back(idx);
    }
    est.samples = std::move(samples);
    for (const ClassEstimate& c : est.classes) {
        est.lower_steps += c.alpha1.steps_total;
        est.truncated_tours += c.alpha1.truncated_tours;
        est.uncertified_hits += c.alpha1.uncertified_hits;
        est.membership_overflows += c.alpha1.membership_overflows;
    }
    aggregate_f(est);
    return est;
}

} // namespace relmine
