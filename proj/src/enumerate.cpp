#include "relmine/enumerate.hpp"

#include <algorithm>

#include "relmine/error.hpp"

namespace relmine {

namespace {

struct EsuState {
    const AttributedGraph* g;
    int k;
    NodeId root;
    const NodePredicate* h;
    const std::function<bool(const Subgraph&)>* emit;
    std::vector<NodeId> sub;

    bool adjacent_to_sub(NodeId u) const {
        for (NodeId x : sub)
            if (g->has_edge(u, x)) return true;
        return false;
    }

    // returns false to stop the whole enumeration
    bool extend(std::vector<NodeId> ext) {
        if (static_cast<int>(sub.size()) == k) {
            Subgraph s = Subgraph::from_unsorted(sub);
            if (!passes(*h, s)) return true;
            return (*emit)(s);
        }
        while (!ext.empty()) {
            NodeId w = ext.front();
            ext.erase(ext.begin());

            std::vector<NodeId> next_ext = ext;
            for (NodeId u : g->neighbors(w)) {
                if (u <= root) continue;
                if (std::find(sub.begin(), sub.end(), u) != sub.end()) continue;
                if (adjacent_to_sub(u)) continue; // exclusive neighborhood of w
                if (std::find(next_ext.begin(), next_ext.end(), u) == next_ext.end())
                    next_ext.push_back(u);
            }
            sub.push_back(w);
            bool keep_going = extend(std::move(next_ext));
            sub.pop_back();
            if (!keep_going) return false;
        }
        return true;
    }
};

} // namespace

void enumerate_cis(const AttributedGraph& g, int k, const NodePredicate& h,
                   const std::function<bool(const Subgraph&)>& emit) {
    if (k < 1) throw UsageError("k must be >= 1");
    if (k > Subgraph::kMaxNodes)
        throw SubgraphTooLarge("k " + std::to_string(k) + " exceeds capacity " +
                               std::to_string(Subgraph::kMaxNodes));
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (k == 1) {
            Subgraph s = Subgraph::from_sorted(std::span<const NodeId>(&v, 1));
            if (passes(h, s) && !emit(s)) return;
            continue;
        }
        EsuState st;
        st.g = &g;
        st.k = k;
        st.root = v;
        st.h = &h;
        st.emit = &emit;
        st.sub = {v};
        std::vector<NodeId> ext;
        for (NodeId u : g.neighbors(v))
            if (u > v) ext.push_back(u);
        if (!st.extend(std::move(ext))) return;
    }
}

std::vector<Subgraph> enumerate_cis_all(const AttributedGraph& g, int k, const NodePredicate& h,
                                        std::size_t cap) {
    std::vector<Subgraph> out;
    bool exceeded = false;
    enumerate_cis(g, k, h, [&](const Subgraph& s) {
        if (out.size() >= cap) {
            exceeded = true;
            return false;
        }
        out.push_back(s);
        return true;
    });
    if (exceeded)
        throw EnumerationCapExceeded("more than " + std::to_string(cap) +
                                     " connected induced subgraphs of size " + std::to_string(k));
    return out;
}

std::size_t count_cis(const AttributedGraph& g, int k, const NodePredicate& h, std::size_t cap) {
    std::size_t n = 0;
    bool exceeded = false;
    enumerate_cis(g, k, h, [&](const Subgraph&) {
        if (++n > cap) {
            exceeded = true;
            return false;
        }
        return true;
    });
    if (exceeded)
        throw EnumerationCapExceeded("more than " + std::to_string(cap) +
                                     " connected induced subgraphs of size " + std::to_string(k));
    return n;
}

Subgraph random_seed_subgraph(const AttributedGraph& g, int k, const NodePredicate& h, Rng& rng,
                              int max_attempts) {
    if (k < 1) throw UsageError("k must be >= 1");
    if (g.node_count() == 0) throw SeedNotFound("graph has no nodes");

    std::vector<NodeId> set, frontier;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        set.clear();
        set.push_back(static_cast<NodeId>(rng.below(g.node_count())));
        while (static_cast<int>(set.size()) < k) {
            frontier.clear();
            for (NodeId x : set)
                for (NodeId u : g.neighbors(x))
                    if (std::find(set.begin(), set.end(), u) == set.end())
                        frontier.push_back(u);
            std::sort(frontier.begin(), frontier.end());
            frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
            if (frontier.empty()) break;
            set.push_back(frontier[rng.below(frontier.size())]);
        }
        if (static_cast<int>(set.size()) != k) continue;
        Subgraph s = Subgraph::from_unsorted(set);
        if (passes(h, s)) return s;
    }
    throw SeedNotFound("no valid seed subgraph of size " + std::to_string(k) + " found after " +
                       std::to_string(max_attempts) + " attempts");
}

} // namespace relmine
