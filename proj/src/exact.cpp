#include "relmine/exact.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "relmine/error.hpp"

namespace relmine {

BoundedClassResult bounded_class_bfs(const AttributedGraph& g, const Subgraph& s,
                                     const RelationSpec& rel, std::size_t budget,
                                     const WeightFn& gfn, const FilterFn& h,
                                     std::size_t state_cap) {
    if (budget < 1) throw UsageError("budget must be >= 1");
    NodePredicate hpred = h.bind(g);
    if (!passes(hpred, s)) throw InvalidStart("start subgraph rejected by the validity filter");

    MembershipOracle oracle(g, rel, s, state_cap);

    BoundedClassResult res;
    std::unordered_set<Subgraph, SubgraphHash> visited; // H
    std::deque<Subgraph> queue;
    visited.insert(s);
    queue.push_back(s);

    // Reflexivity puts the anchor in its own class.
    std::unordered_set<Subgraph, SubgraphHash> member_set;
    member_set.insert(s);
    res.alpha_partial += gfn.eval(g, s, hpred);

    std::vector<Subgraph> newly;
    bool exhausted = false;
    while (!queue.empty() && !exhausted) {
        Subgraph cur = queue.front();
        queue.pop_front();
        for (const Subgraph& next : hon_neighborhood(g, cur, hpred)) {
            if (visited.count(next)) continue;
            if (visited.size() >= budget) {
                // The budget counts every h-valid subgraph generated, the
                // anchor included; checking before the insert keeps
                // |H| <= B while the last accepted subgraph is still
                // relation-tested below.
                exhausted = true;
                break;
            }
            visited.insert(next);
            queue.push_back(next);

            newly.clear();
            MembershipAnswer ans = oracle.test(next, &newly);
            if (oracle.is_exact()) {
                if (ans == MembershipAnswer::Yes && member_set.insert(next).second)
                    res.alpha_partial += gfn.eval(g, next, hpred);
            } else {
                // Perc: cascaded certifications may cover earlier visits too.
                for (const Subgraph& m : newly)
                    if (member_set.insert(m).second) res.alpha_partial += gfn.eval(g, m, hpred);
                if (ans == MembershipAnswer::Uncertified) ++res.uncertified_seen;
            }
        }
    }

    res.complete = !exhausted;
    res.visited_count = visited.size();
    res.membership_overflows = oracle.overflow_count();
    res.members.assign(member_set.begin(), member_set.end());
    std::sort(res.members.begin(), res.members.end());
    return res;
}

std::vector<Subgraph> exact_class_bruteforce(const AttributedGraph& g, const Subgraph& s,
                                             const RelationSpec& rel, const FilterFn& h,
                                             std::size_t enum_cap) {
    ClassPartition part = exact_classes(g, s.size(), rel, h, enum_cap);
    for (const auto& cls : part.classes)
        for (std::size_t idx : cls)
            if (part.subgraphs[idx] == s) {
                std::vector<Subgraph> out;
                out.reserve(cls.size());
                for (std::size_t j : cls) out.push_back(part.subgraphs[j]);
                std::sort(out.begin(), out.end());
                return out;
            }
    // s is not h-valid (or not a CIS of g); by convention its class is empty.
    return {};
}

double exact_alpha_bruteforce(const AttributedGraph& g, const Subgraph& s, const RelationSpec& rel,
                              const WeightFn& gfn, const FilterFn& h, std::size_t enum_cap) {
    NodePredicate hpred = h.bind(g);
    double alpha = 0;
    for (const Subgraph& m : exact_class_bruteforce(g, s, rel, h, enum_cap))
        alpha += gfn.eval(g, m, hpred);
    return alpha;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

ClassPartition exact_classes(const AttributedGraph& g, int k, const RelationSpec& rel,
                             const FilterFn& h, std::size_t enum_cap) {
    ClassPartition part;
    part.subgraphs = enumerate_cis_all(g, k, h.bind(g), enum_cap);
    const std::size_t n = part.subgraphs.size();
    UnionFind uf(n);

    switch (rel.kind) {
    case RelationKind::Identity:
        break; // singletons
    case RelationKind::SharedHubs: {
        // (pattern, hub set) is a complete class key.
        std::map<std::pair<std::string, std::vector<NodeId>>, std::size_t> first_of;
        for (std::size_t i = 0; i < n; ++i) {
            auto key = std::make_pair(canonical_code(g, part.subgraphs[i]).bytes,
                                      hubs(g, part.subgraphs[i], rel.hub_degree));
            auto [it, inserted] = first_of.emplace(key, i);
            if (!inserted) uf.unite(i, it->second);
        }
        break;
    }
    case RelationKind::Perc: {
        // Chains run along shared (k-1)-subsets between same-pattern nodes.
        std::vector<PatternCode> codes(n);
        for (std::size_t i = 0; i < n; ++i) codes[i] = canonical_code(g, part.subgraphs[i]);
        std::unordered_map<Subgraph, std::vector<std::size_t>, SubgraphHash> by_subset;
        for (std::size_t i = 0; i < n; ++i)
            for (int d = 0; d < part.subgraphs[i].size(); ++d)
                by_subset[part.subgraphs[i].without(d)].push_back(i);
        for (auto& [key, owners] : by_subset) {
            for (std::size_t a = 0; a < owners.size(); ++a)
                for (std::size_t b = a + 1; b < owners.size(); ++b)
                    if (codes[owners[a]] == codes[owners[b]]) uf.unite(owners[a], owners[b]);
        }
        break;
    }
    case RelationKind::UserDefined: {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (related_local(rel, g, part.subgraphs[i], part.subgraphs[j])) uf.unite(i, j);
        break;
    }
    }

    std::unordered_map<std::size_t, std::size_t> root_to_class;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = uf.find(i);
        auto [it, inserted] = root_to_class.emplace(r, part.classes.size());
        if (inserted) part.classes.emplace_back();
        part.classes[it->second].push_back(i);
    }
    return part;
}

ExactFReport exact_F(const AttributedGraph& g, int k, const RelationSpec& rel, const WeightFn& gfn,
                     const FilterFn& h, std::size_t enum_cap) {
    NodePredicate hpred = h.bind(g);
    ClassPartition part = exact_classes(g, k, rel, h, enum_cap);

    ExactFReport rep;
    rep.subgraph_count = part.subgraphs.size();
    rep.class_count = part.classes.size();

    // Every member of a class contributes alpha/|C|, so a class contributes
    // exactly alpha to its pattern.
    for (const auto& cls : part.classes) {
        double alpha = 0;
        for (std::size_t idx : cls) alpha += gfn.eval(g, part.subgraphs[idx], hpred);
        PatternCode pattern = canonical_code(g, part.subgraphs[cls.front()]);
        rep.f[pattern] += alpha;
        rep.lambda += alpha;
    }
    if (rep.lambda > 0)
        for (auto& [pattern, value] : rep.f) value /= rep.lambda;
    return rep;
}

} // namespace relmine
