#pragma once

// Test-only oracles and generators. Everything here stays independent of the
// library's production code paths: enumeration by subset scan, connectivity
// by its own DFS, HON adjacency straight from the definition, classes by
// pairwise closure.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "relmine/exact.hpp"
#include "relmine/rng.hpp"

namespace testsupport {

using namespace relmine;

// ---------------------------------------------------------------------------
// Small graph builders
// ---------------------------------------------------------------------------

inline AttributedGraph cycle_graph(int n, std::vector<Label> labels = {}) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i)
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n));
    if (labels.empty()) labels.assign(static_cast<std::size_t>(n), 0);
    return AttributedGraph::from_edges(static_cast<std::size_t>(n), edges, labels);
}

inline AttributedGraph path_graph(int n, std::vector<Label> labels = {}) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i + 1 < n; ++i)
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
    if (labels.empty()) labels.assign(static_cast<std::size_t>(n), 0);
    return AttributedGraph::from_edges(static_cast<std::size_t>(n), edges, labels);
}

inline AttributedGraph complete_graph(int n, std::vector<Label> labels = {}) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    if (labels.empty()) labels.assign(static_cast<std::size_t>(n), 0);
    return AttributedGraph::from_edges(static_cast<std::size_t>(n), edges, labels);
}

// center = node 0, leaves 1..n
inline AttributedGraph star_graph(int leaves, std::vector<Label> labels = {}) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 1; i <= leaves; ++i) edges.emplace_back(0u, static_cast<NodeId>(i));
    if (labels.empty()) labels.assign(static_cast<std::size_t>(leaves + 1), 0);
    return AttributedGraph::from_edges(static_cast<std::size_t>(leaves + 1), edges, labels);
}

// Erdos-Renyi with labels drawn from [0, label_classes); deterministic per seed.
inline AttributedGraph random_graph(int n, double p, int label_classes, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.unit() < p) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    std::vector<Label> labels(static_cast<std::size_t>(n));
    for (auto& l : labels)
        l = static_cast<Label>(rng.below(static_cast<std::uint64_t>(std::max(1, label_classes))));
    return AttributedGraph::from_edges(static_cast<std::size_t>(n), edges, labels);
}

// ---------------------------------------------------------------------------
// Naive oracles
// ---------------------------------------------------------------------------

inline bool naive_connected(const AttributedGraph& g, const std::vector<NodeId>& nodes) {
    if (nodes.empty()) return false;
    std::set<NodeId> inside(nodes.begin(), nodes.end());
    std::set<NodeId> seen;
    std::vector<NodeId> stack{nodes[0]};
    seen.insert(nodes[0]);
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : nodes) {
            if (seen.count(u) || !inside.count(u)) continue;
            if (g.has_edge(v, u)) {
                seen.insert(u);
                stack.push_back(u);
            }
        }
    }
    return seen.size() == nodes.size();
}

// All k-subsets of V, kept when connected. Exponential; graphs <= ~20 nodes.
inline std::vector<Subgraph> naive_enumerate(const AttributedGraph& g, int k) {
    std::vector<Subgraph> out;
    const int n = static_cast<int>(g.node_count());
    if (k < 1 || k > n) return out;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        std::vector<NodeId> nodes;
        for (int i : idx) nodes.push_back(static_cast<NodeId>(i));
        if (naive_connected(g, nodes))
            out.push_back(Subgraph::from_unsorted(nodes));
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// HON adjacency straight from the definition: share exactly k-1 nodes.
inline bool naive_hon_adjacent(const Subgraph& a, const Subgraph& b) {
    return a != b && a.shared_nodes(b) == static_cast<std::size_t>(a.size() - 1);
}

inline std::vector<Subgraph> naive_hon_neighborhood(const AttributedGraph& g, const Subgraph& s,
                                                    const NodePredicate& h = {}) {
    std::vector<Subgraph> out;
    for (const Subgraph& c : naive_enumerate(g, s.size()))
        if (naive_hon_adjacent(s, c) && passes(h, c)) out.push_back(c);
    return out;
}

// Pairwise local relation + fixpoint closure; independent of union-find and
// of certification.
inline std::vector<std::vector<Subgraph>> naive_classes(const AttributedGraph& g, int k,
                                                        const RelationSpec& rel,
                                                        const FilterFn& filt) {
    NodePredicate h = filt.bind(g);
    std::vector<Subgraph> all;
    for (const Subgraph& s : naive_enumerate(g, k))
        if (passes(h, s)) all.push_back(s);
    const std::size_t n = all.size();
    std::vector<std::vector<char>> rel_mat(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rel_mat[i][j] = related_local(rel, g, all[i], all[j]) ? 1 : 0;
    // transitive closure (Warshall)
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            if (rel_mat[i][m])
                for (std::size_t j = 0; j < n; ++j)
                    if (rel_mat[m][j]) rel_mat[i][j] = 1;
    std::vector<char> assigned(n, 0);
    std::vector<std::vector<Subgraph>> classes;
    for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i]) continue;
        std::vector<Subgraph> cls;
        for (std::size_t j = 0; j < n; ++j)
            if (rel_mat[i][j]) {
                cls.push_back(all[j]);
                assigned[j] = 1;
            }
        std::sort(cls.begin(), cls.end());
        classes.push_back(std::move(cls));
    }
    return classes;
}

inline std::vector<Subgraph> naive_class_of(const AttributedGraph& g, const Subgraph& s,
                                            const RelationSpec& rel, const FilterFn& filt) {
    for (auto& cls : naive_classes(g, s.size(), rel, filt))
        if (std::binary_search(cls.begin(), cls.end(), s)) return cls;
    return {};
}

// h-valid HON component of s, by BFS over naive adjacency.
inline std::vector<Subgraph> naive_hon_component(const AttributedGraph& g, const Subgraph& s,
                                                 const FilterFn& filt) {
    NodePredicate h = filt.bind(g);
    std::vector<Subgraph> all;
    for (const Subgraph& c : naive_enumerate(g, s.size()))
        if (passes(h, c)) all.push_back(c);
    std::set<Subgraph> seen{s};
    std::vector<Subgraph> stack{s};
    while (!stack.empty()) {
        Subgraph cur = stack.back();
        stack.pop_back();
        for (const Subgraph& c : all)
            if (!seen.count(c) && naive_hon_adjacent(cur, c)) {
                seen.insert(c);
                stack.push_back(c);
            }
    }
    return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// Statistics helpers
// ---------------------------------------------------------------------------

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) return 1.0;
    auto gamma_series = [](double a_, double x_) {
        double sum = 1.0 / a_, term = sum, ap = a_;
        for (int i = 0; i < 500; ++i) {
            ap += 1;
            term *= x_ / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x_ + a_ * std::log(x_) - std::lgamma(a_));
    };
    auto gamma_cf = [](double a_, double x_) {
        double b = x_ + 1 - a_, c = 1e300, d = 1 / b, h = d;
        for (int i = 1; i <= 500; ++i) {
            double an = -static_cast<double>(i) * (static_cast<double>(i) - a_);
            b += 2;
            d = an * d + b;
            if (std::fabs(d) < 1e-300) d = 1e-300;
            c = b + an / c;
            if (std::fabs(c) < 1e-300) c = 1e-300;
            d = 1 / d;
            double del = d * c;
            h *= del;
            if (std::fabs(del - 1) < 1e-15) break;
        }
        return std::exp(-x_ + a_ * std::log(x_) - std::lgamma(a_)) * h;
    };
    if (x == 0) return 1.0;
    if (x < a + 1) return 1.0 - gamma_series(a, x);
    return gamma_cf(a, x);
}

// p-value for a chi-square statistic with df degrees of freedom.
inline double chi_square_p(double stat, double df) { return gamma_q(df / 2, stat / 2); }

struct Moments {
    double mean = 0, stderr_ = 0;
    std::size_t n = 0;
};

inline Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = xs.size();
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return m;
    double ss = 0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    return m;
}

} // namespace testsupport
