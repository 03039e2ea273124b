#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>

#include "relmine/error.hpp"

namespace relmine {

using NodeId = std::uint32_t;
using Label = std::int32_t;

// A connected induced subgraph (CIS) of the host graph, identified by its
// sorted node set. Edges are never stored; they are implied by the host
// graph. Two values are equal iff the node sets are equal.
//
// Capacity is a hard compile-time bound; all walk/enumeration code works
// with k far below it.
class Subgraph {
public:
    static constexpr int kMaxNodes = 12;

    Subgraph() = default;

    Subgraph(std::initializer_list<NodeId> nodes) {
        assign_unsorted(std::span<const NodeId>(nodes.begin(), nodes.size()));
    }

    static Subgraph from_unsorted(std::span<const NodeId> nodes) {
        Subgraph s;
        s.assign_unsorted(nodes);
        return s;
    }

    // pre: strictly ascending
    static Subgraph from_sorted(std::span<const NodeId> nodes) {
        Subgraph s;
        if (nodes.size() > kMaxNodes)
            throw SubgraphTooLarge("subgraph size " + std::to_string(nodes.size()) +
                                   " exceeds capacity " + std::to_string(kMaxNodes));
        s.size_ = static_cast<std::uint8_t>(nodes.size());
        std::copy(nodes.begin(), nodes.end(), s.nodes_.begin());
        return s;
    }

    int size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    NodeId operator[](int i) const noexcept { return nodes_[static_cast<std::size_t>(i)]; }

    std::span<const NodeId> nodes() const noexcept {
        return std::span<const NodeId>(nodes_.data(), size_);
    }

    bool contains(NodeId v) const noexcept {
        const auto* end = nodes_.data() + size_;
        return std::binary_search(nodes_.data(), end, v);
    }

    // The k-1 node set obtained by dropping position idx.
    Subgraph without(int idx) const {
        Subgraph s;
        s.size_ = static_cast<std::uint8_t>(size_ - 1);
        int w = 0;
        for (int i = 0; i < size_; ++i)
            if (i != idx) s.nodes_[static_cast<std::size_t>(w++)] = nodes_[static_cast<std::size_t>(i)];
        return s;
    }

    // Insert v keeping the set sorted. pre: v not already present.
    Subgraph with(NodeId v) const {
        Subgraph s;
        s.size_ = static_cast<std::uint8_t>(size_ + 1);
        int w = 0;
        int i = 0;
        while (i < size_ && nodes_[static_cast<std::size_t>(i)] < v)
            s.nodes_[static_cast<std::size_t>(w++)] = nodes_[static_cast<std::size_t>(i++)];
        s.nodes_[static_cast<std::size_t>(w++)] = v;
        while (i < size_)
            s.nodes_[static_cast<std::size_t>(w++)] = nodes_[static_cast<std::size_t>(i++)];
        return s;
    }

    std::size_t shared_nodes(const Subgraph& o) const noexcept {
        std::size_t n = 0;
        int i = 0, j = 0;
        while (i < size_ && j < o.size_) {
            NodeId a = nodes_[static_cast<std::size_t>(i)], b = o.nodes_[static_cast<std::size_t>(j)];
            if (a == b) { ++n; ++i; ++j; }
            else if (a < b) ++i;
            else ++j;
        }
        return n;
    }

    friend bool operator==(const Subgraph& a, const Subgraph& b) noexcept {
        if (a.size_ != b.size_) return false;
        return std::equal(a.nodes_.begin(), a.nodes_.begin() + a.size_, b.nodes_.begin());
    }
    friend bool operator!=(const Subgraph& a, const Subgraph& b) noexcept { return !(a == b); }

    // Order by node set (size first, then lexicographic); used wherever a
    // deterministic neighbourhood or report order is required.
    friend bool operator<(const Subgraph& a, const Subgraph& b) noexcept {
        if (a.size_ != b.size_) return a.size_ < b.size_;
        return std::lexicographical_compare(a.nodes_.begin(), a.nodes_.begin() + a.size_,
                                            b.nodes_.begin(), b.nodes_.begin() + b.size_);
    }

    std::uint64_t hash() const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
        for (int i = 0; i < size_; ++i) {
            h ^= nodes_[static_cast<std::size_t>(i)] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
        }
        return h;
    }

    std::string to_string() const {
        std::string out = "{";
        for (int i = 0; i < size_; ++i) {
            if (i) out += ',';
            out += std::to_string(nodes_[static_cast<std::size_t>(i)]);
        }
        out += '}';
        return out;
    }

private:
    void assign_unsorted(std::span<const NodeId> nodes) {
        if (nodes.size() > kMaxNodes)
            throw SubgraphTooLarge("subgraph size " + std::to_string(nodes.size()) +
                                   " exceeds capacity " + std::to_string(kMaxNodes));
        size_ = static_cast<std::uint8_t>(nodes.size());
        std::copy(nodes.begin(), nodes.end(), nodes_.begin());
        std::sort(nodes_.begin(), nodes_.begin() + size_);
        for (int i = 1; i < size_; ++i)
            if (nodes_[static_cast<std::size_t>(i)] == nodes_[static_cast<std::size_t>(i - 1)])
                throw UsageError("duplicate node id in subgraph node set");
    }

    std::array<NodeId, kMaxNodes> nodes_{};
    std::uint8_t size_ = 0;
};

struct SubgraphHash {
    std::size_t operator()(const Subgraph& s) const noexcept {
        return static_cast<std::size_t>(s.hash());
    }
};

} // namespace relmine

template <>
struct std::hash<relmine::Subgraph> {
    std::size_t operator()(const relmine::Subgraph& s) const noexcept {
        return static_cast<std::size_t>(s.hash());
    }
};
