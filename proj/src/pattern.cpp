#include "relmine/pattern.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "relmine/error.hpp"

namespace relmine {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

// Permute positions within equal-label blocks only, so the label sequence
// stays sorted; select the permutation with the smallest adjacency bit
// string.
struct Canonicalizer {
    int k;
    const bool (*adj)[Subgraph::kMaxNodes];
    std::vector<std::pair<int, int>> blocks; // [first, last) in `order`
    std::vector<int> order;                  // positions sorted by label
    std::vector<std::uint8_t> best;
    bool have_best = false;

    void consider() {
        const std::size_t nbits = static_cast<std::size_t>(k) * (k - 1) / 2;
        std::vector<std::uint8_t> bits((nbits + 7) / 8, 0);
        std::size_t bit = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j, ++bit)
                if (adj[order[static_cast<std::size_t>(i)]][order[static_cast<std::size_t>(j)]])
                    bits[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
        if (!have_best || bits < best) {
            best = std::move(bits);
            have_best = true;
        }
    }

    void run(std::size_t block) {
        if (block == blocks.size()) {
            consider();
            return;
        }
        auto [first, last] = blocks[block];
        std::sort(order.begin() + first, order.begin() + last);
        do {
            run(block + 1);
        } while (std::next_permutation(order.begin() + first, order.begin() + last));
    }
};

} // namespace

PatternCode canonical_code(const AttributedGraph& g, const Subgraph& s, int max_k) {
    const int k = s.size();
    if (k == 0) throw UsageError("cannot canonicalize an empty subgraph");
    if (k > max_k)
        throw SubgraphTooLarge("subgraph of size " + std::to_string(k) +
                               " exceeds canonicalization bound " + std::to_string(max_k));

    bool adj[Subgraph::kMaxNodes][Subgraph::kMaxNodes] = {};
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            adj[i][j] = adj[j][i] = g.has_edge(s[i], s[j]);

    std::vector<std::pair<Label, int>> by_label(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) by_label[static_cast<std::size_t>(i)] = {g.label(s[i]), i};
    std::sort(by_label.begin(), by_label.end());

    Canonicalizer c;
    c.k = k;
    c.adj = adj;
    c.order.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) c.order[static_cast<std::size_t>(i)] = by_label[static_cast<std::size_t>(i)].second;
    for (int i = 0; i < k;) {
        int j = i;
        while (j < k && by_label[static_cast<std::size_t>(j)].first == by_label[static_cast<std::size_t>(i)].first) ++j;
        c.blocks.emplace_back(i, j);
        i = j;
    }
    c.run(0);

    PatternCode code;
    code.bytes.reserve(1 + static_cast<std::size_t>(k) * 4 + c.best.size());
    code.bytes.push_back(static_cast<char>(k));
    for (int i = 0; i < k; ++i) {
        auto u = static_cast<std::uint32_t>(by_label[static_cast<std::size_t>(i)].first);
        for (int b = 0; b < 4; ++b) code.bytes.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
    }
    code.bytes.append(reinterpret_cast<const char*>(c.best.data()), c.best.size());
    return code;
}

std::string PatternCode::hex() const {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char b : bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

PatternCode PatternCode::from_hex(const std::string& hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw ParseError("odd-length pattern hex string");
    PatternCode code;
    code.bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw ParseError("bad pattern hex string: " + hex);
        code.bytes.push_back(static_cast<char>((hi << 4) | lo));
    }
    return code;
}

PatternInfo decode_pattern(const PatternCode& code) {
    PatternInfo info;
    if (code.bytes.empty()) throw ParseError("empty pattern code");
    info.k = static_cast<unsigned char>(code.bytes[0]);
    const std::size_t nbits = static_cast<std::size_t>(info.k) * (info.k - 1) / 2;
    const std::size_t want = 1 + static_cast<std::size_t>(info.k) * 4 + (nbits + 7) / 8;
    if (code.bytes.size() != want) throw ParseError("malformed pattern code");

    for (int i = 0; i < info.k; ++i) {
        std::uint32_t u = 0;
        for (int b = 0; b < 4; ++b)
            u |= static_cast<std::uint32_t>(static_cast<unsigned char>(code.bytes[1 + 4 * static_cast<std::size_t>(i) + static_cast<std::size_t>(b)])) << (8 * b);
        info.labels.push_back(static_cast<Label>(u));
    }
    const char* bits = code.bytes.data() + 1 + static_cast<std::size_t>(info.k) * 4;
    std::size_t bit = 0;
    for (int i = 0; i < info.k; ++i)
        for (int j = i + 1; j < info.k; ++j, ++bit)
            if (static_cast<unsigned char>(bits[bit / 8]) & (0x80u >> (bit % 8)))
                info.edges.emplace_back(i, j);
    return info;
}

std::string render_pattern(const PatternCode& code) {
    PatternInfo info = decode_pattern(code);
    std::string out = std::to_string(info.k) + "|[";
    for (std::size_t i = 0; i < info.labels.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(info.labels[i]);
    }
    out += "]|[";
    for (std::size_t i = 0; i < info.edges.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(info.edges[i].first) + "-" + std::to_string(info.edges[i].second);
    }
    out += ']';
    return out;
}

} // namespace relmine
