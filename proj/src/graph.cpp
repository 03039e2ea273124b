#include "relmine/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "relmine/error.hpp"

namespace relmine {

namespace {

bool parse_int64(const std::string& tok, long long& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

void AttributedGraph::finalize() {
    edge_count_ = 0;
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        edge_count_ += a.size();
    }
    edge_count_ /= 2;
    std::set<Label> distinct(labels_.begin(), labels_.end());
    label_count_ = static_cast<int>(distinct.size());
}

AttributedGraph AttributedGraph::from_edges(std::size_t node_count,
                                            std::span<const std::pair<NodeId, NodeId>> edges,
                                            std::span<const Label> labels,
                                            Strictness strictness) {
    AttributedGraph g;
    g.adj_.resize(node_count);
    g.labels_.assign(node_count, 0);
    if (!labels.empty()) {
        if (labels.size() != node_count)
            throw UsageError("label list size does not match node count");
        std::copy(labels.begin(), labels.end(), g.labels_.begin());
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw NodeOutOfRange("edge endpoint out of range: (" + std::to_string(u) + "," +
                                 std::to_string(v) + ")");
        if (u == v) {
            if (strictness == Strictness::Reject)
                throw ParseError("self-loop at node " + std::to_string(u));
            continue;
        }
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second) {
            if (strictness == Strictness::Reject)
                throw ParseError("duplicate edge (" + std::to_string(u) + "," +
                                 std::to_string(v) + ")");
            continue;
        }
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    g.finalize();
    return g;
}

AttributedGraph AttributedGraph::load(std::istream& in, Strictness strictness) {
    std::unordered_map<long long, Label> node_labels;
    std::vector<std::pair<long long, long long>> raw_edges;
    std::vector<std::size_t> edge_lines;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;

        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            std::string id_tok, label_tok;
            if (!(ss >> id_tok >> label_tok))
                throw ParseError("line " + std::to_string(lineno) + ": expected 'v <id> <label>'");
            long long id, label;
            if (!parse_int64(id_tok, id) || id < 0)
                throw ParseError("line " + std::to_string(lineno) + ": bad node id '" + id_tok + "'");
            if (!parse_int64(label_tok, label))
                throw ParseError("line " + std::to_string(lineno) + ": non-integer label '" +
                                 label_tok + "'");
            if (!node_labels.emplace(id, static_cast<Label>(label)).second)
                throw ParseError("line " + std::to_string(lineno) + ": duplicate node id " +
                                 std::to_string(id));
        } else if (tag == "e") {
            std::string u_tok, v_tok;
            if (!(ss >> u_tok >> v_tok))
                throw ParseError("line " + std::to_string(lineno) + ": expected 'e <u> <v>'");
            long long u, v;
            if (!parse_int64(u_tok, u) || !parse_int64(v_tok, v) || u < 0 || v < 0)
                throw ParseError("line " + std::to_string(lineno) + ": bad edge endpoint");
            raw_edges.emplace_back(u, v);
            edge_lines.push_back(lineno);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
        }
    }

    const std::size_t n = node_labels.size();
    std::vector<Label> labels(n, 0);
    for (const auto& [id, label] : node_labels) {
        if (static_cast<std::size_t>(id) >= n)
            throw ParseError("node ids are not dense: id " + std::to_string(id) + " with " +
                             std::to_string(n) + " nodes");
        labels[static_cast<std::size_t>(id)] = label;
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw_edges.size());
    for (std::size_t i = 0; i < raw_edges.size(); ++i) {
        auto [u, v] = raw_edges[i];
        if (static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
            throw ParseError("line " + std::to_string(edge_lines[i]) +
                             ": dangling edge endpoint (" + std::to_string(u) + "," +
                             std::to_string(v) + ")");
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return from_edges(n, edges, labels, strictness);
}

AttributedGraph AttributedGraph::load_file(const std::string& path, Strictness strictness) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open graph file: " + path);
    return load(in, strictness);
}

} // namespace relmine
