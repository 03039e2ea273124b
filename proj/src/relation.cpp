#include "relmine/relation.hpp"

#include <algorithm>
#include <charconv>

#include "relmine/error.hpp"

namespace relmine {

namespace {

int parse_int_suffix(const std::string& text, std::size_t pos, const std::string& what) {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw UsageError("bad " + what + ": '" + text + "'");
    return value;
}

} // namespace

RelationSpec RelationSpec::parse(const std::string& text) {
    if (text == "identity") return identity();
    if (text == "perc") return perc();
    if (text.rfind("sh:", 0) == 0) return shared_hubs(parse_int_suffix(text, 3, "hub threshold"));
    throw UsageError("unknown relation '" + text + "' (expected identity, perc or sh:<d>)");
}

std::string RelationSpec::to_string() const {
    switch (kind) {
    case RelationKind::Identity: return "identity";
    case RelationKind::Perc: return "perc";
    case RelationKind::SharedHubs: return "sh:" + std::to_string(hub_degree);
    case RelationKind::UserDefined: return "user";
    }
    return "?";
}

WeightFn WeightFn::parse(const std::string& text) {
    if (text == "unit") return unit();
    if (text == "hondeg") return hon_deg();
    throw UsageError("unknown weight '" + text + "' (expected unit or hondeg)");
}

std::string WeightFn::to_string() const {
    switch (kind) {
    case WeightKind::Unit: return "unit";
    case WeightKind::HonDegree: return "hondeg";
    case WeightKind::UserDefined: return "user";
    }
    return "?";
}

bool FilterFn::accepts(const AttributedGraph& g, const Subgraph& s) const {
    switch (kind) {
    case FilterKind::None: return true;
    case FilterKind::MinInternalDegree: {
        for (int i = 0; i < s.size(); ++i) {
            int internal = 0;
            for (int j = 0; j < s.size(); ++j)
                if (j != i && g.has_edge(s[i], s[j])) ++internal;
            if (internal < min_internal_degree) return false;
        }
        return true;
    }
    case FilterKind::UserDefined: return user_fn(g, s);
    }
    return true;
}

NodePredicate FilterFn::bind(const AttributedGraph& g) const {
    if (kind == FilterKind::None) return {};
    FilterFn copy = *this;
    return [copy, &g](const Subgraph& s) { return copy.accepts(g, s); };
}

FilterFn FilterFn::parse(const std::string& text) {
    if (text == "none") return none();
    const std::string prefix = "min-internal-degree:";
    if (text.rfind(prefix, 0) == 0)
        return min_internal(parse_int_suffix(text, prefix.size(), "internal degree threshold"));
    throw UsageError("unknown filter '" + text + "' (expected none or min-internal-degree:<t>)");
}

std::string FilterFn::to_string() const {
    switch (kind) {
    case FilterKind::None: return "none";
    case FilterKind::MinInternalDegree:
        return "min-internal-degree:" + std::to_string(min_internal_degree);
    case FilterKind::UserDefined: return "user";
    }
    return "?";
}

std::vector<NodeId> hubs(const AttributedGraph& g, const Subgraph& s, int d) {
    std::vector<NodeId> out;
    for (NodeId v : s.nodes())
        if (g.degree(v) >= static_cast<std::size_t>(d)) out.push_back(v);
    return out;
}

bool related_local(const RelationSpec& rel, const AttributedGraph& g, const Subgraph& a,
                   const Subgraph& b) {
    if (a == b) return true;
    switch (rel.kind) {
    case RelationKind::Identity:
        return false;
    case RelationKind::SharedHubs:
        return hubs(g, a, rel.hub_degree) == hubs(g, b, rel.hub_degree) &&
               canonical_code(g, a) == canonical_code(g, b);
    case RelationKind::Perc:
        return a.shared_nodes(b) == static_cast<std::size_t>(a.size() - 1) &&
               canonical_code(g, a) == canonical_code(g, b);
    case RelationKind::UserDefined:
        return rel.user_pred(g, a, b);
    }
    return false;
}

// -------------------------------------------------------------------------
// MembershipOracle
// -------------------------------------------------------------------------

MembershipOracle::MembershipOracle(const AttributedGraph& g, const RelationSpec& rel,
                                   const Subgraph& anchor, std::size_t state_cap)
    : g_(g), rel_(rel), anchor_(anchor), state_cap_(state_cap) {
    anchor_code_ = canonical_code(g, anchor);
    if (rel_.kind == RelationKind::SharedHubs) anchor_hubs_ = hubs(g, anchor, rel_.hub_degree);
    if (rel_.requires_class_context()) {
        certified_.insert(anchor_);
        for (int i = 0; i < anchor_.size(); ++i) cert_index_.insert(anchor_.without(i));
    }
}

void MembershipOracle::add_certified(const Subgraph& member) {
    if (!rel_.requires_class_context()) return;
    certify(member, nullptr);
}

bool MembershipOracle::touches_certified(const Subgraph& s) const {
    for (int i = 0; i < s.size(); ++i)
        if (cert_index_.count(s.without(i))) return true;
    return false;
}

void MembershipOracle::certify(const Subgraph& s, std::vector<Subgraph>* newly_certified) {
    std::vector<Subgraph> work{s};
    while (!work.empty()) {
        Subgraph cur = work.back();
        work.pop_back();
        if (certified_.count(cur)) continue;

        // Moving a pending node to certified keeps the tracked state size
        // constant; only genuinely new nodes can hit the cap.
        bool was_pending = pending_.erase(cur) > 0;
        if (was_pending) {
            for (int i = 0; i < cur.size(); ++i) {
                auto range = pending_index_.equal_range(cur.without(i));
                for (auto it = range.first; it != range.second;) {
                    if (it->second == cur) it = pending_index_.erase(it);
                    else ++it;
                }
            }
        } else if (certified_.size() + pending_.size() >= state_cap_) {
            ++overflow_;
            continue;
        }

        certified_.insert(cur);
        if (newly_certified) newly_certified->push_back(cur);
        for (int i = 0; i < cur.size(); ++i) {
            Subgraph key = cur.without(i);
            cert_index_.insert(key);
            auto range = pending_index_.equal_range(key);
            for (auto it = range.first; it != range.second; ++it) work.push_back(it->second);
        }
    }
}

MembershipAnswer MembershipOracle::test_perc(const Subgraph& candidate,
                                             std::vector<Subgraph>* newly_certified) {
    if (certified_.count(candidate)) return MembershipAnswer::Yes;
    if (canonical_code(g_, candidate) != anchor_code_) {
        // A different pattern can never join the class; the Perc contract
        // still reports it as Uncertified, but it is not a potential miss,
        // so it does not count toward the bias signal.
        return MembershipAnswer::Uncertified;
    }
    if (touches_certified(candidate)) {
        certify(candidate, newly_certified);
        if (certified_.count(candidate)) return MembershipAnswer::Yes;
        // state cap reached
        ++uncertified_answers_;
        return MembershipAnswer::Uncertified;
    }
    // Same pattern but no certified contact yet: keep it pending so a later
    // certification can cascade onto it.
    if (!pending_.count(candidate)) {
        if (certified_.size() + pending_.size() < state_cap_) {
            pending_.insert(candidate);
            for (int i = 0; i < candidate.size(); ++i)
                pending_index_.emplace(candidate.without(i), candidate);
        } else {
            ++overflow_;
        }
    }
    ++uncertified_answers_;
    return MembershipAnswer::Uncertified;
}

MembershipAnswer MembershipOracle::test(const Subgraph& candidate,
                                        std::vector<Subgraph>* newly_certified) {
    switch (rel_.kind) {
    case RelationKind::Identity:
        return candidate == anchor_ ? MembershipAnswer::Yes : MembershipAnswer::No;
    case RelationKind::SharedHubs: {
        if (candidate == anchor_) return MembershipAnswer::Yes;
        if (canonical_code(g_, candidate) != anchor_code_) return MembershipAnswer::No;
        return hubs(g_, candidate, rel_.hub_degree) == anchor_hubs_ ? MembershipAnswer::Yes
                                                                    : MembershipAnswer::No;
    }
    case RelationKind::Perc:
        return test_perc(candidate, newly_certified);
    case RelationKind::UserDefined:
        return related_local(rel_, g_, anchor_, candidate) ? MembershipAnswer::Yes
                                                           : MembershipAnswer::No;
    }
    return MembershipAnswer::No;
}

} // namespace relmine
