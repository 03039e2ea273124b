#include <doctest.h>

#include <set>

#include "relmine/error.hpp"
#include "support.hpp"

using namespace relmine;
using namespace testsupport;

TEST_CASE("parsing of relation/weight/filter selectors") {
    CHECK(RelationSpec::parse("identity").kind == RelationKind::Identity);
    CHECK(RelationSpec::parse("perc").kind == RelationKind::Perc);
    RelationSpec sh = RelationSpec::parse("sh:30");
    CHECK(sh.kind == RelationKind::SharedHubs);
    CHECK(sh.hub_degree == 30);
    CHECK_THROWS_AS(RelationSpec::parse("sh:x"), UsageError);
    CHECK_THROWS_AS(RelationSpec::parse("nope"), UsageError);

    CHECK(WeightFn::parse("unit").kind == WeightKind::Unit);
    CHECK(WeightFn::parse("hondeg").kind == WeightKind::HonDegree);
    CHECK_THROWS_AS(WeightFn::parse("w"), UsageError);

    CHECK(FilterFn::parse("none").kind == FilterKind::None);
    FilterFn f = FilterFn::parse("min-internal-degree:2");
    CHECK(f.kind == FilterKind::MinInternalDegree);
    CHECK(f.min_internal_degree == 2);
    CHECK_THROWS_AS(FilterFn::parse("bad"), UsageError);
}

TEST_CASE("hubs: host-graph degrees") {
    AttributedGraph star = star_graph(5); // center 0 has degree 5
    Subgraph edge{0, 1};
    CHECK(hubs(star, edge, 3) == std::vector<NodeId>{0});
    CHECK(hubs(star, edge, static_cast<int>(star.node_count())).empty());
    CHECK(hubs(star, edge, 1) == std::vector<NodeId>{0, 1});
}

TEST_CASE("related_local: reflexivity and basic cases") {
    AttributedGraph c5 = cycle_graph(5);
    Subgraph s{0, 1, 2};
    for (const char* name : {"identity", "perc", "sh:3"})
        CHECK(related_local(RelationSpec::parse(name), c5, s, s));

    // SH_100: no node of degree >= 100, equal patterns -> related
    CHECK(related_local(RelationSpec::shared_hubs(100), c5, s, Subgraph{2, 3, 4}));
    // Perc local: share 2 nodes, both label-uniform paths
    CHECK(related_local(RelationSpec::perc(), c5, s, Subgraph{1, 2, 3}));
    CHECK(!related_local(RelationSpec::perc(), c5, s, Subgraph{2, 3, 4}));
    CHECK(!related_local(RelationSpec::identity(), c5, s, Subgraph{1, 2, 3}));
}

TEST_CASE("membership oracle: exact relations answer Yes/No") {
    AttributedGraph g = star_graph(5);
    Subgraph anchor{0, 1};
    MembershipOracle ident(g, RelationSpec::identity(), anchor);
    CHECK(ident.test(anchor) == MembershipAnswer::Yes);
    CHECK(ident.test(Subgraph{0, 2}) == MembershipAnswer::No);

    // SharedHubs: pattern mismatch -> No
    AttributedGraph mixed = AttributedGraph::from_edges(
        5, std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}});
    MembershipOracle sh(mixed, RelationSpec::shared_hubs(100), Subgraph{0, 1, 2});
    CHECK(sh.test(Subgraph{2, 3, 4}) == MembershipAnswer::No); // path vs triangle
    CHECK(sh.test(Subgraph{0, 1, 2}) == MembershipAnswer::Yes);
}

TEST_CASE("membership oracle: perc certification replay") {
    AttributedGraph c5 = cycle_graph(5);
    Subgraph anchor{0, 1, 2};
    MembershipOracle oracle(c5, RelationSpec::perc(), anchor);

    CHECK(oracle.test(anchor) == MembershipAnswer::Yes);
    // {2,3,4} shares only node 2 with the anchor: uncertified first
    CHECK(oracle.test(Subgraph{2, 3, 4}) == MembershipAnswer::Uncertified);
    CHECK(oracle.uncertified_count() == 1);
    // certifying {1,2,3} cascades onto the pending {2,3,4}
    std::vector<Subgraph> newly;
    CHECK(oracle.test(Subgraph{1, 2, 3}, &newly) == MembershipAnswer::Yes);
    CHECK(newly.size() == 2);
    CHECK(oracle.test(Subgraph{2, 3, 4}) == MembershipAnswer::Yes);
}

TEST_CASE("membership oracle: state cap reports overflow") {
    AttributedGraph c9 = cycle_graph(9);
    Subgraph anchor{0, 1};
    MembershipOracle oracle(c9, RelationSpec::perc(), anchor, /*state_cap=*/2);
    CHECK(oracle.test(Subgraph{1, 2}) == MembershipAnswer::Yes); // fills the cap
    CHECK(oracle.test(Subgraph{2, 3}) == MembershipAnswer::Uncertified);
    CHECK(oracle.overflow_count() > 0);
}

TEST_CASE("built-in relations form isomorphism-respecting equivalences") {
    for (std::uint64_t seed = 21; seed < 25; ++seed) {
        AttributedGraph g = random_graph(11, 0.3, 2, seed);
        for (int k : {2, 3, 4}) {
            for (const char* name : {"identity", "perc", "sh:4"}) {
                RelationSpec rel = RelationSpec::parse(name);
                auto classes = naive_classes(g, k, rel, FilterFn::none());
                std::size_t total = 0;
                for (const auto& cls : classes) {
                    total += cls.size();
                    // homogeneous patterns within each class
                    PatternCode code = canonical_code(g, cls.front());
                    for (const Subgraph& s : cls) CHECK(canonical_code(g, s) == code);
                }
                CHECK(total == naive_enumerate(g, k).size());

                // pairwise closure agrees with the library's partition
                ClassPartition part = exact_classes(g, k, rel, FilterFn::none(), 100000);
                std::set<std::set<Subgraph>> a, b;
                for (const auto& cls : classes) a.insert(std::set<Subgraph>(cls.begin(), cls.end()));
                for (const auto& cls : part.classes) {
                    std::set<Subgraph> m;
                    for (std::size_t idx : cls) m.insert(part.subgraphs[idx]);
                    b.insert(std::move(m));
                }
                CHECK(a == b);
            }
        }
    }
}

TEST_CASE("identity partitions into singletons; large-d shared hubs groups by pattern") {
    AttributedGraph g = random_graph(10, 0.35, 2, 77);
    int k = 3;
    auto classes_id = naive_classes(g, k, RelationSpec::identity(), FilterFn::none());
    for (const auto& cls : classes_id) CHECK(cls.size() == 1);

    int d = static_cast<int>(g.max_degree()) + 1; // empty hub sets everywhere
    auto classes_sh = naive_classes(g, k, RelationSpec::shared_hubs(d), FilterFn::none());
    std::map<PatternCode, std::size_t> by_code;
    for (const Subgraph& s : naive_enumerate(g, k)) by_code[canonical_code(g, s)] += 1;
    CHECK(classes_sh.size() == by_code.size());
    for (const auto& cls : classes_sh)
        CHECK(cls.size() == by_code.at(canonical_code(g, cls.front())));
}

TEST_CASE("perc class by adjacency BFS equals pairwise closure") {
    for (std::uint64_t seed = 31; seed < 34; ++seed) {
        AttributedGraph g = random_graph(10, 0.3, 2, seed);
        RelationSpec perc = RelationSpec::perc();
        auto all = naive_enumerate(g, 3);
        if (all.empty()) continue;
        const Subgraph& s = all.front();

        // BFS over percolation-adjacency (same pattern + HON edge)
        PatternCode code = canonical_code(g, s);
        std::set<Subgraph> cls{s};
        std::vector<Subgraph> stack{s};
        while (!stack.empty()) {
            Subgraph cur = stack.back();
            stack.pop_back();
            for (const Subgraph& c : all)
                if (!cls.count(c) && naive_hon_adjacent(cur, c) && canonical_code(g, c) == code) {
                    cls.insert(c);
                    stack.push_back(c);
                }
        }
        auto closure = naive_class_of(g, s, perc, FilterFn::none());
        CHECK(std::set<Subgraph>(closure.begin(), closure.end()) == cls);
    }
}

TEST_CASE("min-internal-degree filter") {
    AttributedGraph k4 = complete_graph(4);
    FilterFn f = FilterFn::min_internal(2);
    std::vector<NodeId> all{0, 1, 2, 3};
    CHECK(f.accepts(k4, Subgraph::from_unsorted(all)));

    AttributedGraph p4 = path_graph(4);
    std::vector<NodeId> chain{0, 1, 2, 3};
    CHECK(!f.accepts(p4, Subgraph::from_unsorted(chain))); // ends have internal degree 1
}
