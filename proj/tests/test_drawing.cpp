#include <doctest.h>

#include <random>

#include "provenir/drawing.hpp"
#include "support.hpp"

using namespace provenir;

namespace {

// Agents a0..a(k-1) each contribute to `file`; returns file in-degree k.
void fan_in(ProvGraph& g, const std::string& file, int k, int& next_agent) {
    g.add_node({file, NodeKind::Entity, file, {{"type", "file"}}});
    for (int i = 0; i < k; ++i) {
        const std::string agent = "agent:a" + std::to_string(next_agent++);
        g.add_node({agent, NodeKind::Agent, agent, {}});
        g.add_edge({make_edge_id(RelationKind::ContributesTo, agent, file), agent, file, RelationKind::ContributesTo,
                    {{"role", "team"}}});
    }
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected provenir::Error");
    return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("sizes interpolate linearly over the scaled class") {
    ProvGraph g;
    int next = 0;
    fan_in(g, "file:one", 1, next);
    fan_in(g, "file:three", 3, next);
    fan_in(g, "file:five", 5, next);
    const SizeMode mode;
    const Sizes sizes = assign_sizes(g, mode);
    CHECK(sizes.at("file:one") == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(sizes.at("file:one") - mode.min_size) <= 1e-9);
    CHECK(std::abs(sizes.at("file:three") - (mode.min_size + mode.max_size) / 2.0) <= 1e-9);
    CHECK(std::abs(sizes.at("file:five") - mode.max_size) <= 1e-9);
    for (int i = 0; i < next; ++i) CHECK(sizes.at("agent:a" + std::to_string(i)) == mode.min_size);
}

TEST_CASE("equal degrees give the exact midpoint") {
    ProvGraph g;
    int next = 0;
    fan_in(g, "file:x", 2, next);
    fan_in(g, "file:y", 2, next);
    const SizeMode mode{SizeBy::EntityInDegree, 4.0, 40.0};
    const Sizes sizes = assign_sizes(g, mode);
    CHECK(sizes.at("file:x") == 22.0);
    CHECK(sizes.at("file:y") == 22.0);
}

TEST_CASE("agent-out mode sizes every file at the minimum") {
    std::mt19937_64 rng(4);
    const ProvGraph g = testing::random_collab_graph(rng);
    const SizeMode mode{SizeBy::AgentOutDegree, 2.0, 30.0};
    const Sizes sizes = assign_sizes(g, mode);
    for (const auto& n : g.nodes())
        if (n.kind == NodeKind::Entity) CHECK(sizes.at(n.id) == 2.0);
}

TEST_CASE("size monotonicity and scale invariance") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 30; ++round) {
        const ProvGraph g = testing::random_collab_graph(rng);
        for (SizeBy by : {SizeBy::EntityInDegree, SizeBy::AgentOutDegree}) {
            const NodeKind kind = by == SizeBy::EntityInDegree ? NodeKind::Entity : NodeKind::Agent;
            const Direction dir = by == SizeBy::EntityInDegree ? Direction::In : Direction::Out;
            const Sizes sizes = assign_sizes(g, {by, 4.0, 40.0});

            // Same graph with every edge tripled: degrees scale by 3.
            ProvGraph tripled;
            for (const auto& n : g.nodes()) tripled.add_node(n);
            for (const auto& e : g.edges())
                for (int c = 0; c < 3; ++c) {
                    ProvEdge copy = e;
                    copy.id += "#" + std::to_string(c);
                    tripled.add_edge(copy);
                }
            const Sizes scaled = assign_sizes(tripled, {by, 4.0, 40.0});

            for (const auto& u : g.nodes()) {
                CHECK(sizes.at(u.id) >= 4.0);
                CHECK(sizes.at(u.id) <= 40.0);
                if (u.kind != kind) continue;
                for (const auto& v : g.nodes()) {
                    if (v.kind != kind) continue;
                    if (g.degree(u.id, dir) <= g.degree(v.id, dir)) {
                        CHECK(sizes.at(u.id) <= sizes.at(v.id));
                        CHECK(scaled.at(u.id) <= scaled.at(v.id));
                    }
                }
            }
        }
    }
}

TEST_CASE("size range must be ordered") {
    CHECK(code_of([] { SizeMode{SizeBy::EntityInDegree, 5.0, 5.0}.check(); }) == Errc::InvalidArgument);
    CHECK(code_of([] { assign_sizes(ProvGraph{}, {SizeBy::EntityInDegree, 9.0, 1.0}); }) == Errc::InvalidArgument);
}

TEST_CASE("default palette is ColorBrewer Set2 nodes and Set1 edges") {
    const StyleTable s = default_style();
    CHECK(s.file_color == "#66C2A5");
    CHECK(s.agent_color == "#FC8D62");
    CHECK(s.team_color == "#377EB8");
    CHECK(s.contributor_color == "#E41A1C");
    CHECK(named_palette("colorbrewer") == s);

    const StyleTable cb = colorblind_safe_style();
    CHECK(cb.file_color == "#009E73");
    CHECK(cb.agent_color == "#E69F00");
    CHECK(cb.team_color == "#0072B2");
    CHECK(cb.contributor_color == "#D55E00");
    CHECK(named_palette("cb-safe") == cb);
    CHECK_FALSE(named_palette("rainbow"));

    for (const StyleTable& t : {s, cb}) {
        CHECK(t.file_color != t.agent_color);
        CHECK(t.team_color != t.contributor_color);
    }
}

TEST_CASE("assign_styles colors by kind and role") {
    ProvGraph g;
    int next = 0;
    fan_in(g, "file:f", 1, next);
    g.add_node({"agent:ext", NodeKind::Agent, "ext", {}});
    g.add_edge({"ct", "agent:ext", "file:f", RelationKind::ContributesTo, {{"role", "contributor"}}});

    StyleTable custom = default_style();
    custom.agent_color = "#123456";
    const DrawingGraph d = assign_styles(g, custom);
    for (const auto& n : d.nodes) CHECK(n.color == (n.kind == NodeKind::Agent ? "#123456" : "#66C2A5"));
    for (const auto& e : d.edges) CHECK(e.color == (e.role == "team" ? "#377EB8" : "#E41A1C"));

    ProvGraph odd;
    odd.add_node({"agent:x", NodeKind::Agent, "x", {}});
    odd.add_node({"file:y", NodeKind::Entity, "y", {}});
    odd.add_edge_unchecked({"bad", "agent:x", "file:y", RelationKind::ContributesTo, {{"role", "owner"}}});
    CHECK(code_of([&] { assign_styles(odd, default_style()); }) == Errc::UnknownRole);
}

TEST_CASE("make_drawing satisfies the drawing invariants") {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 10; ++round) {
        const ProvGraph g = testing::random_collab_graph(rng);
        DrawOptions options;
        options.layout.iterations = 100;
        options.layout.algorithm = round % 2 ? LayoutAlgorithm::ForceAtlas2 : LayoutAlgorithm::FruchtermanReingold;
        options.size.by = round % 3 ? SizeBy::EntityInDegree : SizeBy::AgentOutDegree;
        const DrawingGraph d = make_drawing(g, options);
        CHECK(check_drawing(d, options.size).empty());
        CHECK(d.nodes.size() == g.node_count());
        CHECK(d.edges.size() == g.edge_count());
        CHECK(make_drawing(g, options) == d);
    }
}
