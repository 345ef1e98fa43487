#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "forge_server.hpp"
#include "provenir/forge_client.hpp"
#include "provenir/git_extract.hpp"
#include "provenir/graph_json.hpp"
#include "provenir/roles.hpp"
#include "support.hpp"

using namespace provenir;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected provenir::Error");
    return Errc::InvalidArgument;
}

CommitRecord record(int n, const std::string& email, std::vector<FileChange> changes, bool root = false) {
    CommitRecord c;
    char hash[41];
    std::snprintf(hash, sizeof hash, "%040d", n);
    c.hash = hash;
    c.author_name = email.substr(0, email.find('@'));
    c.author_email = email;
    c.author_time = 1600000000 + n;
    if (!root) {
        char parent[41];
        std::snprintf(parent, sizeof parent, "%040d", n - 1);
        c.parents = {parent};
    }
    c.changes = std::move(changes);
    return c;
}

std::vector<const ProvEdge*> contributions(const ProvGraph& g) {
    std::vector<const ProvEdge*> out;
    for (const auto& e : g.edges())
        if (e.kind == RelationKind::ContributesTo) out.push_back(&e);
    return out;
}

// (agent, file) pairs with an attributed revision, computed from the edge list.
std::set<std::pair<std::string, std::string>> authored_pairs(const ProvGraph& g) {
    std::map<std::string, std::string> revision_file, revision_agent;
    for (const auto& e : g.edges()) {
        if (e.kind == RelationKind::SpecializationOf) revision_file[e.source] = e.target;
        if (e.kind == RelationKind::WasAttributedTo) revision_agent[e.source] = e.target;
    }
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& [rev, agent] : revision_agent)
        if (revision_file.count(rev)) pairs.emplace(agent, revision_file.at(rev));
    return pairs;
}

}  // namespace

TEST_CASE("membership file parsing") {
    const Membership m = parse_membership("alice@x.org\n# comment\n\nbob@y.org");
    CHECK(m.team == std::set<std::string>{"alice@x.org", "bob@y.org"});
    CHECK(m.warnings.empty());
    CHECK(m.source == MembershipSource::File);

    const Membership empty = parse_membership("");
    CHECK(empty.team.empty());
    REQUIRE(empty.warnings.size() == 1);
    CHECK(empty.warnings[0].find("EmptyMembership") != std::string::npos);

    CHECK(parse_membership("ALICE@X.ORG\r\n  carol@z.org  \n").team ==
          std::set<std::string>{"alice@x.org", "carol@z.org"});

    testing::TempDir dir;
    write_text_file(dir / "team.txt", "Dana@Q.org\n");
    CHECK(load_membership_file(dir / "team.txt").team == std::set<std::string>{"dana@q.org"});
    CHECK(code_of([&] { load_membership_file(dir / "missing.txt"); }) == Errc::IoError);
}

TEST_CASE("membership snapshot round-trip") {
    Membership m;
    m.team = {"a", "b"};
    m.source = MembershipSource::Forge;
    m.fetched_at = "2020-07-27T00:00:00Z";
    testing::TempDir dir;
    save_membership_snapshot(m, dir / "m.json");
    const Membership back = load_membership_snapshot(dir / "m.json");
    CHECK(back.team == m.team);
    CHECK(back.source == MembershipSource::Forge);
    CHECK(back.fetched_at == m.fetched_at);
}

TEST_CASE("annotate_roles on hand-built histories") {
    SUBCASE("three revisions of one file by a team member give one team edge") {
        ProvGraph g = build_provenance({
            record(1, "t@team.org", {{"a.c", ChangeType::Added, {}}}, true),
            record(2, "t@team.org", {{"a.c", ChangeType::Modified, {}}}),
            record(3, "t@team.org", {{"a.c", ChangeType::Modified, {}}}),
        });
        Membership m;
        m.team = {"t@team.org"};
        CHECK(annotate_roles(g, m) == 1);
        const auto edges = contributions(g);
        REQUIRE(edges.size() == 1);
        CHECK(edges[0]->attributes.at("role") == "team");
        CHECK(edges[0]->source == "agent:t@team.org");
        CHECK(edges[0]->target == "file:a.c");
        CHECK(g.validate().empty());
    }
    SUBCASE("outsider gets contributor") {
        ProvGraph g = build_provenance({record(1, "x@ext.io", {{"a.c", ChangeType::Added, {}}}, true)});
        CHECK(annotate_roles(g, Membership{}) == 1);
        CHECK(contributions(g)[0]->attributes.at("role") == "contributor");
    }
    SUBCASE("identity bridge maps agents to forge logins") {
        ProvGraph g = build_provenance({record(1, "jdoe@corp.example", {{"a.c", ChangeType::Added, {}}}, true)});
        Membership m;
        m.team = {"janedoe"};
        const IdentityBridge bridge{{"jdoe@corp.example", "janedoe"}};
        ProvGraph unbridged = g;
        annotate_roles(unbridged, m);
        CHECK(contributions(unbridged)[0]->attributes.at("role") == "contributor");
        annotate_roles(g, m, &bridge);
        CHECK(contributions(g)[0]->attributes.at("role") == "team");
    }
    SUBCASE("invalid input graph is rejected") {
        ProvGraph g;
        g.add_node({"e1", NodeKind::Entity, "", {}});
        g.add_node({"e2", NodeKind::Entity, "", {}});
        g.add_edge({"x", "e1", "e2", RelationKind::WasDerivedFrom, {}});
        g.add_edge({"y", "e2", "e1", RelationKind::WasDerivedFrom, {}});
        CHECK(code_of([&] { annotate_roles(g, Membership{}); }) == Errc::InvalidArgument);
    }
}

TEST_CASE("role invariants on random graphs") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 60; ++round) {
        auto annotated = testing::random_annotated_graph(rng, 200);
        ProvGraph& g = annotated.graph;
        const auto edges = contributions(g);

        std::set<std::pair<std::string, std::string>> seen;
        std::map<std::string, std::set<std::string>> roles_of_agent;
        for (const ProvEdge* e : edges) {
            CHECK(seen.emplace(e->source, e->target).second);  // dedup
            roles_of_agent[e->source].insert(e->attributes.at("role"));
            const bool member = annotated.membership.contains(agent_identity(g.node(e->source)));
            CHECK(e->attributes.at("role") == (member ? "team" : "contributor"));
        }
        CHECK(seen == authored_pairs(g));
        for (const auto& [agent, roles] : roles_of_agent) CHECK(roles.size() == 1);

        const std::string before = to_provgraph_json(g);
        CHECK(annotate_roles(g, annotated.membership) == 0);
        CHECK(to_provgraph_json(g) == before);
        CHECK(g.validate().empty());
    }
}

TEST_CASE("role assignment ignores membership line order") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 20; ++round) {
        auto annotated = testing::random_annotated_graph(rng, 120);
        std::vector<std::string> lines(annotated.membership.team.begin(), annotated.membership.team.end());
        lines.push_back("# trailing comment");
        lines.push_back("");
        std::string forward, backward;
        for (const auto& l : lines) forward += l + "\n";
        std::reverse(lines.begin(), lines.end());
        for (const auto& l : lines) backward += l + "\n";

        ProvGraph clean;
        clean.metadata() = annotated.graph.metadata();
        for (const auto& n : annotated.graph.nodes()) clean.add_node(n);
        for (const auto& e : annotated.graph.edges())
            if (e.kind != RelationKind::ContributesTo) clean.add_edge(e);
        ProvGraph a = clean, b = clean;
        annotate_roles(a, parse_membership(forward));
        annotate_roles(b, parse_membership(backward));
        CHECK(to_provgraph_json(a) == to_provgraph_json(b));
        CHECK(to_provgraph_json(a) == to_provgraph_json(annotated.graph));
    }
}

TEST_CASE("next_link parsing") {
    CHECK(next_link(R"(<https://x/a?page=2>; rel="next", <https://x/a?page=5>; rel="last")") ==
          std::optional<std::string>("https://x/a?page=2"));
    CHECK(next_link(R"(<https://x/a?page=1>; rel="prev", <https://x/a?page=3>; rel="next")") ==
          std::optional<std::string>("https://x/a?page=3"));
    CHECK_FALSE(next_link(R"(<https://x/a?page=1>; rel="first")"));
    CHECK_FALSE(next_link(""));
}

TEST_CASE("forge membership against recorded responses") {
    testing::ForgeServer server;
    ForgeConfig config;
    config.base_url = server.base_url();
    config.initial_backoff = std::chrono::milliseconds(5);

    SUBCASE("two pages") {
        const Membership m = fetch_membership_forge("acme", testing::kForgeToken, config);
        CHECK(m.team.size() == 150);
        CHECK(m.source == MembershipSource::Forge);
        CHECK(m.fetched_at.has_value());
        CHECK(m.team.contains("member001"));
        CHECK(m.team.contains("member-007"));
        CHECK(server.requests() == 2);
    }
    SUBCASE("empty organization") {
        const Membership m = fetch_membership_forge("empty", testing::kForgeToken, config);
        CHECK(m.team.empty());
        CHECK_FALSE(m.warnings.empty());
    }
    SUBCASE("bad token") {
        CHECK(code_of([&] { fetch_membership_forge("acme", "wrong", config); }) == Errc::AuthError);
    }
    SUBCASE("unknown organization") {
        CHECK(code_of([&] { fetch_membership_forge("ghost", testing::kForgeToken, config); }) == Errc::NotFound);
    }
    SUBCASE("rate limits surface the reset time") {
        try {
            fetch_membership_forge("limited", testing::kForgeToken, config);
            FAIL("expected RateLimited");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::RateLimited);
            CHECK(e.reset_at == testing::kRateLimitReset);
        }
        try {
            fetch_membership_forge("throttled", testing::kForgeToken, config);
            FAIL("expected RateLimited");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::RateLimited);
            CHECK(e.reset_at == testing::kRateLimitReset + 60);
        }
    }
    SUBCASE("server errors are retried") {
        const Membership m = fetch_membership_forge("flaky", testing::kForgeToken, config);
        CHECK(m.team.size() == 50);
        CHECK(server.requests() == 2);
    }
    SUBCASE("token never appears in error text") {
        try {
            fetch_membership_forge("ghost", testing::kForgeToken, config);
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find(testing::kForgeToken) == std::string::npos);
        }
    }
}

TEST_CASE("unreachable forge is a network error") {
    ForgeConfig config;
    config.base_url = "http://127.0.0.1:1";
    config.max_attempts = 2;
    config.initial_backoff = std::chrono::milliseconds(1);
    config.timeout = std::chrono::seconds(2);
    CHECK(code_of([&] { fetch_membership_forge("acme", "t", config); }) == Errc::NetworkError);
}
