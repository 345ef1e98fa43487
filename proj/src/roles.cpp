#include "provenir/roles.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "provenir/graph_json.hpp"

namespace provenir {

namespace {

std::string normalize(std::string_view text) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

Membership parse_membership(std::string_view text) {
    Membership membership;
    membership.source = MembershipSource::File;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line = normalize(text.substr(start, end - start));
        if (!line.empty() && line.front() != '#') membership.team.insert(std::move(line));
        start = end + 1;
    }
    if (membership.team.empty()) membership.warnings.emplace_back("EmptyMembership: no team identities listed");
    return membership;
}

Membership load_membership_file(const std::filesystem::path& path) {
    return parse_membership(read_text_file(path));
}

void save_membership_snapshot(const Membership& membership, const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["source"] = membership.source == MembershipSource::Forge ? "forge" : "file";
    doc["fetched_at"] = membership.fetched_at ? nlohmann::ordered_json(*membership.fetched_at) : nullptr;
    doc["team"] = std::vector<std::string>(membership.team.begin(), membership.team.end());
    write_text_file(path, doc.dump(2) + "\n");
}

Membership load_membership_snapshot(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
    Membership membership;
    if (!doc.is_object() || !doc.contains("team") || !doc["team"].is_array())
        throw Error(Errc::ParseError, path.string() + ": expected {\"team\": [...]}");
    membership.source = doc.value("source", "file") == "forge" ? MembershipSource::Forge : MembershipSource::File;
    if (doc.contains("fetched_at") && doc["fetched_at"].is_string())
        membership.fetched_at = doc["fetched_at"].get<std::string>();
    for (const auto& item : doc["team"]) {
        if (!item.is_string()) throw Error(Errc::ParseError, path.string() + ": team entries must be strings");
        membership.team.insert(normalize(item.get<std::string>()));
    }
    if (membership.team.empty()) membership.warnings.emplace_back("EmptyMembership: no team identities listed");
    return membership;
}

std::string agent_identity(const ProvNode& agent) {
    if (auto it = agent.attributes.find("identity"); it != agent.attributes.end()) return it->second;
    std::string_view id = agent.id;
    if (id.starts_with("agent:")) id.remove_prefix(6);
    return std::string(id);
}

std::string_view role_for(const Membership& membership, std::string_view identity, const IdentityBridge* bridge) {
    std::string key(identity);
    if (bridge != nullptr) {
        if (auto it = bridge->find(key); it != bridge->end()) key = normalize(it->second);
    }
    return membership.contains(key) ? kRoleTeam : kRoleContributor;
}

std::size_t annotate_roles(ProvGraph& graph, const Membership& membership, const IdentityBridge* bridge) {
    if (auto violations = graph.validate(); !violations.empty()) {
        throw Error(Errc::InvalidArgument,
                    "graph fails validation (" + std::to_string(violations.size()) + " violation(s)), first: " +
                        violations.front().subject + ": " + violations.front().detail);
    }

    std::set<std::pair<std::string, std::string>> existing;
    for (const auto& edge : graph.edges())
        if (edge.kind == RelationKind::ContributesTo) existing.emplace(edge.source, edge.target);

    std::set<std::pair<std::string, std::string>> pairs;
    for (const ProvNode* node : graph.sorted_nodes()) {
        if (node->kind != NodeKind::Entity) continue;
        std::vector<std::string> agents, files;
        for (const ProvEdge* edge : graph.out_edges(node->id)) {
            if (edge->kind == RelationKind::WasAttributedTo) agents.push_back(edge->target);
            else if (edge->kind == RelationKind::SpecializationOf) files.push_back(edge->target);
        }
        for (const auto& agent : agents)
            for (const auto& file : files) pairs.emplace(agent, file);
    }

    std::size_t added = 0;
    for (const auto& [agent, file] : pairs) {
        if (existing.contains({agent, file})) continue;
        const std::string role(role_for(membership, agent_identity(graph.node(agent)), bridge));
        graph.add_edge({make_edge_id(RelationKind::ContributesTo, agent, file), agent, file,
                        RelationKind::ContributesTo, {{"role", role}}});
        ++added;
    }
    return added;
}

}  // namespace provenir
