#include "provenir/query_stats.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "provenir/csv.hpp"

namespace provenir {

namespace {

std::string_view type_attribute(const ProvNode& node) {
    auto it = node.attributes.find("type");
    return it == node.attributes.end() ? std::string_view{} : std::string_view(it->second);
}

std::string role_of(const ProvEdge& edge) {
    auto it = edge.attributes.find("role");
    return it == edge.attributes.end() ? std::string{} : it->second;
}

}  // namespace

bool is_file_entity(const ProvNode& node) {
    if (node.kind != NodeKind::Entity) return false;
    const auto type = type_attribute(node);
    return type.empty() ? std::string_view(node.id).starts_with("file:") : type == "file";
}

bool is_revision_entity(const ProvNode& node) {
    if (node.kind != NodeKind::Entity) return false;
    const auto type = type_attribute(node);
    return type.empty() ? std::string_view(node.id).starts_with("revision:") : type == "revision";
}

CollabSubgraph collaboration_query(const ProvGraph& graph) {
    // file id -> (has team edge, has contributor edge)
    std::map<std::string, std::pair<bool, bool>> roles_into;
    std::size_t contributes = 0;
    for (const auto& edge : graph.edges()) {
        if (edge.kind != RelationKind::ContributesTo) continue;
        ++contributes;
        auto& flags = roles_into[edge.target];
        const std::string role = role_of(edge);
        if (role == kRoleTeam) flags.first = true;
        else if (role == kRoleContributor) flags.second = true;
    }
    if (contributes == 0) throw Error(Errc::NotAnnotated, "no ContributesTo edges; run annotate first");

    std::set<std::string> files;
    for (const auto& [file, flags] : roles_into)
        if (flags.first && flags.second) files.insert(file);

    std::set<std::string> agents;
    std::vector<const ProvEdge*> edges;
    for (const ProvEdge* edge : graph.sorted_edges()) {
        if (edge->kind != RelationKind::ContributesTo || !files.contains(edge->target)) continue;
        agents.insert(edge->source);
        edges.push_back(edge);
    }

    CollabSubgraph result;
    result.graph.metadata() = graph.metadata();
    result.graph.metadata()["query"] = "collab";
    std::set<std::string> node_ids(files);
    node_ids.insert(agents.begin(), agents.end());
    for (const auto& id : node_ids) result.graph.add_node(graph.node(id));
    for (const ProvEdge* edge : edges) result.graph.add_edge(*edge);
    return result;
}

StatsRow compute_stats(const ProvGraph& graph, const CollabSubgraph& subgraph) {
    StatsRow row;
    if (auto it = graph.metadata().find("repository"); it != graph.metadata().end()) row.project = it->second;

    std::map<std::pair<std::string, std::string>, std::string> role_by_pair;
    for (const auto& edge : graph.edges())
        if (edge.kind == RelationKind::ContributesTo) role_by_pair[{edge.source, edge.target}] = role_of(edge);

    for (const auto& node : graph.nodes()) {
        switch (node.kind) {
            case NodeKind::Activity: ++row.activities; break;
            case NodeKind::Agent: ++row.agents; break;
            case NodeKind::Entity:
                if (is_file_entity(node)) ++row.entities;
                break;
        }
        if (!is_revision_entity(node)) continue;
        std::vector<std::string> agents, files;
        for (const ProvEdge* edge : graph.out_edges(node.id)) {
            if (edge->kind == RelationKind::WasAttributedTo) agents.push_back(edge->target);
            else if (edge->kind == RelationKind::SpecializationOf) files.push_back(edge->target);
        }
        for (const auto& agent : agents) {
            for (const auto& file : files) {
                auto role = role_by_pair.find({agent, file});
                if (role == role_by_pair.end()) continue;
                if (role->second == kRoleTeam) ++row.team_contributions;
                else if (role->second == kRoleContributor) ++row.external_contributions;
            }
        }
    }
    row.nodes_vis = subgraph.node_count();
    row.edges_vis = subgraph.edge_count();
    return row;
}

std::string render_stats(const std::vector<StatsRow>& rows, StatsFormat format) {
    constexpr std::array<std::string_view, 8> columns = {"project",   "entities",  "agents",    "activities",
                                                         "team_contr", "ext_contr", "nodes_vis", "edges_vis"};
    auto cells = [](const StatsRow& r) {
        return std::array<std::string, 8>{r.project,
                                          std::to_string(r.entities),
                                          std::to_string(r.agents),
                                          std::to_string(r.activities),
                                          std::to_string(r.team_contributions),
                                          std::to_string(r.external_contributions),
                                          std::to_string(r.nodes_vis),
                                          std::to_string(r.edges_vis)};
    };

    std::ostringstream out;
    switch (format) {
        case StatsFormat::Csv: {
            out << kStatsCsvHeader << '\n';
            for (const auto& row : rows) {
                const auto values = cells(row);
                for (std::size_t i = 0; i < values.size(); ++i) {
                    if (i) out << ',';
                    out << csv_field(values[i]);
                }
                out << '\n';
            }
            break;
        }
        case StatsFormat::Json: {
            nlohmann::ordered_json doc = nlohmann::ordered_json::array();
            for (const auto& row : rows) {
                nlohmann::ordered_json item;
                item["project"] = row.project;
                item["entities"] = row.entities;
                item["agents"] = row.agents;
                item["activities"] = row.activities;
                item["team_contr"] = row.team_contributions;
                item["ext_contr"] = row.external_contributions;
                item["nodes_vis"] = row.nodes_vis;
                item["edges_vis"] = row.edges_vis;
                doc.push_back(std::move(item));
            }
            out << doc.dump(2) << '\n';
            break;
        }
        case StatsFormat::Table: {
            std::array<std::size_t, 8> width{};
            for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
            std::vector<std::array<std::string, 8>> table;
            for (const auto& row : rows) {
                table.push_back(cells(row));
                for (std::size_t i = 0; i < 8; ++i) width[i] = std::max(width[i], table.back()[i].size());
            }
            auto emit = [&](auto&& value_at) {
                for (std::size_t i = 0; i < 8; ++i) {
                    const std::string value(value_at(i));
                    if (i) out << "  ";
                    // project left-aligned, counts right-aligned
                    if (i == 0) out << value << std::string(width[i] - value.size(), ' ');
                    else out << std::string(width[i] - value.size(), ' ') << value;
                }
                out << '\n';
            };
            emit([&](std::size_t i) { return columns[i]; });
            for (const auto& values : table) emit([&](std::size_t i) { return std::string_view(values[i]); });
            break;
        }
    }
    return out.str();
}

}  // namespace provenir
