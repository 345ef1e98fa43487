#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "provenir/prov_graph.hpp"

namespace provenir {

/// Files with ContributesTo edges of both roles, every agent with a
/// ContributesTo edge into one of those files, and all such edges. Stored as a
/// ProvGraph whose metadata carries `query=collab`.
struct CollabSubgraph {
    ProvGraph graph;

    std::size_t node_count() const { return graph.node_count(); }
    std::size_t edge_count() const { return graph.edge_count(); }
};

/// Throws Error(NotAnnotated) when the graph has no ContributesTo edges.
CollabSubgraph collaboration_query(const ProvGraph& graph);

struct StatsRow {
    std::string project;
    std::uint64_t entities = 0;
    std::uint64_t agents = 0;
    std::uint64_t activities = 0;
    std::uint64_t team_contributions = 0;
    std::uint64_t external_contributions = 0;
    std::uint64_t nodes_vis = 0;
    std::uint64_t edges_vis = 0;

    bool operator==(const StatsRow&) const = default;
};

bool is_file_entity(const ProvNode& node);
bool is_revision_entity(const ProvNode& node);

StatsRow compute_stats(const ProvGraph& graph, const CollabSubgraph& subgraph);

enum class StatsFormat { Table, Csv, Json };

inline constexpr std::string_view kStatsCsvHeader =
    "project,entities,agents,activities,team_contr,ext_contr,nodes_vis,edges_vis";

std::string render_stats(const std::vector<StatsRow>& rows, StatsFormat format);

}  // namespace provenir
