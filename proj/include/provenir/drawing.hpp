#pragma once

// Node sizing, coloring and the combined drawing model.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provenir/layout.hpp"
#include "provenir/prov_graph.hpp"

namespace provenir {

enum class SizeBy { EntityInDegree, AgentOutDegree };

struct SizeMode {
    SizeBy by = SizeBy::EntityInDegree;
    double min_size = 4.0;
    double max_size = 40.0;

    void check() const;  // throws Error(InvalidArgument) unless min < max
};

/// Fills for file Entities and Agents, strokes for team and contributor edges.
struct StyleTable {
    std::string file_color;
    std::string agent_color;
    std::string team_color;
    std::string contributor_color;
    std::string activity_color = "#B3B3B3";

    bool operator==(const StyleTable&) const = default;
};

/// ColorBrewer qualitative palettes: nodes from 3-class Set2, edges from
/// 3-class Set1.
StyleTable default_style();

/// Okabe-Ito colors: bluish green / orange nodes, blue / vermillion edges.
StyleTable colorblind_safe_style();

std::optional<StyleTable> named_palette(std::string_view name);

struct DrawingNode {
    std::string id;
    std::string label;
    NodeKind kind = NodeKind::Entity;
    double x = 0.0;
    double y = 0.0;
    double size = 0.0;
    std::string color;

    bool operator==(const DrawingNode&) const = default;
};

struct DrawingEdge {
    std::string id;
    std::string source;
    std::string target;
    std::string role;
    std::string color;

    bool operator==(const DrawingEdge&) const = default;
};

/// Nodes and edges kept sorted by id.
struct DrawingGraph {
    double width = 1000.0;
    double height = 1000.0;
    std::vector<DrawingNode> nodes;
    std::vector<DrawingEdge> edges;

    bool operator==(const DrawingGraph&) const = default;
};

using Sizes = std::map<std::string, double>;

/// Linear degree->size map over the scaled class; every other node gets min_size.
Sizes assign_sizes(const ProvGraph& graph, const SizeMode& mode);

/// Colors nodes by kind and edges by their `role` attribute. Positions are left
/// at 0 and sizes at 0 until a layout and sizing are applied.
DrawingGraph assign_styles(const ProvGraph& graph, const StyleTable& table);

void apply_positions(DrawingGraph& drawing, const Positions& positions);
void apply_sizes(DrawingGraph& drawing, const Sizes& sizes);

struct DrawOptions {
    LayoutParams layout;
    SizeMode size;
    StyleTable style = default_style();
};

DrawingGraph make_drawing(const ProvGraph& subgraph, const DrawOptions& options);

/// Empty when the drawing satisfies its invariants (frame containment, finite
/// coordinates, sizes in range); otherwise one message per breach.
std::vector<std::string> check_drawing(const DrawingGraph& drawing, const SizeMode& size);

std::string_view to_string(SizeBy by) noexcept;
std::optional<SizeBy> parse_size_by(std::string_view text) noexcept;

}  // namespace provenir
