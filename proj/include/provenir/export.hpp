#pragma once

// Interchange formats for graphs and drawings. Every writer is deterministic:
// elements sorted by id, doubles in shortest round-trip form.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "provenir/drawing.hpp"
#include "provenir/prov_graph.hpp"

namespace provenir {

// GraphML 1.0 with node keys label/kind/size/x/y/color and edge keys
// role/color. Graph-level frame_width/frame_height carry the drawing frame.
std::string to_graphml(const DrawingGraph& drawing);
std::string to_graphml(const ProvGraph& graph);
void export_graphml(const DrawingGraph& drawing, const std::filesystem::path& path);
void export_graphml(const ProvGraph& graph, const std::filesystem::path& path);

/// Missing node data defaults to size `default_size`, position (0,0) and the
/// default color for the node kind. Throws ParseError / UnknownKind.
DrawingGraph from_graphml(std::string_view text, double default_size = 4.0);
DrawingGraph import_graphml(const std::filesystem::path& path, double default_size = 4.0);

// CSV: nodes `id,kind,label,size,x,y,color`, edges `id,source,target,role,color`.
inline constexpr std::string_view kNodesCsvHeader = "id,kind,label,size,x,y,color";
inline constexpr std::string_view kEdgesCsvHeader = "id,source,target,role,color";
std::string nodes_csv(const DrawingGraph& drawing);
std::string edges_csv(const DrawingGraph& drawing);
std::string nodes_csv(const ProvGraph& graph);
std::string edges_csv(const ProvGraph& graph);
void export_csv(const DrawingGraph& drawing, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path);
void export_csv(const ProvGraph& graph, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path);

// DOT digraph with quoted ids; nodes carry fillcolor and width (inches = size/72).
std::string export_dot(const DrawingGraph& drawing);
std::string export_dot(const ProvGraph& graph);

/// provgraph JSON v1 with x/y/size/color added to each node and color to each
/// edge.
std::string drawing_to_json(const DrawingGraph& drawing, const std::map<std::string, std::string>& metadata = {});

struct SvgOptions {
    int width_px = 1000;
    int height_px = 1000;
    double edge_opacity = 0.6;
    std::string background = "#FFFFFF";
};

/// Standalone SVG 1.1: background rect, one <line> per edge under one
/// <circle> per node.
std::string to_svg(const DrawingGraph& drawing, const SvgOptions& options = {});
void render_svg(const DrawingGraph& drawing, const std::filesystem::path& path, const SvgOptions& options = {});

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace provenir
