#include "provenir/drawing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace provenir {

void SizeMode::check() const {
    if (!(min_size < max_size)) throw Error(Errc::InvalidArgument, "size range needs min < max");
    if (!(min_size >= 0.0)) throw Error(Errc::InvalidArgument, "sizes must be non-negative");
}

StyleTable default_style() {
    // Set2: #66C2A5 #FC8D62 #8DA0CB; Set1: #E41A1C #377EB8 #4DAF4A
    return {"#66C2A5", "#FC8D62", "#377EB8", "#E41A1C"};
}

StyleTable colorblind_safe_style() { return {"#009E73", "#E69F00", "#0072B2", "#D55E00"}; }

std::optional<StyleTable> named_palette(std::string_view name) {
    if (name == "default" || name == "colorbrewer") return default_style();
    if (name == "cb-safe") return colorblind_safe_style();
    return std::nullopt;
}

std::string_view to_string(SizeBy by) noexcept {
    return by == SizeBy::AgentOutDegree ? "agent-out" : "entity-in";
}

std::optional<SizeBy> parse_size_by(std::string_view text) noexcept {
    if (text == "entity-in" || text == "entity_in_degree") return SizeBy::EntityInDegree;
    if (text == "agent-out" || text == "agent_out_degree") return SizeBy::AgentOutDegree;
    return std::nullopt;
}

Sizes assign_sizes(const ProvGraph& graph, const SizeMode& mode) {
    mode.check();
    const NodeKind scaled_kind = mode.by == SizeBy::EntityInDegree ? NodeKind::Entity : NodeKind::Agent;
    const Direction direction = mode.by == SizeBy::EntityInDegree ? Direction::In : Direction::Out;

    std::size_t min_degree = std::numeric_limits<std::size_t>::max();
    std::size_t max_degree = 0;
    for (const auto& node : graph.nodes()) {
        if (node.kind != scaled_kind) continue;
        const std::size_t d = graph.degree(node.id, direction);
        min_degree = std::min(min_degree, d);
        max_degree = std::max(max_degree, d);
    }

    Sizes sizes;
    const double span = mode.max_size - mode.min_size;
    for (const auto& node : graph.nodes()) {
        double size = mode.min_size;
        if (node.kind == scaled_kind) {
            if (max_degree == min_degree) {
                size = (mode.min_size + mode.max_size) / 2.0;
            } else {
                const double t = static_cast<double>(graph.degree(node.id, direction) - min_degree) /
                                 static_cast<double>(max_degree - min_degree);
                size = mode.min_size + span * t;
            }
        }
        sizes.emplace(node.id, size);
    }
    return sizes;
}

DrawingGraph assign_styles(const ProvGraph& graph, const StyleTable& table) {
    DrawingGraph drawing;
    for (const ProvNode* node : graph.sorted_nodes()) {
        DrawingNode out;
        out.id = node->id;
        out.label = node->label;
        out.kind = node->kind;
        switch (node->kind) {
            case NodeKind::Entity: out.color = table.file_color; break;
            case NodeKind::Agent: out.color = table.agent_color; break;
            case NodeKind::Activity: out.color = table.activity_color; break;
        }
        drawing.nodes.push_back(std::move(out));
    }
    for (const ProvEdge* edge : graph.sorted_edges()) {
        auto role = edge->attributes.find("role");
        const std::string value = role == edge->attributes.end() ? std::string{} : role->second;
        std::string color;
        if (value == kRoleTeam) color = table.team_color;
        else if (value == kRoleContributor) color = table.contributor_color;
        else throw Error(Errc::UnknownRole, "edge '" + edge->id + "' has role '" + value + "'");
        drawing.edges.push_back({edge->id, edge->source, edge->target, value, std::move(color)});
    }
    return drawing;
}

void apply_positions(DrawingGraph& drawing, const Positions& positions) {
    for (auto& node : drawing.nodes) {
        if (auto it = positions.find(node.id); it != positions.end()) {
            node.x = it->second.x;
            node.y = it->second.y;
        }
    }
}

void apply_sizes(DrawingGraph& drawing, const Sizes& sizes) {
    for (auto& node : drawing.nodes)
        if (auto it = sizes.find(node.id); it != sizes.end()) node.size = it->second;
}

DrawingGraph make_drawing(const ProvGraph& subgraph, const DrawOptions& options) {
    options.layout.check();
    DrawingGraph drawing = assign_styles(subgraph, options.style);
    drawing.width = options.layout.width;
    drawing.height = options.layout.height;
    if (subgraph.node_count() > 0) apply_positions(drawing, compute_layout(subgraph, options.layout));
    apply_sizes(drawing, assign_sizes(subgraph, options.size));
    return drawing;
}

std::vector<std::string> check_drawing(const DrawingGraph& drawing, const SizeMode& size) {
    std::vector<std::string> problems;
    for (const auto& node : drawing.nodes) {
        if (!std::isfinite(node.x) || !std::isfinite(node.y)) problems.push_back(node.id + ": non-finite position");
        else if (node.x < 0.0 || node.x > drawing.width || node.y < 0.0 || node.y > drawing.height)
            problems.push_back(node.id + ": outside frame");
        if (!std::isfinite(node.size) || node.size < size.min_size || node.size > size.max_size)
            problems.push_back(node.id + ": size out of range");
    }
    return problems;
}

}  // namespace provenir
