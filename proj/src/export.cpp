#include "provenir/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "provenir/csv.hpp"
#include "provenir/graph_json.hpp"

namespace provenir {

namespace {

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string fixed(double value, int precision = 2) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::fixed, precision);
    if (ec != std::errc{}) return "0";
    std::string out(buffer, end);
    if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

constexpr std::string_view kGraphmlHeader =
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
    "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
    "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
    "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
    "  <key id=\"frame_width\" for=\"graph\" attr.name=\"frame_width\" attr.type=\"double\"/>\n"
    "  <key id=\"frame_height\" for=\"graph\" attr.name=\"frame_height\" attr.type=\"double\"/>\n"
    "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
    "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
    "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n"
    "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n"
    "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n"
    "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n"
    "  <key id=\"role\" for=\"edge\" attr.name=\"role\" attr.type=\"string\"/>\n"
    "  <key id=\"edge_color\" for=\"edge\" attr.name=\"color\" attr.type=\"string\"/>\n";

void data(std::ostringstream& out, std::string_view key, std::string_view value) {
    out << "      <data key=\"" << key << "\">" << xml_escape(value) << "</data>\n";
}

std::string default_color(NodeKind kind) {
    const StyleTable style = default_style();
    switch (kind) {
        case NodeKind::Entity: return style.file_color;
        case NodeKind::Agent: return style.agent_color;
        case NodeKind::Activity: return style.activity_color;
    }
    return style.file_color;
}

double parse_double(const std::string& text, const std::string& context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && (*first == ' ' || *first == '\n' || *first == '\t' || *first == '\r')) ++first;
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) throw Error(Errc::ParseError, context + ": '" + text + "' is not a number");
    return value;
}

std::string role_color(std::string_view role) {
    const StyleTable style = default_style();
    if (role == kRoleTeam) return style.team_color;
    if (role == kRoleContributor) return style.contributor_color;
    return {};
}

void write_file(const std::filesystem::path& path, const std::string& content) { write_text_file(path, content); }

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) return "0";
    return std::string(buffer, end);
}

std::string to_graphml(const DrawingGraph& drawing) {
    std::ostringstream out;
    out << kGraphmlHeader;
    out << "  <graph id=\"G\" edgedefault=\"directed\">\n";
    out << "    <data key=\"frame_width\">" << format_double(drawing.width) << "</data>\n";
    out << "    <data key=\"frame_height\">" << format_double(drawing.height) << "</data>\n";
    for (const auto& node : drawing.nodes) {
        out << "    <node id=\"" << xml_escape(node.id) << "\">\n";
        data(out, "label", node.label);
        data(out, "kind", to_string(node.kind));
        data(out, "size", format_double(node.size));
        data(out, "x", format_double(node.x));
        data(out, "y", format_double(node.y));
        data(out, "color", node.color);
        out << "    </node>\n";
    }
    for (const auto& edge : drawing.edges) {
        out << "    <edge id=\"" << xml_escape(edge.id) << "\" source=\"" << xml_escape(edge.source)
            << "\" target=\"" << xml_escape(edge.target) << "\">\n";
        data(out, "role", edge.role);
        data(out, "edge_color", edge.color);
        out << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

std::string to_graphml(const ProvGraph& graph) {
    std::ostringstream out;
    out << kGraphmlHeader;
    out << "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (const ProvNode* node : graph.sorted_nodes()) {
        out << "    <node id=\"" << xml_escape(node->id) << "\">\n";
        data(out, "label", node->label);
        data(out, "kind", to_string(node->kind));
        out << "    </node>\n";
    }
    for (const ProvEdge* edge : graph.sorted_edges()) {
        out << "    <edge id=\"" << xml_escape(edge->id) << "\" source=\"" << xml_escape(edge->source)
            << "\" target=\"" << xml_escape(edge->target) << "\">\n";
        if (auto role = edge->attributes.find("role"); role != edge->attributes.end()) data(out, "role", role->second);
        out << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

void export_graphml(const DrawingGraph& drawing, const std::filesystem::path& path) {
    write_file(path, to_graphml(drawing));
}

void export_graphml(const ProvGraph& graph, const std::filesystem::path& path) { write_file(path, to_graphml(graph)); }

DrawingGraph from_graphml(std::string_view text, double default_size) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw Error(Errc::ParseError, "GraphML line " + std::to_string(e.line()) + ": " + e.message());
    }
    auto root = tree.get_child_optional("graphml");
    if (!root) throw Error(Errc::ParseError, "GraphML: missing <graphml> root element");

    // key id -> attribute name, per scope
    std::map<std::pair<std::string, std::string>, std::string> key_names;
    for (const auto& [tag, child] : *root) {
        if (tag != "key") continue;
        const std::string id = child.get<std::string>("<xmlattr>.id", "");
        const std::string scope = child.get<std::string>("<xmlattr>.for", "all");
        const std::string name = child.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'), id);
        key_names[{scope, id}] = name;
    }
    auto resolve = [&](const std::string& scope, const std::string& key) {
        if (auto it = key_names.find({scope, key}); it != key_names.end()) return it->second;
        if (auto it = key_names.find({"all", key}); it != key_names.end()) return it->second;
        return key;
    };
    auto collect = [&](const pt::ptree& element, const std::string& scope) {
        std::map<std::string, std::string> values;
        for (const auto& [tag, child] : element) {
            if (tag != "data") continue;
            const auto key = child.get_optional<std::string>("<xmlattr>.key");
            if (!key) throw Error(Errc::ParseError, "GraphML: <data> without key in <" + scope + ">");
            values[resolve(scope, *key)] = child.get_value<std::string>();
        }
        return values;
    };

    auto graph = root->get_child_optional("graph");
    if (!graph) throw Error(Errc::ParseError, "GraphML: missing <graph> element");

    DrawingGraph drawing;
    const auto graph_data = collect(*graph, "graph");
    if (auto it = graph_data.find("frame_width"); it != graph_data.end())
        drawing.width = parse_double(it->second, "graph frame_width");
    if (auto it = graph_data.find("frame_height"); it != graph_data.end())
        drawing.height = parse_double(it->second, "graph frame_height");

    for (const auto& [tag, child] : *graph) {
        if (tag == "node") {
            DrawingNode node;
            node.id = child.get<std::string>("<xmlattr>.id", "");
            if (node.id.empty()) throw Error(Errc::ParseError, "GraphML: <node> without id");
            const std::string context = "GraphML node '" + node.id + "'";
            const auto values = collect(child, "node");
            auto get = [&](const char* key) -> const std::string* {
                auto it = values.find(key);
                return it == values.end() ? nullptr : &it->second;
            };
            if (const auto* kind = get("kind")) {
                auto parsed = parse_node_kind(*kind);
                if (!parsed) throw Error(Errc::UnknownKind, context + ": kind '" + *kind + "'");
                node.kind = *parsed;
            } else {
                throw Error(Errc::UnknownKind, context + ": missing kind");
            }
            if (const auto* label = get("label")) node.label = *label;
            node.size = get("size") ? parse_double(*get("size"), context + " size") : default_size;
            node.x = get("x") ? parse_double(*get("x"), context + " x") : 0.0;
            node.y = get("y") ? parse_double(*get("y"), context + " y") : 0.0;
            node.color = get("color") ? *get("color") : default_color(node.kind);
            drawing.nodes.push_back(std::move(node));
        } else if (tag == "edge") {
            DrawingEdge edge;
            edge.source = child.get<std::string>("<xmlattr>.source", "");
            edge.target = child.get<std::string>("<xmlattr>.target", "");
            edge.id = child.get<std::string>("<xmlattr>.id", edge.source + "->" + edge.target);
            if (edge.source.empty() || edge.target.empty())
                throw Error(Errc::ParseError, "GraphML edge '" + edge.id + "': missing source or target");
            const auto values = collect(child, "edge");
            if (auto it = values.find("role"); it != values.end()) edge.role = it->second;
            if (auto it = values.find("color"); it != values.end()) edge.color = it->second;
            else edge.color = role_color(edge.role);
            drawing.edges.push_back(std::move(edge));
        }
    }
    std::sort(drawing.nodes.begin(), drawing.nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(drawing.edges.begin(), drawing.edges.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return drawing;
}

DrawingGraph import_graphml(const std::filesystem::path& path, double default_size) {
    return from_graphml(read_text_file(path), default_size);
}

std::string nodes_csv(const DrawingGraph& drawing) {
    std::ostringstream out;
    out << kNodesCsvHeader << '\n';
    for (const auto& node : drawing.nodes) {
        out << csv_field(node.id) << ',' << to_string(node.kind) << ',' << csv_field(node.label) << ','
            << format_double(node.size) << ',' << format_double(node.x) << ',' << format_double(node.y) << ','
            << csv_field(node.color) << '\n';
    }
    return out.str();
}

std::string edges_csv(const DrawingGraph& drawing) {
    std::ostringstream out;
    out << kEdgesCsvHeader << '\n';
    for (const auto& edge : drawing.edges) {
        out << csv_field(edge.id) << ',' << csv_field(edge.source) << ',' << csv_field(edge.target) << ','
            << csv_field(edge.role) << ',' << csv_field(edge.color) << '\n';
    }
    return out.str();
}

std::string nodes_csv(const ProvGraph& graph) {
    std::ostringstream out;
    out << kNodesCsvHeader << '\n';
    for (const ProvNode* node : graph.sorted_nodes())
        out << csv_field(node->id) << ',' << to_string(node->kind) << ',' << csv_field(node->label) << ",,,,\n";
    return out.str();
}

std::string edges_csv(const ProvGraph& graph) {
    std::ostringstream out;
    out << kEdgesCsvHeader << '\n';
    for (const ProvEdge* edge : graph.sorted_edges()) {
        auto role = edge->attributes.find("role");
        out << csv_field(edge->id) << ',' << csv_field(edge->source) << ',' << csv_field(edge->target) << ','
            << csv_field(role == edge->attributes.end() ? std::string_view{} : std::string_view(role->second))
            << ",\n";
    }
    return out.str();
}

void export_csv(const DrawingGraph& drawing, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path) {
    write_file(nodes_path, nodes_csv(drawing));
    write_file(edges_path, edges_csv(drawing));
}

void export_csv(const ProvGraph& graph, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path) {
    write_file(nodes_path, nodes_csv(graph));
    write_file(edges_path, edges_csv(graph));
}

std::string export_dot(const DrawingGraph& drawing) {
    std::ostringstream out;
    out << "digraph {\n";
    for (const auto& node : drawing.nodes) {
        out << "  " << dot_quote(node.id) << " [label=" << dot_quote(node.label)
            << ", style=filled, fillcolor=" << dot_quote(node.color)
            << ", width=" << format_double(node.size / 72.0) << "];\n";
    }
    for (const auto& edge : drawing.edges) {
        out << "  " << dot_quote(edge.source) << " -> " << dot_quote(edge.target) << " [color=" << dot_quote(edge.color)
            << ", role=" << dot_quote(edge.role) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot(const ProvGraph& graph) {
    std::ostringstream out;
    out << "digraph {\n";
    for (const ProvNode* node : graph.sorted_nodes()) {
        out << "  " << dot_quote(node->id) << " [label=" << dot_quote(node->label)
            << ", style=filled, fillcolor=" << dot_quote(default_color(node->kind))
            << ", width=" << format_double(4.0 / 72.0) << "];\n";
    }
    for (const ProvEdge* edge : graph.sorted_edges()) {
        auto role = edge->attributes.find("role");
        const std::string color = role == edge->attributes.end() ? "#000000" : role_color(role->second);
        out << "  " << dot_quote(edge->source) << " -> " << dot_quote(edge->target)
            << " [label=" << dot_quote(to_string(edge->kind)) << ", color=" << dot_quote(color) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string drawing_to_json(const DrawingGraph& drawing, const std::map<std::string, std::string>& metadata) {
    using ordered_json = nlohmann::ordered_json;
    ordered_json doc = ordered_json::object();
    ordered_json meta = ordered_json::object();
    std::map<std::string, std::string> merged(metadata);
    merged["frame_height"] = format_double(drawing.height);
    merged["frame_width"] = format_double(drawing.width);
    for (const auto& [key, value] : merged) meta[key] = value;
    doc["metadata"] = std::move(meta);

    ordered_json nodes = ordered_json::array();
    for (const auto& node : drawing.nodes) {
        ordered_json item;
        item["id"] = node.id;
        item["kind"] = std::string(to_string(node.kind));
        item["label"] = node.label;
        item["attributes"] = ordered_json::object();
        item["x"] = node.x;
        item["y"] = node.y;
        item["size"] = node.size;
        item["color"] = node.color;
        nodes.push_back(std::move(item));
    }
    doc["nodes"] = std::move(nodes);

    ordered_json edges = ordered_json::array();
    for (const auto& edge : drawing.edges) {
        ordered_json item;
        item["id"] = edge.id;
        item["source"] = edge.source;
        item["target"] = edge.target;
        item["kind"] = std::string(to_string(RelationKind::ContributesTo));
        item["attributes"] = ordered_json{{"role", edge.role}};
        item["color"] = edge.color;
        edges.push_back(std::move(item));
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

std::string to_svg(const DrawingGraph& drawing, const SvgOptions& options) {
    const double wpx = options.width_px;
    const double hpx = options.height_px;
    const double scale = std::min(wpx / drawing.width, hpx / drawing.height);
    const double offset_x = (wpx - drawing.width * scale) / 2.0;
    const double offset_y = (hpx - drawing.height * scale) / 2.0;
    auto px = [&](double x) { return fixed(offset_x + x * scale); };
    auto py = [&](double y) { return fixed(offset_y + y * scale); };

    std::map<std::string_view, const DrawingNode*> by_id;
    for (const auto& node : drawing.nodes) by_id.emplace(node.id, &node);

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width_px << "\" height=\""
        << options.height_px << "\" viewBox=\"0 0 " << options.width_px << ' ' << options.height_px << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << options.width_px << "\" height=\"" << options.height_px
        << "\" fill=\"" << xml_escape(options.background) << "\"/>\n";
    out << "<g id=\"edges\" stroke-width=\"1\" stroke-opacity=\"" << fixed(options.edge_opacity, 3) << "\">\n";
    for (const auto& edge : drawing.edges) {
        auto s = by_id.find(edge.source);
        auto t = by_id.find(edge.target);
        if (s == by_id.end() || t == by_id.end()) continue;
        out << "<line x1=\"" << px(s->second->x) << "\" y1=\"" << py(s->second->y) << "\" x2=\"" << px(t->second->x)
            << "\" y2=\"" << py(t->second->y) << "\" stroke=\"" << xml_escape(edge.color) << "\"/>\n";
    }
    out << "</g>\n";
    out << "<g id=\"nodes\" stroke=\"#FFFFFF\" stroke-width=\"0.5\">\n";
    for (const auto& node : drawing.nodes) {
        out << "<circle cx=\"" << px(node.x) << "\" cy=\"" << py(node.y) << "\" r=\"" << fixed(node.size / 2.0 * scale)
            << "\" fill=\"" << xml_escape(node.color) << "\"><title>" << xml_escape(node.label)
            << "</title></circle>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

void render_svg(const DrawingGraph& drawing, const std::filesystem::path& path, const SvgOptions& options) {
    if (options.width_px <= 0 || options.height_px <= 0)
        throw Error(Errc::InvalidArgument, "SVG viewport must be positive");
    if (options.edge_opacity < 0.0 || options.edge_opacity > 1.0)
        throw Error(Errc::InvalidArgument, "edge opacity must be within [0, 1]");
    write_file(path, to_svg(drawing, options));
}

}  // namespace provenir
