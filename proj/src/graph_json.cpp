#include "provenir/graph_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace provenir {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json attributes_json(const Attributes& attributes) {
    ordered_json out = ordered_json::object();
    for (const auto& [key, value] : attributes) out[key] = value;
    return out;
}

Attributes parse_attributes(const nlohmann::json& value, const std::string& context) {
    Attributes out;
    if (value.is_null()) return out;
    if (!value.is_object()) throw Error(Errc::ParseError, context + ": attributes must be an object");
    for (const auto& [key, item] : value.items()) {
        if (!item.is_string()) throw Error(Errc::ParseError, context + ": attribute '" + key + "' must be a string");
        out.emplace(key, item.get<std::string>());
    }
    return out;
}

std::string required_string(const nlohmann::json& object, const char* key, const std::string& context) {
    auto it = object.find(key);
    if (it == object.end() || !it->is_string())
        throw Error(Errc::ParseError, context + ": missing string field '" + key + "'");
    return it->get<std::string>();
}

}  // namespace

std::string to_provgraph_json(const ProvGraph& graph) {
    ordered_json doc = ordered_json::object();
    doc["metadata"] = attributes_json(graph.metadata());
    ordered_json nodes = ordered_json::array();
    for (const ProvNode* node : graph.sorted_nodes()) {
        ordered_json item;
        item["id"] = node->id;
        item["kind"] = std::string(to_string(node->kind));
        item["label"] = node->label;
        item["attributes"] = attributes_json(node->attributes);
        nodes.push_back(std::move(item));
    }
    doc["nodes"] = std::move(nodes);
    ordered_json edges = ordered_json::array();
    for (const ProvEdge* edge : graph.sorted_edges()) {
        ordered_json item;
        item["id"] = edge->id;
        item["source"] = edge->source;
        item["target"] = edge->target;
        item["kind"] = std::string(to_string(edge->kind));
        item["attributes"] = attributes_json(edge->attributes);
        edges.push_back(std::move(item));
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

ProvGraph from_provgraph_json(std::string_view text, bool strict) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::ParseError, std::string("provgraph JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::ParseError, "provgraph JSON: top level must be an object");

    ProvGraph graph;
    if (auto it = doc.find("metadata"); it != doc.end()) graph.metadata() = parse_attributes(*it, "metadata");

    if (auto it = doc.find("nodes"); it != doc.end()) {
        if (!it->is_array()) throw Error(Errc::ParseError, "nodes must be an array");
        for (const auto& item : *it) {
            ProvNode node;
            node.id = required_string(item, "id", "node");
            const std::string context = "node '" + node.id + "'";
            const std::string kind = required_string(item, "kind", context);
            auto parsed = parse_node_kind(kind);
            if (!parsed) throw Error(Errc::UnknownKind, context + ": '" + kind + "'");
            node.kind = *parsed;
            if (auto label = item.find("label"); label != item.end() && label->is_string())
                node.label = label->get<std::string>();
            if (auto attrs = item.find("attributes"); attrs != item.end())
                node.attributes = parse_attributes(*attrs, context);
            graph.add_node(std::move(node));
        }
    }

    if (auto it = doc.find("edges"); it != doc.end()) {
        if (!it->is_array()) throw Error(Errc::ParseError, "edges must be an array");
        for (const auto& item : *it) {
            ProvEdge edge;
            edge.id = required_string(item, "id", "edge");
            const std::string context = "edge '" + edge.id + "'";
            edge.source = required_string(item, "source", context);
            edge.target = required_string(item, "target", context);
            const std::string kind = required_string(item, "kind", context);
            auto parsed = parse_relation_kind(kind);
            if (!parsed) throw Error(Errc::UnknownKind, context + ": '" + kind + "'");
            edge.kind = *parsed;
            if (auto attrs = item.find("attributes"); attrs != item.end())
                edge.attributes = parse_attributes(*attrs, context);
            if (strict)
                graph.add_edge(std::move(edge));
            else
                graph.add_edge_unchecked(std::move(edge));
        }
    }
    return graph;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(Errc::IoError, "read failed on '" + path.string() + "'");
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(Errc::IoError, "write failed on '" + path.string() + "'");
}

void save_provgraph(const ProvGraph& graph, const std::filesystem::path& path) {
    write_text_file(path, to_provgraph_json(graph));
}

ProvGraph load_provgraph(const std::filesystem::path& path, bool strict) {
    return from_provgraph_json(read_text_file(path), strict);
}

}  // namespace provenir
