#pragma once

// "provgraph JSON v1": {metadata, nodes[], edges[]}, arrays sorted by id,
// two-space indentation, trailing newline.

#include <filesystem>
#include <string>
#include <string_view>

#include "provenir/prov_graph.hpp"

namespace provenir {

std::string to_provgraph_json(const ProvGraph& graph);

/// Parses provgraph JSON v1. With `strict` every edge goes through the checked
/// insert; otherwise malformed edges are kept for validate() to report.
ProvGraph from_provgraph_json(std::string_view text, bool strict = true);

void save_provgraph(const ProvGraph& graph, const std::filesystem::path& path);
ProvGraph load_provgraph(const std::filesystem::path& path, bool strict = true);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace provenir
