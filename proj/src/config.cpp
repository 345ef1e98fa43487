#include "provenir/config.hpp"

#include <charconv>
#include <set>
#include <system_error>

#include "provenir/graph_json.hpp"

namespace provenir {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw Error(Errc::ParseError, "config line " + std::to_string(line) + ": " + message);
}

// Reads a quoted string starting at s[pos] == '"'; leaves pos after the
// closing quote.
std::string read_quoted(std::string_view s, std::size_t& pos, int line) {
    std::string out;
    ++pos;
    while (pos < s.size()) {
        const char c = s[pos++];
        if (c == '"') return out;
        if (c != '\\') {
            out += c;
            continue;
        }
        if (pos >= s.size()) break;
        switch (const char e = s[pos++]) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            default: fail(line, std::string("unsupported escape \\") + e);
        }
    }
    fail(line, "unterminated string");
}

void skip_space(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

void expect_end(std::string_view s, std::size_t pos, int line) {
    skip_space(s, pos);
    if (pos < s.size() && s[pos] != '#' && s[pos] != '\r') fail(line, "trailing characters after value");
}

ConfigValue parse_value(std::string_view s, int line) {
    ConfigValue value;
    value.line = line;
    std::size_t pos = 0;
    skip_space(s, pos);
    if (pos >= s.size()) fail(line, "missing value");
    if (s[pos] == '"') {
        value.quoted = true;
        value.text = read_quoted(s, pos, line);
        expect_end(s, pos, line);
        return value;
    }
    if (s[pos] == '[') {
        value.array = true;
        ++pos;
        for (;;) {
            skip_space(s, pos);
            if (pos >= s.size()) fail(line, "unterminated array");
            if (s[pos] == ']') {
                ++pos;
                break;
            }
            if (s[pos] != '"') fail(line, "array elements must be quoted strings");
            value.items.push_back(read_quoted(s, pos, line));
            skip_space(s, pos);
            if (pos < s.size() && s[pos] == ',') ++pos;
            else if (pos < s.size() && s[pos] != ']') fail(line, "expected ',' or ']' in array");
        }
        expect_end(s, pos, line);
        return value;
    }
    std::string_view rest = s.substr(pos);
    if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    value.text = std::string(trim(rest));
    if (value.text.empty()) fail(line, "missing value");
    return value;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "pipeline.repo",       "pipeline.branch",      "pipeline.out_dir",     "extract.renames",
        "extract.merges",      "extract.paths",        "extract.alias_map",    "roles.team_file",
        "roles.forge_org",     "roles.token_env",      "roles.forge_url",      "roles.identity_bridge",
        "layout.algorithm",    "layout.iterations",    "layout.width",         "layout.height",
        "layout.seed",         "layout.fr_c",          "layout.fa2_scaling",   "layout.fa2_gravity",
        "size.min",            "size.max",             "style.palette",        "render.width_px",
        "render.height_px",    "render.edge_opacity",  "render.background",
    };
    return keys;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
    ConfigFile file;
    std::string section;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string_view::npos) fail(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, close - 1)));
            if (section.empty()) fail(line_no, "empty section name");
            expect_end(line, close + 1, line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const std::string key = std::string(trim(line.substr(0, eq)));
        if (key.empty()) fail(line_no, "empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (file.values_.contains(full)) fail(line_no, "duplicate key '" + full + "'");
        file.values_.emplace(full, parse_value(line.substr(eq + 1), line_no));
        if (end == text.size()) break;
    }
    return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

const ConfigValue* ConfigFile::find(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

std::vector<std::string> ConfigFile::keys() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_) out.push_back(key);
    return out;
}

std::optional<std::string> ConfigFile::get_string(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) return std::nullopt;
    if (v->array) fail(v->line, "'" + key + "' must be a string");
    return v->text;
}

std::optional<long long> ConfigFile::get_int(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) return std::nullopt;
    long long out = 0;
    const char* first = v->text.data();
    const char* last = first + v->text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (v->quoted || v->array || ec != std::errc{} || ptr != last) fail(v->line, "'" + key + "' must be an integer");
    return out;
}

std::optional<double> ConfigFile::get_double(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) return std::nullopt;
    double out = 0.0;
    const char* first = v->text.data();
    const char* last = first + v->text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (v->quoted || v->array || ec != std::errc{} || ptr != last) fail(v->line, "'" + key + "' must be a number");
    return out;
}

std::optional<bool> ConfigFile::get_bool(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) return std::nullopt;
    if (!v->quoted && !v->array) {
        if (v->text == "true") return true;
        if (v->text == "false") return false;
    }
    fail(v->line, "'" + key + "' must be true or false");
}

std::optional<std::vector<std::string>> ConfigFile::get_strings(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) return std::nullopt;
    if (!v->array) fail(v->line, "'" + key + "' must be an array of strings");
    return v->items;
}

PipelineConfig pipeline_config_from(const ConfigFile& file, const std::filesystem::path& base_dir) {
    for (const auto& key : file.keys())
        if (!known_keys().contains(key)) throw Error(Errc::InvalidArgument, "unknown config key '" + key + "'");

    auto path_of = [&](const std::string& text) {
        std::filesystem::path p(text);
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };

    PipelineConfig config;
    if (auto v = file.get_string("pipeline.repo")) config.repo = path_of(*v);
    if (auto v = file.get_string("pipeline.branch")) config.extraction.branch = *v;
    if (auto v = file.get_string("pipeline.out_dir")) config.out_dir = path_of(*v);

    if (auto v = file.get_bool("extract.renames")) config.extraction.detect_renames = *v;
    if (auto v = file.get_bool("extract.merges")) config.extraction.include_merges = *v;
    if (auto v = file.get_strings("extract.paths")) config.extraction.path_filters = *v;
    if (auto v = file.get_string("extract.alias_map")) config.alias_map = path_of(*v);

    if (auto v = file.get_string("roles.team_file")) config.team_file = path_of(*v);
    if (auto v = file.get_string("roles.forge_org")) config.forge_org = *v;
    if (auto v = file.get_string("roles.token_env")) config.token_env = *v;
    if (auto v = file.get_string("roles.forge_url")) config.forge_url = *v;
    if (auto v = file.get_string("roles.identity_bridge")) config.identity_bridge = path_of(*v);

    if (auto v = file.get_string("layout.algorithm")) {
        auto algorithm = parse_layout_algorithm(*v);
        if (!algorithm) throw Error(Errc::InvalidArgument, "unknown layout algorithm '" + *v + "'");
        config.layout.algorithm = *algorithm;
    }
    if (auto v = file.get_int("layout.iterations")) config.layout.iterations = static_cast<int>(*v);
    if (auto v = file.get_double("layout.width")) config.layout.width = *v;
    if (auto v = file.get_double("layout.height")) config.layout.height = *v;
    if (auto v = file.get_int("layout.seed")) {
        if (*v < 0) throw Error(Errc::InvalidArgument, "layout.seed must be non-negative");
        config.layout.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = file.get_double("layout.fr_c")) config.layout.fr_optimal_distance = *v;
    if (auto v = file.get_double("layout.fa2_scaling")) config.layout.fa2_scaling = *v;
    if (auto v = file.get_double("layout.fa2_gravity")) config.layout.fa2_gravity = *v;
    config.layout.check();

    if (auto v = file.get_double("size.min")) config.size_min = *v;
    if (auto v = file.get_double("size.max")) config.size_max = *v;
    SizeMode{SizeBy::EntityInDegree, config.size_min, config.size_max}.check();

    if (auto v = file.get_string("style.palette")) {
        if (!named_palette(*v)) throw Error(Errc::InvalidArgument, "unknown palette '" + *v + "'");
        config.palette = *v;
    }

    if (auto v = file.get_int("render.width_px")) config.svg.width_px = static_cast<int>(*v);
    if (auto v = file.get_int("render.height_px")) config.svg.height_px = static_cast<int>(*v);
    if (auto v = file.get_double("render.edge_opacity")) config.svg.edge_opacity = *v;
    if (auto v = file.get_string("render.background")) config.svg.background = *v;
    return config;
}

}  // namespace provenir
