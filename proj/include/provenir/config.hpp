#pragma once

// Pipeline configuration in a small TOML subset:
//
//   # comment
//   [section]
//   key = "string" | 123 | 4.5 | true | ["a", "b"]
//
// Keys are addressed as "section.key". Unknown keys are rejected so typos do
// not silently fall back to defaults.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provenir/drawing.hpp"
#include "provenir/export.hpp"
#include "provenir/git_extract.hpp"

namespace provenir {

struct ConfigValue {
    std::string text;                // unquoted string or bare token
    std::vector<std::string> items;  // array elements
    bool quoted = false;
    bool array = false;
    int line = 0;
};

class ConfigFile {
public:
    static ConfigFile parse(std::string_view text);
    static ConfigFile load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.contains(key); }
    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<long long> get_int(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<std::string>> get_strings(const std::string& key) const;

    std::vector<std::string> keys() const;

private:
    const ConfigValue* find(const std::string& key) const;
    std::map<std::string, ConfigValue> values_;
};

struct PipelineConfig {
    std::filesystem::path repo;
    std::filesystem::path out_dir = "provenir-out";
    ExtractionOptions extraction;
    std::optional<std::filesystem::path> alias_map;

    std::optional<std::filesystem::path> team_file;
    std::optional<std::string> forge_org;
    std::string token_env = "GITHUB_TOKEN";
    std::string forge_url = "https://api.github.com";
    std::optional<std::filesystem::path> identity_bridge;

    LayoutParams layout;
    double size_min = 4.0;
    double size_max = 40.0;
    std::string palette = "default";
    SvgOptions svg;
};

/// Reads every recognised key; relative paths resolve against `base_dir`.
/// Throws ParseError on type mismatches and InvalidArgument on unknown keys.
PipelineConfig pipeline_config_from(const ConfigFile& file, const std::filesystem::path& base_dir = {});

}  // namespace provenir
