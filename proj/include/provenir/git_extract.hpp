#pragma once

// Commit history -> retrospective provenance.
//
//   commit               -> Activity  activity:<hash>
//   path ever touched    -> Entity    file:<path>
//   (path, commit) change-> Entity    revision:<path>@<hash>   specializationOf file
//   author identity      -> Agent     agent:<identity>
//
// Diffs are taken against the first parent (empty tree for roots).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provenir/prov_graph.hpp"

namespace provenir {

enum class ChangeType { Added, Modified, Deleted, Renamed };

struct FileChange {
    std::string path;
    ChangeType type = ChangeType::Modified;
    std::string old_path;  // non-empty and != path iff type == Renamed

    bool operator==(const FileChange&) const = default;
};

struct CommitRecord {
    std::string hash;
    std::string author_name;
    std::string author_email;
    std::int64_t author_time = 0;  // unix seconds, UTC
    std::vector<std::string> parents;
    std::vector<FileChange> changes;
};

using AliasMap = std::map<std::string, std::string>;

struct ExtractionOptions {
    std::string branch;  // empty: HEAD
    bool include_merges = true;
    bool detect_renames = true;
    std::vector<std::string> path_filters;  // fnmatch globs; empty keeps all
    AliasMap aliases;                       // canonical identity -> replacement
};

/// Lowercased trimmed email when non-empty, else lowercased trimmed name;
/// the alias map is applied last.
std::string canonical_identity(std::string_view name, std::string_view email, const AliasMap* aliases = nullptr);

/// Commits reachable from the branch, parents before children.
std::vector<CommitRecord> read_history(const std::filesystem::path& repo, const ExtractionOptions& options = {});

/// Builds the provenance graph from already-read history.
ProvGraph build_provenance(const std::vector<CommitRecord>& history, const ExtractionOptions& options = {},
                           const std::map<std::string, std::string>& metadata = {});

ProvGraph extract(const std::filesystem::path& repo, const ExtractionOptions& options = {});

std::string_view to_string(ChangeType type) noexcept;

AliasMap load_alias_map(const std::filesystem::path& path);

inline constexpr std::string_view kToolVersion = "provenir 1.0.0";

}  // namespace provenir
