#pragma once

// Shared fixtures, generators and independent oracles for the unit and
// acceptance tests.

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "provenir/git_extract.hpp"
#include "provenir/prov_graph.hpp"
#include "provenir/query_stats.hpp"
#include "provenir/roles.hpp"

namespace provenir::testing {

namespace fs = std::filesystem;

fs::path fixture_dir();

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

/// `git init -b main` at parent/name, then loads a fast-import stream.
fs::path make_repo(const fs::path& parent, const std::string& name, const std::string& fast_import_stream);

/// The bundled seven-commit repository, created as parent/fixture-repo.
fs::path make_fixture_repo(const fs::path& parent);

/// Runs git and returns stdout; throws std::runtime_error on non-zero exit.
std::string git(const fs::path& repo, const std::vector<std::string>& args);

// Random histories as fast-import streams: adds, modifies, deletes, renames,
// side branches merged back, several authors with inconsistent email case.
struct HistoryShape {
    int min_commits = 6;
    int max_commits = 25;
    int authors = 5;
};
std::string random_history_stream(std::mt19937_64& rng, const HistoryShape& shape = {});

// Brute-force recount straight from git plumbing output.
struct RawCounts {
    std::size_t activities = 0;
    std::size_t agents = 0;
    std::size_t files = 0;
};
RawCounts brute_force_counts(const fs::path& repo);

struct GraphCounts {
    std::size_t activities = 0;
    std::size_t agents = 0;
    std::size_t files = 0;
};
GraphCounts count_graph(const ProvGraph& graph);

/// Synthetic commit records (no git involved) for in-memory graph generation.
std::vector<CommitRecord> random_commit_records(std::mt19937_64& rng, int commits, int authors, int paths);

/// Annotated graph from random records plus a random team split; node count
/// stays at or below `max_nodes`.
struct AnnotatedCase {
    ProvGraph graph;
    Membership membership;
};
AnnotatedCase random_annotated_graph(std::mt19937_64& rng, std::size_t max_nodes = 200);

/// Collaboration query as a literal triple loop over ContributesTo edges:
/// (t)-[team]->(f)<-[contributor]-(c), then every edge into a matched f.
struct CollabOracle {
    std::set<std::string> nodes;
    std::set<std::string> edges;
};
CollabOracle collab_oracle(const ProvGraph& graph);

/// Minimal RFC-4180 reader: rows of fields.
std::vector<std::vector<std::string>> read_csv(const std::string& text);

/// Random ProvGraph that is a valid collaboration drawing input: agents,
/// files and role-tagged ContributesTo edges.
ProvGraph random_collab_graph(std::mt19937_64& rng, int max_agents = 12, int max_files = 30);

/// Occurrences of `needle` in `haystack`.
std::size_t count_occurrences(const std::string& haystack, const std::string& needle);

}  // namespace provenir::testing
