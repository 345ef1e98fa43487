#include "provenir/git_extract.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <unordered_map>

#include <fnmatch.h>

#include <json.hpp>

#include "provenir/graph_json.hpp"
#include "provenir/subprocess.hpp"

namespace provenir {

namespace {

constexpr char kRecordSeparator = '\x1e';
constexpr char kFieldSeparator = '\x1f';

std::string trim_lower(std::string_view text) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> git_args(const std::filesystem::path& repo) {
    return {"git", "-c", "core.quotepath=off", "-c", "log.showSignature=false", "-c", "i18n.logOutputEncoding=UTF-8",
            "-C", repo.string()};
}

ProcessResult git(const std::filesystem::path& repo, std::initializer_list<std::string> args) {
    auto argv = git_args(repo);
    argv.insert(argv.end(), args.begin(), args.end());
    return run_process(argv);
}

std::vector<std::string_view> split(std::string_view text, char separator) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(separator, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

bool path_selected(const std::string& path, const std::vector<std::string>& filters) {
    if (filters.empty()) return true;
    return std::any_of(filters.begin(), filters.end(),
                       [&](const std::string& glob) { return ::fnmatch(glob.c_str(), path.c_str(), 0) == 0; });
}

CommitRecord parse_commit(std::string_view record, const ExtractionOptions& options) {
    const std::size_t header_end = record.find('\0');
    const std::string_view header = record.substr(0, header_end);
    const auto fields = split(header, kFieldSeparator);
    if (fields.size() != 5) throw Error(Errc::CorruptObject, "unexpected git log header");

    CommitRecord commit;
    commit.hash = fields[0];
    commit.author_name = fields[1];
    commit.author_email = fields[2];
    try {
        commit.author_time = std::stoll(std::string(fields[3]));
    } catch (const std::exception&) {
        throw Error(Errc::CorruptObject, "bad author time in commit " + commit.hash);
    }
    for (auto parent : split(fields[4], ' '))
        if (!parent.empty()) commit.parents.emplace_back(parent);

    if (header_end == std::string_view::npos) return commit;
    std::string_view body = record.substr(header_end + 1);
    while (!body.empty() && body.front() == '\n') body.remove_prefix(1);
    auto tokens = split(body, '\0');
    for (std::size_t i = 0; i < tokens.size();) {
        const std::string_view status = tokens[i];
        if (status.empty()) {
            ++i;
            continue;
        }
        FileChange change;
        switch (status.front()) {
            case 'A': change.type = ChangeType::Added; break;
            case 'D': change.type = ChangeType::Deleted; break;
            case 'R': change.type = ChangeType::Renamed; break;
            case 'C': change.type = ChangeType::Added; break;  // copy: new path only
            default: change.type = ChangeType::Modified; break;
        }
        const bool two_paths = status.front() == 'R' || status.front() == 'C';
        if (i + (two_paths ? 2 : 1) >= tokens.size())
            throw Error(Errc::CorruptObject, "truncated name-status in commit " + commit.hash);
        if (two_paths) {
            change.old_path = tokens[i + 1];
            change.path = tokens[i + 2];
            i += 3;
        } else {
            change.path = tokens[i + 1];
            i += 2;
        }
        if (change.type != ChangeType::Renamed) change.old_path.clear();
        if (change.type == ChangeType::Renamed && change.old_path == change.path) {
            change.type = ChangeType::Modified;
            change.old_path.clear();
        }
        if (path_selected(change.path, options.path_filters)) commit.changes.push_back(std::move(change));
    }
    return commit;
}

std::string iso_utc(std::int64_t seconds) {
    const std::time_t t = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string short_hash(const std::string& hash) { return hash.substr(0, 7); }

std::string repository_name(const std::filesystem::path& repo) {
    std::filesystem::path path = std::filesystem::weakly_canonical(std::filesystem::absolute(repo));
    std::string name = path.filename().string();
    if (name.empty()) name = path.parent_path().filename().string();
    if (name == ".git") return path.parent_path().filename().string();
    if (name.size() > 4 && name.ends_with(".git")) name.resize(name.size() - 4);
    return name;
}

}  // namespace

std::string_view to_string(ChangeType type) noexcept {
    switch (type) {
        case ChangeType::Added: return "added";
        case ChangeType::Modified: return "modified";
        case ChangeType::Deleted: return "deleted";
        case ChangeType::Renamed: return "renamed";
    }
    return "modified";
}

std::string canonical_identity(std::string_view name, std::string_view email, const AliasMap* aliases) {
    std::string identity = trim_lower(email);
    if (identity.empty()) identity = trim_lower(name);
    if (aliases != nullptr) {
        if (auto it = aliases->find(identity); it != aliases->end()) return it->second;
    }
    return identity;
}

AliasMap load_alias_map(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::ParseError, path.string() + ": alias map must be a JSON object");
    AliasMap aliases;
    for (const auto& [from, to] : doc.items()) {
        if (!to.is_string()) throw Error(Errc::ParseError, path.string() + ": alias '" + from + "' must map to a string");
        aliases[trim_lower(from)] = trim_lower(to.get<std::string>());
    }
    return aliases;
}

std::vector<CommitRecord> read_history(const std::filesystem::path& repo, const ExtractionOptions& options) {
    if (!std::filesystem::is_directory(repo))
        throw Error(Errc::NotARepository, "'" + repo.string() + "' is not a directory");
    if (git(repo, {"rev-parse", "--git-dir"}).exit_code != 0)
        throw Error(Errc::NotARepository, "'" + repo.string() + "' is not a git repository");

    const std::string rev = options.branch.empty() ? "HEAD" : options.branch;
    if (rev.starts_with('-')) throw Error(Errc::UnknownBranch, "invalid branch name '" + rev + "'");
    auto resolved = git(repo, {"rev-parse", "--verify", "--quiet", rev + "^{commit}"});
    if (resolved.exit_code != 0) {
        // An unborn HEAD is an empty history, not an error.
        if (options.branch.empty() && git(repo, {"rev-list", "-n", "1", "--all"}).out.empty()) return {};
        throw Error(Errc::UnknownBranch, "cannot resolve '" + rev + "'");
    }
    std::string head = resolved.out;
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.pop_back();

    auto argv = git_args(repo);
    for (const char* arg : {"log", "--topo-order", "--reverse", "--no-color", "--no-ext-diff", "--root",
                            "--diff-merges=first-parent", "--name-status", "-z",
                            "--format=%x1e%H%x1f%an%x1f%ae%x1f%at%x1f%P"})
        argv.emplace_back(arg);
    argv.emplace_back(options.detect_renames ? "-M" : "--no-renames");
    if (!options.include_merges) argv.emplace_back("--no-merges");
    argv.push_back(head);
    argv.emplace_back("--");
    auto log = run_process(argv);
    if (log.exit_code != 0) throw Error(Errc::CorruptObject, "git log failed: " + log.err);

    std::vector<CommitRecord> history;
    for (auto record : split(log.out, kRecordSeparator)) {
        if (record.find_first_not_of("\n") == std::string_view::npos) continue;
        history.push_back(parse_commit(record, options));
    }
    return history;
}

ProvGraph build_provenance(const std::vector<CommitRecord>& history, const ExtractionOptions& options,
                           const std::map<std::string, std::string>& metadata) {
    ProvGraph graph;
    graph.metadata() = Attributes(metadata.begin(), metadata.end());

    std::unordered_map<std::string, const CommitRecord*> by_hash;
    for (const auto& commit : history) by_hash.emplace(commit.hash, &commit);

    // Revision id per changed path, per commit.
    std::unordered_map<std::string, std::unordered_map<std::string, std::string>> revisions_at;

    auto prior_revision = [&](const std::string& path, const CommitRecord& commit) -> std::optional<std::string> {
        if (commit.parents.empty()) return std::nullopt;
        auto it = by_hash.find(commit.parents.front());
        while (it != by_hash.end()) {
            const CommitRecord& ancestor = *it->second;
            if (auto changed = revisions_at.find(ancestor.hash); changed != revisions_at.end()) {
                if (auto rev = changed->second.find(path); rev != changed->second.end()) return rev->second;
            }
            if (ancestor.parents.empty()) break;
            it = by_hash.find(ancestor.parents.front());
        }
        return std::nullopt;
    };

    auto add_edge_once = [&](RelationKind kind, const std::string& source, const std::string& target) {
        std::string id = make_edge_id(kind, source, target);
        if (!graph.has_edge(id)) graph.add_edge({std::move(id), source, target, kind, {}});
    };

    std::int64_t newest = 0;
    for (const auto& commit : history) {
        newest = std::max(newest, commit.author_time);
        const std::string activity = "activity:" + commit.hash;
        const std::string identity = canonical_identity(commit.author_name, commit.author_email, &options.aliases);
        const std::string agent = "agent:" + identity;

        std::string parents;
        for (const auto& p : commit.parents) parents += (parents.empty() ? "" : " ") + p;
        graph.add_node({activity,
                        NodeKind::Activity,
                        short_hash(commit.hash),
                        {{"author_time", iso_utc(commit.author_time)}, {"hash", commit.hash}, {"parents", parents}}});
        if (!graph.has_node(agent)) {
            graph.add_node({agent,
                            NodeKind::Agent,
                            commit.author_name.empty() ? identity : commit.author_name,
                            {{"email", commit.author_email}, {"identity", identity}, {"name", commit.author_name}}});
        }
        add_edge_once(RelationKind::WasAssociatedWith, activity, agent);
        for (const auto& parent : commit.parents)
            if (by_hash.contains(parent)) add_edge_once(RelationKind::WasInformedBy, activity, "activity:" + parent);

        auto& changed_here = revisions_at[commit.hash];
        for (const auto& change : commit.changes) {
            const std::string file = "file:" + change.path;
            const std::string revision = "revision:" + change.path + "@" + commit.hash;
            if (!graph.has_node(file))
                graph.add_node({file, NodeKind::Entity, change.path, {{"path", change.path}, {"type", "file"}}});
            if (graph.has_node(revision)) continue;

            Attributes attributes{{"change", std::string(to_string(change.type))},
                                  {"commit", commit.hash},
                                  {"path", change.path},
                                  {"type", "revision"}};
            if (change.type == ChangeType::Renamed) attributes["old_path"] = change.old_path;
            graph.add_node({revision, NodeKind::Entity, change.path + "@" + short_hash(commit.hash), attributes});

            add_edge_once(RelationKind::SpecializationOf, revision, file);
            add_edge_once(RelationKind::WasGeneratedBy, revision, activity);
            add_edge_once(RelationKind::WasAttributedTo, revision, agent);

            if (change.type != ChangeType::Added) {
                const std::string& lookup = change.type == ChangeType::Renamed ? change.old_path : change.path;
                if (auto prior = prior_revision(lookup, commit)) {
                    add_edge_once(RelationKind::Used, activity, *prior);
                    if (change.type != ChangeType::Deleted)
                        add_edge_once(RelationKind::WasDerivedFrom, revision, *prior);
                }
            }
            changed_here.emplace(change.path, revision);
        }
    }
    if (!history.empty()) graph.metadata().emplace("snapshot_time", iso_utc(newest));
    return graph;
}

ProvGraph extract(const std::filesystem::path& repo, const ExtractionOptions& options) {
    auto history = read_history(repo, options);
    std::map<std::string, std::string> metadata{
        {"repository", repository_name(repo)},
        {"branch", options.branch.empty() ? "HEAD" : options.branch},
        {"renames", options.detect_renames ? "on" : "off"},
        {"tool_version", std::string(kToolVersion)},
    };
    if (!history.empty()) metadata["head"] = history.back().hash;
    return build_provenance(history, options, metadata);
}

}  // namespace provenir
