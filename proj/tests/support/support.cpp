#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "provenir/graph_json.hpp"
#include "provenir/subprocess.hpp"

#ifndef PROVENIR_FIXTURE_DIR
#error "PROVENIR_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace provenir::testing {

fs::path fixture_dir() { return PROVENIR_FIXTURE_DIR; }

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    const fs::path base = fs::temp_directory_path();
    for (;;) {
        path_ = base / ("provenir-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        if (fs::create_directory(path_)) break;
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string git(const fs::path& repo, const std::vector<std::string>& args) {
    std::vector<std::string> argv = {"git", "-C", repo.string()};
    argv.insert(argv.end(), args.begin(), args.end());
    ProcessResult result = run_process(argv);
    if (result.exit_code != 0) {
        std::string command;
        for (const auto& a : argv) command += a + ' ';
        throw std::runtime_error(command + "failed: " + result.err);
    }
    return result.out;
}

fs::path make_repo(const fs::path& parent, const std::string& name, const std::string& stream) {
    const fs::path repo = parent / name;
    ProcessResult init = run_process({"git", "init", "-q", "-b", "main", repo.string()});
    if (init.exit_code != 0) throw std::runtime_error("git init failed: " + init.err);
    ProcessResult load = run_process({"git", "-C", repo.string(), "fast-import", "--quiet"}, std::nullopt, stream);
    if (load.exit_code != 0) throw std::runtime_error("git fast-import failed: " + load.err);
    return repo;
}

fs::path make_fixture_repo(const fs::path& parent) {
    return make_repo(parent, "fixture-repo", read_text_file(fixture_dir() / "fixture_repo.fi"));
}

// ---- random fast-import histories ----------------------------------------

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct Author {
    std::string name;
    std::string email;
};

std::string vary_case(std::mt19937_64& rng, std::string text) {
    for (char& c : text)
        if (chance(rng, 0.2)) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return text;
}

class HistoryWriter {
public:
    HistoryWriter(std::mt19937_64& rng, int authors) : rng_(rng) {
        for (int i = 0; i < authors; ++i) {
            const bool team = i % 2 == 0;
            authors_.push_back({"Author " + std::to_string(i),
                                "author" + std::to_string(i) + (team ? "@team.example" : "@ext.example")});
        }
    }

    using Tree = std::map<std::string, std::string>;

    struct Op {
        char type;  // M, D, R
        std::string path;
        std::string other;
    };

    // Applies a random set of changes to `tree` and returns the ops.
    std::vector<Op> random_ops(Tree& tree) {
        std::vector<Op> ops;
        std::set<std::string> touched;
        const int count = 1 + static_cast<int>(pick(rng_, 3));
        for (int i = 0; i < count; ++i) {
            const int kind = tree.empty() ? 0 : static_cast<int>(pick(rng_, 4));
            if (kind == 0) {
                const std::string path = fresh_path();
                tree[path] = content();
                ops.push_back({'M', path, {}});
                touched.insert(path);
                continue;
            }
            auto it = std::next(tree.begin(), static_cast<long>(pick(rng_, tree.size())));
            const std::string path = it->first;
            if (touched.contains(path)) continue;
            touched.insert(path);
            if (kind == 1) {
                it->second = content();
                ops.push_back({'M', path, {}});
            } else if (kind == 2 && tree.size() > 1) {
                tree.erase(it);
                ops.push_back({'D', path, {}});
            } else {
                const std::string target = fresh_path();
                tree[target] = it->second;
                tree.erase(path);
                touched.insert(target);
                ops.push_back({'R', path, target});
            }
        }
        return ops;
    }

    void commit(const std::string& ref, int mark, std::optional<int> from, std::optional<int> merge,
                const std::vector<Op>& ops, const Tree& tree) {
        const Author& a = authors_[pick(rng_, authors_.size())];
        const std::string who = a.name + " <" + vary_case(rng_, a.email) + ">";
        time_ += 60 + static_cast<long>(pick(rng_, 3600));
        out_ << "commit refs/heads/" << ref << "\nmark :" << mark << "\nauthor " << who << ' ' << time_
             << " +0000\ncommitter " << who << ' ' << time_ << " +0000\ndata <<EOT\ncommit " << mark << "\nEOT\n";
        if (from) out_ << "from :" << *from << '\n';
        if (merge) out_ << "merge :" << *merge << '\n';
        for (const auto& op : ops) {
            if (op.type == 'M') out_ << "M 100644 inline " << op.path << "\ndata <<EOT\n" << tree.at(op.path) << "EOT\n";
            else if (op.type == 'D') out_ << "D " << op.path << '\n';
            else out_ << "R " << op.path << ' ' << op.other << '\n';
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::string fresh_path() {
        static const char* dirs[] = {"", "src/", "docs/", "lib/core/"};
        return std::string(dirs[pick(rng_, 4)]) + "f" + std::to_string(next_path_++) + ".txt";
    }

    std::string content() {
        std::string text;
        const int lines = 3 + static_cast<int>(pick(rng_, 5));
        for (int i = 0; i < lines; ++i) text += "line " + std::to_string(rng_() % 1000003) + "\n";
        return text;
    }

    std::mt19937_64& rng_;
    std::vector<Author> authors_;
    std::ostringstream out_;
    long time_ = 1500000000;
    int next_path_ = 0;
};

}  // namespace

std::string random_history_stream(std::mt19937_64& rng, const HistoryShape& shape) {
    HistoryWriter writer(rng, shape.authors);
    const int total = shape.min_commits +
                      static_cast<int>(pick(rng, static_cast<std::size_t>(shape.max_commits - shape.min_commits + 1)));
    HistoryWriter::Tree main_tree;
    int mark = 0;
    std::optional<int> main_tip;
    int side_count = 0;
    while (mark < total) {
        if (main_tip && mark + 3 <= total && chance(rng, 0.2)) {
            // Side branch of 1-2 commits, optionally one more main commit, then a merge.
            const std::string side_ref = "side" + std::to_string(side_count++);
            HistoryWriter::Tree side_tree = main_tree;
            std::optional<int> side_tip = main_tip;
            std::set<std::string> side_changed;
            const int side_commits = 1 + static_cast<int>(pick(rng, 2));
            for (int i = 0; i < side_commits; ++i) {
                const auto ops = writer.random_ops(side_tree);
                for (const auto& op : ops) {
                    side_changed.insert(op.path);
                    if (!op.other.empty()) side_changed.insert(op.other);
                }
                writer.commit(side_ref, ++mark, side_tip, std::nullopt, ops, side_tree);
                side_tip = mark;
            }
            if (chance(rng, 0.5) && mark + 2 <= total) {
                // Main-line commit touching only paths the side branch left alone.
                HistoryWriter::Tree scratch = main_tree;
                auto ops = writer.random_ops(scratch);
                bool clash = false;
                for (const auto& op : ops)
                    clash = clash || side_changed.contains(op.path) || side_changed.contains(op.other);
                if (!clash) {
                    main_tree = scratch;
                    writer.commit("main", ++mark, main_tip, std::nullopt, ops, main_tree);
                    main_tip = mark;
                }
            }
            std::vector<HistoryWriter::Op> merge_ops;
            for (const auto& path : side_changed) {
                if (auto it = side_tree.find(path); it != side_tree.end()) {
                    main_tree[path] = it->second;
                    merge_ops.push_back({'M', path, {}});
                } else if (main_tree.erase(path)) {
                    merge_ops.push_back({'D', path, {}});
                }
            }
            writer.commit("main", ++mark, main_tip, side_tip, merge_ops, main_tree);
            main_tip = mark;
            continue;
        }
        const auto ops = writer.random_ops(main_tree);
        writer.commit("main", ++mark, main_tip, std::nullopt, ops, main_tree);
        main_tip = mark;
    }
    return writer.str();
}

// ---- oracles --------------------------------------------------------------

namespace {

std::string lower_trim(std::string text) {
    const auto first = text.find_first_not_of(" \t");
    const auto last = text.find_last_not_of(" \t");
    text = first == std::string::npos ? std::string{} : text.substr(first, last - first + 1);
    for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return text;
}

std::vector<std::string> split_any(const std::string& text, const std::string& separators) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (separators.find(c) != std::string::npos) {
            if (!current.empty()) out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

}  // namespace

RawCounts brute_force_counts(const fs::path& repo) {
    RawCounts counts;
    counts.activities = std::stoul(git(repo, {"rev-list", "--count", "HEAD"}));

    std::set<std::string> agents;
    for (const auto& line : split_any(git(repo, {"log", "--format=%ae%x1f%an", "HEAD"}), "\n")) {
        const auto sep = line.find('\x1f');
        std::string email = lower_trim(line.substr(0, sep));
        agents.insert(email.empty() ? lower_trim(line.substr(sep + 1)) : email);
    }
    counts.agents = agents.size();

    const std::string names = git(repo, {"-c", "core.quotepath=off", "log", "--no-renames", "--name-only",
                                         "--diff-merges=first-parent", "--root", "--format=", "-z", "HEAD"});
    std::set<std::string> paths;
    for (const auto& p : split_any(names, std::string("\n\0", 2))) paths.insert(p);
    counts.files = paths.size();
    return counts;
}

GraphCounts count_graph(const ProvGraph& graph) {
    GraphCounts counts;
    for (const auto& node : graph.nodes()) {
        if (node.kind == NodeKind::Activity) ++counts.activities;
        else if (node.kind == NodeKind::Agent) ++counts.agents;
        else if (is_file_entity(node)) ++counts.files;
    }
    return counts;
}

std::vector<CommitRecord> random_commit_records(std::mt19937_64& rng, int commits, int authors, int paths) {
    std::vector<CommitRecord> history;
    std::set<std::string> live;
    for (int c = 0; c < commits; ++c) {
        CommitRecord record;
        char hash[41];
        std::snprintf(hash, sizeof hash, "%040x", c + 1);
        record.hash = hash;
        const int author = static_cast<int>(pick(rng, static_cast<std::size_t>(authors)));
        record.author_name = "Dev " + std::to_string(author);
        record.author_email = "dev" + std::to_string(author) + (author % 3 == 0 ? "@team.example" : "@ext.example");
        record.author_time = 1500000000 + c * 100;
        if (c > 0) record.parents.push_back(history.back().hash);
        if (c > 2 && chance(rng, 0.15)) record.parents.push_back(history[pick(rng, history.size() - 1)].hash);

        std::set<std::string> touched;
        const int ops = 1 + static_cast<int>(pick(rng, 3));
        for (int i = 0; i < ops; ++i) {
            const std::string path = "p" + std::to_string(pick(rng, static_cast<std::size_t>(paths)));
            if (touched.contains(path)) continue;
            if (!live.contains(path)) {
                live.insert(path);
                record.changes.push_back({path, ChangeType::Added, {}});
                touched.insert(path);
                continue;
            }
            const int kind = static_cast<int>(pick(rng, 3));
            if (kind == 0) {
                record.changes.push_back({path, ChangeType::Modified, {}});
                touched.insert(path);
            } else if (kind == 1) {
                live.erase(path);
                record.changes.push_back({path, ChangeType::Deleted, {}});
                touched.insert(path);
            } else {
                const std::string target = "p" + std::to_string(pick(rng, static_cast<std::size_t>(paths)));
                if (live.contains(target) || touched.contains(target)) continue;
                live.erase(path);
                live.insert(target);
                record.changes.push_back({target, ChangeType::Renamed, path});
                touched.insert(path);
                touched.insert(target);
            }
        }
        history.push_back(std::move(record));
    }
    return history;
}

AnnotatedCase random_annotated_graph(std::mt19937_64& rng, std::size_t max_nodes) {
    for (;;) {
        const int commits = 1 + static_cast<int>(pick(rng, 30));
        const int authors = 1 + static_cast<int>(pick(rng, 8));
        const int paths = 1 + static_cast<int>(pick(rng, 15));
        AnnotatedCase result;
        result.graph = build_provenance(random_commit_records(rng, commits, authors, paths));
        if (result.graph.node_count() > max_nodes) continue;
        for (const auto& node : result.graph.nodes())
            if (node.kind == NodeKind::Agent && chance(rng, 0.5)) result.membership.team.insert(agent_identity(node));
        annotate_roles(result.graph, result.membership);
        return result;
    }
}

CollabOracle collab_oracle(const ProvGraph& graph) {
    std::vector<const ProvEdge*> contributions;
    for (const auto& edge : graph.edges())
        if (edge.kind == RelationKind::ContributesTo) contributions.push_back(&edge);

    auto role_of = [](const ProvEdge* e) { return e->attributes.at("role"); };
    CollabOracle oracle;
    for (const ProvEdge* t : contributions) {
        if (role_of(t) != kRoleTeam) continue;
        for (const ProvEdge* c : contributions) {
            if (role_of(c) != kRoleContributor || c->target != t->target) continue;
            for (const ProvEdge* e : contributions) {
                if (e->target != t->target) continue;
                oracle.edges.insert(e->id);
                oracle.nodes.insert(e->source);
                oracle.nodes.insert(e->target);
            }
        }
    }
    return oracle;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
            field_started = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(field);
            rows.push_back(row);
            row.clear();
            field.clear();
            field_started = false;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (field_started || !row.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

ProvGraph random_collab_graph(std::mt19937_64& rng, int max_agents, int max_files) {
    static const char* decorations[] = {"", " & co", " <b>", ", \"quoted\"", " naïve"};
    ProvGraph graph;
    const int agents = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(max_agents)));
    const int files = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(max_files)));
    for (int a = 0; a < agents; ++a)
        graph.add_node({"agent:dev" + std::to_string(a) + "@example.org", NodeKind::Agent,
                        "Dev " + std::to_string(a) + decorations[pick(rng, 5)], {}});
    for (int f = 0; f < files; ++f)
        graph.add_node({"file:src/f" + std::to_string(f) + ".c", NodeKind::Entity,
                        "src/f" + std::to_string(f) + decorations[pick(rng, 5)] + ".c", {{"type", "file"}}});
    for (int a = 0; a < agents; ++a) {
        for (int f = 0; f < files; ++f) {
            if (!chance(rng, 0.2)) continue;
            const std::string source = "agent:dev" + std::to_string(a) + "@example.org";
            const std::string target = "file:src/f" + std::to_string(f) + ".c";
            const std::string role(chance(rng, 0.5) ? kRoleTeam : kRoleContributor);
            graph.add_edge({make_edge_id(RelationKind::ContributesTo, source, target), source, target,
                            RelationKind::ContributesTo, {{"role", role}}});
        }
    }
    return graph;
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace provenir::testing
