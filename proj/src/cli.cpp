#include "provenir/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "provenir/config.hpp"
#include "provenir/drawing.hpp"
#include "provenir/export.hpp"
#include "provenir/forge_client.hpp"
#include "provenir/git_extract.hpp"
#include "provenir/graph_json.hpp"
#include "provenir/query_stats.hpp"
#include "provenir/roles.hpp"

namespace provenir {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    bool quiet = false;

    void progress(const std::string& message) const {
        if (!quiet) err << message << '\n';
    }
};

std::size_t count_kind(const ProvGraph& graph, NodeKind kind) {
    std::size_t n = 0;
    for (const auto& node : graph.nodes()) n += node.kind == kind;
    return n;
}

std::size_t count_files(const ProvGraph& graph) {
    std::size_t n = 0;
    for (const auto& node : graph.nodes()) n += is_file_entity(node);
    return n;
}

// ---- stages ---------------------------------------------------------------

struct MembershipArgs {
    std::string team_file;
    std::string forge_org;
    std::string token_env;
    std::string forge_url = "https://api.github.com";
    std::string membership_json;
};

Membership resolve_membership(const MembershipArgs& args, const Context& ctx) {
    const int sources = !args.team_file.empty() + !args.forge_org.empty() + !args.membership_json.empty();
    if (sources != 1)
        throw UsageError("exactly one of --team-file, --forge-org or --membership-json is required");
    if (!args.team_file.empty()) return load_membership_file(args.team_file);
    if (!args.membership_json.empty()) return load_membership_snapshot(args.membership_json);

    if (args.token_env.empty()) throw UsageError("--forge-org needs --token-env naming the token variable");
    const char* token = std::getenv(args.token_env.c_str());
    if (token == nullptr || *token == '\0')
        throw Error(Errc::AuthError, "environment variable " + args.token_env + " is empty or unset");
    ForgeConfig config;
    config.base_url = args.forge_url;
    ctx.progress("annotate: fetching members of " + args.forge_org);
    return fetch_membership_forge(args.forge_org, token, config);
}

std::size_t annotate(ProvGraph& graph, const Membership& membership, const std::string& bridge_path,
                     const Context& ctx) {
    for (const auto& warning : membership.warnings) ctx.err << "warning: " << warning << '\n';
    IdentityBridge bridge;
    if (!bridge_path.empty()) bridge = load_alias_map(bridge_path);
    const std::size_t added = annotate_roles(graph, membership, bridge.empty() ? nullptr : &bridge);
    graph.metadata()["membership_source"] = membership.source == MembershipSource::Forge ? "forge" : "file";
    graph.metadata()["team_size"] = std::to_string(membership.team.size());
    if (membership.fetched_at) graph.metadata()["membership_fetched_at"] = *membership.fetched_at;
    return added;
}

struct DrawArgs {
    std::string layout = "fr";
    std::string size_by = "entity-in";
    std::uint64_t seed = 42;
    int iterations = 500;
    double width = 1000.0;
    double height = 1000.0;
    double size_min = 4.0;
    double size_max = 40.0;
    std::string palette = "default";
    std::string simd = "auto";
    SvgOptions svg;
};

DrawingGraph draw(const ProvGraph& subgraph, const DrawArgs& args) {
    DrawOptions options;
    options.layout.algorithm = *parse_layout_algorithm(args.layout);
    options.layout.seed = args.seed;
    options.layout.iterations = args.iterations;
    options.layout.width = args.width;
    options.layout.height = args.height;
    if (args.simd == "scalar") options.layout.simd_level = simd::Level::Scalar;
    else if (args.simd == "avx2") options.layout.simd_level = simd::Level::Avx2;
    options.size = {*parse_size_by(args.size_by), args.size_min, args.size_max};
    options.style = *named_palette(args.palette);
    return make_drawing(subgraph, options);
}

struct DrawOutputs {
    std::string svg;
    std::string graphml;
    std::string csv_prefix;
    std::string json;
    std::string dot;
};

void write_drawing(const DrawingGraph& drawing, const ProvGraph& source, const DrawOutputs& outputs,
                   const SvgOptions& svg, const Context& ctx) {
    if (!outputs.svg.empty()) {
        render_svg(drawing, outputs.svg, svg);
        ctx.progress("draw: wrote " + outputs.svg);
    }
    if (!outputs.graphml.empty()) {
        export_graphml(drawing, outputs.graphml);
        ctx.progress("draw: wrote " + outputs.graphml);
    }
    if (!outputs.csv_prefix.empty()) {
        export_csv(drawing, outputs.csv_prefix + ".nodes.csv", outputs.csv_prefix + ".edges.csv");
        ctx.progress("draw: wrote " + outputs.csv_prefix + ".{nodes,edges}.csv");
    }
    if (!outputs.json.empty()) {
        write_text_file(outputs.json, drawing_to_json(drawing, source.metadata()));
        ctx.progress("draw: wrote " + outputs.json);
    }
    if (!outputs.dot.empty()) {
        write_text_file(outputs.dot, export_dot(drawing));
        ctx.progress("draw: wrote " + outputs.dot);
    }
}

StatsFormat parse_format(const std::string& text) {
    if (text == "csv") return StatsFormat::Csv;
    if (text == "json") return StatsFormat::Json;
    return StatsFormat::Table;
}

// ---- option helpers -------------------------------------------------------

void add_draw_options(CLI::App* cmd, DrawArgs& args) {
    cmd->add_option("--layout", args.layout, "Layout algorithm")->check(CLI::IsMember({"fr", "fa2"}));
    cmd->add_option("--size-by", args.size_by, "Node sizing")->check(CLI::IsMember({"entity-in", "agent-out"}));
    cmd->add_option("--seed", args.seed, "Layout seed");
    cmd->add_option("--iters", args.iterations, "Layout iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--frame-width", args.width, "Abstract frame width")->check(CLI::PositiveNumber);
    cmd->add_option("--frame-height", args.height, "Abstract frame height")->check(CLI::PositiveNumber);
    cmd->add_option("--size-min", args.size_min, "Smallest node size");
    cmd->add_option("--size-max", args.size_max, "Largest node size");
    cmd->add_option("--palette", args.palette, "Color palette")
        ->check(CLI::IsMember({"default", "colorbrewer", "cb-safe"}));
    cmd->add_option("--simd", args.simd, "Force-kernel level")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    cmd->add_option("--svg-width", args.svg.width_px, "SVG width in pixels")->check(CLI::PositiveNumber);
    cmd->add_option("--svg-height", args.svg.height_px, "SVG height in pixels")->check(CLI::PositiveNumber);
    cmd->add_option("--edge-opacity", args.svg.edge_opacity, "Edge opacity")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--background", args.svg.background, "SVG background color");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Provenance extraction and collaboration drawings for git repositories", "provenir"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Context ctx{out, err};
    app.add_flag("-q,--quiet", ctx.quiet, "Suppress progress messages");

    // extract
    auto* extract_cmd = app.add_subcommand("extract", "Extract provenance from a git repository");
    std::string repo, branch, out_path, alias_path;
    bool no_renames = false, no_merges = false;
    std::vector<std::string> path_filters;
    extract_cmd->add_option("--repo", repo, "Path to a local clone")->required();
    extract_cmd->add_option("--branch", branch, "Branch to walk (default HEAD)");
    extract_cmd->add_option("--out", out_path, "Output provgraph JSON")->required();
    extract_cmd->add_option("--alias-map", alias_path, "JSON object mapping identities to canonical ones");
    extract_cmd->add_flag("--no-renames", no_renames, "Treat renames as delete + add");
    extract_cmd->add_flag("--no-merges", no_merges, "Skip merge commits");
    extract_cmd->add_option("--path", path_filters, "Only keep paths matching this glob (repeatable)");

    // annotate
    auto* annotate_cmd = app.add_subcommand("annotate", "Add team/contributor roles");
    std::string in_path, bridge_path, save_membership;
    MembershipArgs membership_args;
    annotate_cmd->add_option("--in", in_path, "Input provgraph JSON")->required();
    annotate_cmd->add_option("--out", out_path, "Output provgraph JSON")->required();
    annotate_cmd->add_option("--team-file", membership_args.team_file, "One team identity per line");
    annotate_cmd->add_option("--forge-org", membership_args.forge_org, "Forge organization");
    annotate_cmd->add_option("--token-env", membership_args.token_env, "Name of the env var holding the token");
    annotate_cmd->add_option("--forge-url", membership_args.forge_url, "Forge API base URL");
    annotate_cmd->add_option("--membership-json", membership_args.membership_json, "Saved membership snapshot");
    annotate_cmd->add_option("--alias-map", bridge_path, "JSON object mapping agent identities to forge logins");
    annotate_cmd->add_option("--save-membership", save_membership, "Write the membership snapshot here");

    // query collab
    auto* query_cmd = app.add_subcommand("query", "Run a graph query");
    query_cmd->require_subcommand(1);
    auto* collab_cmd = query_cmd->add_subcommand("collab", "Files changed by both team members and contributors");
    collab_cmd->add_option("--in", in_path, "Annotated provgraph JSON")->required();
    collab_cmd->add_option("--out", out_path, "Output subgraph JSON")->required();

    // draw
    auto* draw_cmd = app.add_subcommand("draw", "Lay out and render a collaboration subgraph");
    DrawArgs draw_args;
    DrawOutputs draw_outputs;
    draw_cmd->add_option("--in", in_path, "Subgraph JSON")->required();
    add_draw_options(draw_cmd, draw_args);
    draw_cmd->add_option("--out-svg", draw_outputs.svg, "SVG output")->required();
    draw_cmd->add_option("--out-graphml", draw_outputs.graphml, "GraphML output");
    draw_cmd->add_option("--out-csv-prefix", draw_outputs.csv_prefix, "Writes PREFIX.nodes.csv and PREFIX.edges.csv");
    draw_cmd->add_option("--out-json", draw_outputs.json, "Drawing as provgraph JSON");
    draw_cmd->add_option("--out-dot", draw_outputs.dot, "DOT output");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Repository statistics");
    std::string sub_path, format = "table";
    stats_cmd->add_option("--in", in_path, "Annotated provgraph JSON")->required();
    stats_cmd->add_option("--sub", sub_path, "Collaboration subgraph JSON (computed when absent)");
    stats_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));

    // pipeline
    auto* pipeline_cmd = app.add_subcommand("pipeline", "extract -> annotate -> query -> draw -> stats");
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> layout_override;
    pipeline_cmd->add_option("--config", config_path, "TOML-style config file");
    pipeline_cmd->add_option("--repo", repo, "Overrides pipeline.repo");
    pipeline_cmd->add_option("--branch", branch, "Overrides pipeline.branch");
    pipeline_cmd->add_option("--out-dir", out_dir, "Overrides pipeline.out_dir");
    pipeline_cmd->add_option("--team-file", membership_args.team_file, "Overrides roles.team_file");
    pipeline_cmd->add_option("--forge-org", membership_args.forge_org, "Overrides roles.forge_org");
    pipeline_cmd->add_option("--token-env", membership_args.token_env, "Overrides roles.token_env");
    pipeline_cmd->add_option("--seed", seed_override, "Overrides layout.seed");
    pipeline_cmd->add_option("--layout", layout_override, "Overrides layout.algorithm")
        ->check(CLI::IsMember({"fr", "fa2"}));
    pipeline_cmd->add_option("--format", format, "Stats output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kExitOk;
        err << app.help();
        return kExitUsage;
    }

    try {
        if (*extract_cmd) {
            ExtractionOptions options;
            options.branch = branch;
            options.detect_renames = !no_renames;
            options.include_merges = !no_merges;
            options.path_filters = path_filters;
            if (!alias_path.empty()) options.aliases = load_alias_map(alias_path);
            ctx.progress("extract: reading history of " + repo);
            const ProvGraph graph = extract(repo, options);
            save_provgraph(graph, out_path);
            ctx.progress("extract: " + std::to_string(count_kind(graph, NodeKind::Activity)) + " activities, " +
                         std::to_string(count_kind(graph, NodeKind::Agent)) + " agents, " +
                         std::to_string(count_files(graph)) + " files -> " + out_path);
        } else if (*annotate_cmd) {
            const Membership membership = resolve_membership(membership_args, ctx);
            if (!save_membership.empty()) save_membership_snapshot(membership, save_membership);
            ProvGraph graph = load_provgraph(in_path);
            const std::size_t added = annotate(graph, membership, bridge_path, ctx);
            save_provgraph(graph, out_path);
            ctx.progress("annotate: " + std::to_string(added) + " contributesTo edges -> " + out_path);
        } else if (*query_cmd) {
            const CollabSubgraph sub = collaboration_query(load_provgraph(in_path));
            save_provgraph(sub.graph, out_path);
            ctx.progress("query: " + std::to_string(sub.node_count()) + " nodes, " +
                         std::to_string(sub.edge_count()) + " edges -> " + out_path);
        } else if (*draw_cmd) {
            const ProvGraph sub = load_provgraph(in_path);
            const DrawingGraph drawing = draw(sub, draw_args);
            write_drawing(drawing, sub, draw_outputs, draw_args.svg, ctx);
        } else if (*stats_cmd) {
            const ProvGraph graph = load_provgraph(in_path);
            const CollabSubgraph sub =
                sub_path.empty() ? collaboration_query(graph) : CollabSubgraph{load_provgraph(sub_path)};
            out << render_stats({compute_stats(graph, sub)}, parse_format(format));
        } else if (*pipeline_cmd) {
            PipelineConfig config;
            if (!config_path.empty())
                config = pipeline_config_from(ConfigFile::load(config_path), fs::path(config_path).parent_path());
            if (!repo.empty()) config.repo = repo;
            if (!branch.empty()) config.extraction.branch = branch;
            if (!out_dir.empty()) config.out_dir = out_dir;
            if (seed_override) config.layout.seed = *seed_override;
            if (layout_override) config.layout.algorithm = *parse_layout_algorithm(*layout_override);
            if (config.repo.empty()) throw UsageError("pipeline needs --repo or pipeline.repo");

            MembershipArgs members = membership_args;
            if (members.team_file.empty() && members.forge_org.empty()) {
                if (config.team_file) members.team_file = config.team_file->string();
                else if (config.forge_org) members.forge_org = *config.forge_org;
            }
            if (members.token_env.empty()) members.token_env = config.token_env;
            members.forge_url = config.forge_url;

            const fs::path dir = config.out_dir;
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());

            if (config.alias_map) config.extraction.aliases = load_alias_map(*config.alias_map);
            ctx.progress("extract: reading history of " + config.repo.string());
            ProvGraph graph = extract(config.repo, config.extraction);
            save_provgraph(graph, dir / "provenance.json");

            const Membership membership = resolve_membership(members, ctx);
            save_membership_snapshot(membership, dir / "membership.json");
            const std::size_t added = annotate(
                graph, membership, config.identity_bridge ? config.identity_bridge->string() : std::string{}, ctx);
            save_provgraph(graph, dir / "annotated.json");
            ctx.progress("annotate: " + std::to_string(added) + " contributesTo edges");

            const CollabSubgraph sub = collaboration_query(graph);
            save_provgraph(sub.graph, dir / "collab.json");
            ctx.progress("query: " + std::to_string(sub.node_count()) + " nodes, " +
                         std::to_string(sub.edge_count()) + " edges");

            // One drawing sized by file in-degree, one by agent out-degree.
            for (const char* size_by : {"entity-in", "agent-out"}) {
                DrawArgs d;
                d.layout = std::string(to_string(config.layout.algorithm));
                d.size_by = size_by;
                d.seed = config.layout.seed;
                d.iterations = config.layout.iterations;
                d.width = config.layout.width;
                d.height = config.layout.height;
                d.size_min = config.size_min;
                d.size_max = config.size_max;
                d.palette = config.palette;
                d.svg = config.svg;
                const std::string stem = (dir / ("drawing-" + std::string(size_by))).string();
                if (sub.node_count() == 0) {
                    ctx.progress("draw: collaboration subgraph is empty, skipping " + std::string(size_by));
                    continue;
                }
                write_drawing(draw(sub.graph, d), sub.graph,
                              {stem + ".svg", stem + ".graphml", stem, stem + ".json", stem + ".dot"}, config.svg, ctx);
            }

            const StatsRow row = compute_stats(graph, sub);
            write_text_file(dir / "stats.csv", render_stats({row}, StatsFormat::Csv));
            write_text_file(dir / "stats.json", render_stats({row}, StatsFormat::Json));
            out << render_stats({row}, parse_format(format));
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace provenir
