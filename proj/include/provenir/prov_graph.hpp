#pragma once

// PROV-DM labeled property graph: typed nodes (Entity/Activity/Agent), typed
// relations with endpoint-kind constraints, string attributes, append-only.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "provenir/error.hpp"

namespace provenir {

enum class NodeKind { Entity, Activity, Agent };

enum class RelationKind {
    Used,
    WasGeneratedBy,
    WasAssociatedWith,
    WasAttributedTo,
    WasDerivedFrom,
    SpecializationOf,
    WasInformedBy,
    ContributesTo,
};

enum class Direction { In, Out, Both };

using Attributes = std::map<std::string, std::string>;

struct ProvNode {
    std::string id;
    NodeKind kind = NodeKind::Entity;
    std::string label;
    Attributes attributes;

    bool operator==(const ProvNode&) const = default;
};

struct ProvEdge {
    std::string id;
    std::string source;
    std::string target;
    RelationKind kind = RelationKind::Used;
    Attributes attributes;

    bool operator==(const ProvEdge&) const = default;
};

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(RelationKind kind) noexcept;
std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept;
std::optional<RelationKind> parse_relation_kind(std::string_view text) noexcept;

/// Legal (source kind, target kind) pair for a relation.
struct EndpointKinds {
    NodeKind source;
    NodeKind target;
};
EndpointKinds endpoint_kinds(RelationKind kind) noexcept;

/// Relations whose union must stay acyclic.
bool is_dag_relation(RelationKind kind) noexcept;

inline constexpr std::string_view kRoleTeam = "team";
inline constexpr std::string_view kRoleContributor = "contributor";
bool is_valid_role(std::string_view role) noexcept;

/// Deterministic edge id: `<relation>:<source>-><target>`.
std::string make_edge_id(RelationKind kind, std::string_view source, std::string_view target);

struct Violation {
    enum class Type { Cycle, DanglingEndpoint, KindMismatch, MissingRole };
    Type type;
    std::string subject;  // edge id, or comma-joined node ids for cycles
    std::string detail;
};

class ProvGraph {
public:
    ProvGraph() = default;

    const std::string& add_node(ProvNode node);

    /// Checked insert: endpoints must exist, kinds must match the relation and
    /// ContributesTo must carry a valid role.
    const std::string& add_edge(ProvEdge edge);

    /// Stores the edge without endpoint/kind/role checks (duplicate ids are
    /// still rejected). For loaders that defer to validate().
    const std::string& add_edge_unchecked(ProvEdge edge);

    bool has_node(std::string_view id) const;
    bool has_edge(std::string_view id) const;
    const ProvNode& node(std::string_view id) const;
    const ProvEdge& edge(std::string_view id) const;
    const ProvNode* find_node(std::string_view id) const;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Insertion order.
    std::span<const ProvNode> nodes() const noexcept { return nodes_; }
    std::span<const ProvEdge> edges() const noexcept { return edges_; }

    /// Node/edge pointers ordered by id.
    std::vector<const ProvNode*> sorted_nodes() const;
    std::vector<const ProvEdge*> sorted_edges() const;

    /// Adjacent node ids, one per incident edge (multi-edges repeat), sorted.
    std::vector<std::string> neighbors(std::string_view id, Direction direction,
                                       std::optional<RelationKind> filter = std::nullopt) const;
    std::size_t degree(std::string_view id, Direction direction) const;

    /// Incident edges of a node in insertion order.
    std::vector<const ProvEdge*> out_edges(std::string_view id) const;
    std::vector<const ProvEdge*> in_edges(std::string_view id) const;

    std::vector<Violation> validate() const;

    Attributes& metadata() noexcept { return metadata_; }
    const Attributes& metadata() const noexcept { return metadata_; }

    bool operator==(const ProvGraph& other) const;

private:
    std::size_t node_index(std::string_view id) const;

    std::vector<ProvNode> nodes_;
    std::vector<ProvEdge> edges_;
    std::unordered_map<std::string, std::size_t> node_index_;
    std::unordered_map<std::string, std::size_t> edge_index_;
    // Edge indices per node; edges with a missing endpoint are absent here.
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
    Attributes metadata_;
};

}  // namespace provenir
