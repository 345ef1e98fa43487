#include "provenir/prov_graph.hpp"

#include <algorithm>
#include <array>

namespace provenir {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::DanglingEndpoint: return "DanglingEndpoint";
        case Errc::KindMismatch: return "KindMismatch";
        case Errc::MissingRole: return "MissingRole";
        case Errc::UnknownId: return "UnknownId";
        case Errc::NotARepository: return "NotARepository";
        case Errc::UnknownBranch: return "UnknownBranch";
        case Errc::CorruptObject: return "CorruptObject";
        case Errc::IoError: return "IoError";
        case Errc::ParseError: return "ParseError";
        case Errc::UnknownKind: return "UnknownKind";
        case Errc::UnknownRole: return "UnknownRole";
        case Errc::AuthError: return "AuthError";
        case Errc::NotFound: return "NotFound";
        case Errc::RateLimited: return "RateLimited";
        case Errc::NetworkError: return "NetworkError";
        case Errc::NotAnnotated: return "NotAnnotated";
        case Errc::EmptyGraph: return "EmptyGraph";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

constexpr std::array<std::string_view, 3> kNodeKindNames = {"Entity", "Activity", "Agent"};
constexpr std::array<std::string_view, 8> kRelationNames = {
    "used",           "wasGeneratedBy",   "wasAssociatedWith", "wasAttributedTo",
    "wasDerivedFrom", "specializationOf", "wasInformedBy",     "contributesTo",
};

}  // namespace

std::string_view to_string(NodeKind kind) noexcept {
    return kNodeKindNames[static_cast<std::size_t>(kind)];
}

std::string_view to_string(RelationKind kind) noexcept {
    return kRelationNames[static_cast<std::size_t>(kind)];
}

std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kNodeKindNames.size(); ++i)
        if (kNodeKindNames[i] == text) return static_cast<NodeKind>(i);
    return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kRelationNames.size(); ++i)
        if (kRelationNames[i] == text) return static_cast<RelationKind>(i);
    return std::nullopt;
}

EndpointKinds endpoint_kinds(RelationKind kind) noexcept {
    using enum NodeKind;
    switch (kind) {
        case RelationKind::Used: return {Activity, Entity};
        case RelationKind::WasGeneratedBy: return {Entity, Activity};
        case RelationKind::WasAssociatedWith: return {Activity, Agent};
        case RelationKind::WasAttributedTo: return {Entity, Agent};
        case RelationKind::WasDerivedFrom: return {Entity, Entity};
        case RelationKind::SpecializationOf: return {Entity, Entity};
        case RelationKind::WasInformedBy: return {Activity, Activity};
        case RelationKind::ContributesTo: return {Agent, Entity};
    }
    return {Entity, Entity};
}

bool is_dag_relation(RelationKind kind) noexcept {
    switch (kind) {
        case RelationKind::Used:
        case RelationKind::WasGeneratedBy:
        case RelationKind::WasDerivedFrom:
        case RelationKind::WasInformedBy:
        case RelationKind::SpecializationOf:
            return true;
        default:
            return false;
    }
}

bool is_valid_role(std::string_view role) noexcept {
    return role == kRoleTeam || role == kRoleContributor;
}

std::string make_edge_id(RelationKind kind, std::string_view source, std::string_view target) {
    std::string id(to_string(kind));
    id.reserve(id.size() + source.size() + target.size() + 3);
    id += ':';
    id += source;
    id += "->";
    id += target;
    return id;
}

const std::string& ProvGraph::add_node(ProvNode node) {
    if (node_index_.contains(node.id)) throw Error(Errc::DuplicateId, "node '" + node.id + "'");
    const std::size_t index = nodes_.size();
    node_index_.emplace(node.id, index);
    nodes_.push_back(std::move(node));
    out_.emplace_back();
    in_.emplace_back();
    return nodes_.back().id;
}

const std::string& ProvGraph::add_edge(ProvEdge edge) {
    const ProvNode* source = find_node(edge.source);
    const ProvNode* target = find_node(edge.target);
    if (source == nullptr || target == nullptr) {
        throw Error(Errc::DanglingEndpoint,
                    "edge '" + edge.id + "' references missing node '" +
                        (source == nullptr ? edge.source : edge.target) + "'");
    }
    const auto expected = endpoint_kinds(edge.kind);
    if (source->kind != expected.source || target->kind != expected.target) {
        throw Error(Errc::KindMismatch, "edge '" + edge.id + "': " + std::string(to_string(edge.kind)) +
                                            " cannot connect " + std::string(to_string(source->kind)) +
                                            " to " + std::string(to_string(target->kind)));
    }
    if (edge.kind == RelationKind::ContributesTo) {
        auto role = edge.attributes.find("role");
        if (role == edge.attributes.end() || !is_valid_role(role->second))
            throw Error(Errc::MissingRole, "edge '" + edge.id + "' needs role team|contributor");
    }
    return add_edge_unchecked(std::move(edge));
}

const std::string& ProvGraph::add_edge_unchecked(ProvEdge edge) {
    if (edge_index_.contains(edge.id)) throw Error(Errc::DuplicateId, "edge '" + edge.id + "'");
    const std::size_t index = edges_.size();
    auto source = node_index_.find(edge.source);
    auto target = node_index_.find(edge.target);
    if (source != node_index_.end() && target != node_index_.end()) {
        out_[source->second].push_back(index);
        in_[target->second].push_back(index);
    }
    edge_index_.emplace(edge.id, index);
    edges_.push_back(std::move(edge));
    return edges_.back().id;
}

bool ProvGraph::has_node(std::string_view id) const { return find_node(id) != nullptr; }

bool ProvGraph::has_edge(std::string_view id) const {
    return edge_index_.contains(std::string(id));
}

const ProvNode* ProvGraph::find_node(std::string_view id) const {
    auto it = node_index_.find(std::string(id));
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

std::size_t ProvGraph::node_index(std::string_view id) const {
    auto it = node_index_.find(std::string(id));
    if (it == node_index_.end()) throw Error(Errc::UnknownId, "node '" + std::string(id) + "'");
    return it->second;
}

const ProvNode& ProvGraph::node(std::string_view id) const { return nodes_[node_index(id)]; }

const ProvEdge& ProvGraph::edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end()) throw Error(Errc::UnknownId, "edge '" + std::string(id) + "'");
    return edges_[it->second];
}

std::vector<const ProvNode*> ProvGraph::sorted_nodes() const {
    std::vector<const ProvNode*> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(&n);
    std::sort(out.begin(), out.end(), [](const ProvNode* a, const ProvNode* b) { return a->id < b->id; });
    return out;
}

std::vector<const ProvEdge*> ProvGraph::sorted_edges() const {
    std::vector<const ProvEdge*> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.push_back(&e);
    std::sort(out.begin(), out.end(), [](const ProvEdge* a, const ProvEdge* b) { return a->id < b->id; });
    return out;
}

std::vector<std::string> ProvGraph::neighbors(std::string_view id, Direction direction,
                                              std::optional<RelationKind> filter) const {
    const std::size_t index = node_index(id);
    std::vector<std::string> result;
    auto matches = [&](const ProvEdge& e) { return !filter || e.kind == *filter; };
    if (direction != Direction::In)
        for (std::size_t e : out_[index])
            if (matches(edges_[e])) result.push_back(edges_[e].target);
    if (direction != Direction::Out)
        for (std::size_t e : in_[index])
            if (matches(edges_[e])) result.push_back(edges_[e].source);
    std::sort(result.begin(), result.end());
    return result;
}

std::size_t ProvGraph::degree(std::string_view id, Direction direction) const {
    const std::size_t index = node_index(id);
    switch (direction) {
        case Direction::In: return in_[index].size();
        case Direction::Out: return out_[index].size();
        case Direction::Both: return in_[index].size() + out_[index].size();
    }
    return 0;
}

std::vector<const ProvEdge*> ProvGraph::out_edges(std::string_view id) const {
    std::vector<const ProvEdge*> result;
    for (std::size_t e : out_[node_index(id)]) result.push_back(&edges_[e]);
    return result;
}

std::vector<const ProvEdge*> ProvGraph::in_edges(std::string_view id) const {
    std::vector<const ProvEdge*> result;
    for (std::size_t e : in_[node_index(id)]) result.push_back(&edges_[e]);
    return result;
}

std::vector<Violation> ProvGraph::validate() const {
    std::vector<Violation> violations;

    for (const auto& edge : edges_) {
        const ProvNode* source = find_node(edge.source);
        const ProvNode* target = find_node(edge.target);
        if (source == nullptr || target == nullptr) {
            violations.push_back({Violation::Type::DanglingEndpoint, edge.id,
                                  "missing node '" + (source == nullptr ? edge.source : edge.target) + "'"});
            continue;
        }
        const auto expected = endpoint_kinds(edge.kind);
        if (source->kind != expected.source || target->kind != expected.target) {
            violations.push_back({Violation::Type::KindMismatch, edge.id,
                                  std::string(to_string(edge.kind)) + " from " +
                                      std::string(to_string(source->kind)) + " to " +
                                      std::string(to_string(target->kind))});
        }
        if (edge.kind == RelationKind::ContributesTo) {
            auto role = edge.attributes.find("role");
            if (role == edge.attributes.end() || !is_valid_role(role->second))
                violations.push_back({Violation::Type::MissingRole, edge.id, "role must be team|contributor"});
        }
    }

    // Iterative Tarjan over the DAG-constrained relations; every SCC with more
    // than one node, or a self-loop, is one cycle violation.
    const std::size_t n = nodes_.size();
    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> order(n, kUnvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0;

    auto dag_successors = [&](std::size_t v) {
        std::vector<std::size_t> succ;
        for (std::size_t e : out_[v])
            if (is_dag_relation(edges_[e].kind)) succ.push_back(node_index_.at(edges_[e].target));
        return succ;
    };

    struct Frame {
        std::size_t node;
        std::vector<std::size_t> successors;
        std::size_t next = 0;
    };

    for (std::size_t root = 0; root < n; ++root) {
        if (order[root] != kUnvisited) continue;
        std::vector<Frame> call_stack;
        call_stack.push_back({root, dag_successors(root)});
        order[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            if (frame.next < frame.successors.size()) {
                const std::size_t w = frame.successors[frame.next++];
                if (order[w] == kUnvisited) {
                    order[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call_stack.push_back({w, dag_successors(w)});
                } else if (on_stack[w]) {
                    low[frame.node] = std::min(low[frame.node], order[w]);
                }
                continue;
            }
            const std::size_t v = frame.node;
            bool self_loop = std::find(frame.successors.begin(), frame.successors.end(), v) !=
                             frame.successors.end();
            call_stack.pop_back();
            if (!call_stack.empty())
                low[call_stack.back().node] = std::min(low[call_stack.back().node], low[v]);
            if (low[v] != order[v]) continue;
            std::vector<std::string> component;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                component.push_back(nodes_[w].id);
            } while (w != v);
            if (component.size() > 1 || self_loop) {
                std::sort(component.begin(), component.end());
                std::string subject;
                for (const auto& id : component) {
                    if (!subject.empty()) subject += ',';
                    subject += id;
                }
                violations.push_back({Violation::Type::Cycle, subject,
                                      "cycle over " + std::to_string(component.size()) + " node(s)"});
            }
        }
    }
    return violations;
}

bool ProvGraph::operator==(const ProvGraph& other) const {
    if (metadata_ != other.metadata_ || nodes_.size() != other.nodes_.size() ||
        edges_.size() != other.edges_.size())
        return false;
    auto a = sorted_nodes(), b = other.sorted_nodes();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(*a[i] == *b[i])) return false;
    auto c = sorted_edges(), d = other.sorted_edges();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!(*c[i] == *d[i])) return false;
    return true;
}

}  // namespace provenir
