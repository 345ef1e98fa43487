#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "provenir/prov_graph.hpp"

namespace provenir {

enum class MembershipSource { File, Forge };

struct Membership {
    std::set<std::string> team;  // canonical identities
    MembershipSource source = MembershipSource::File;
    std::optional<std::string> fetched_at;  // ISO-8601 UTC
    std::vector<std::string> warnings;

    bool contains(std::string_view identity) const { return team.contains(std::string(identity)); }
};

/// Agent identity -> forge login. Identities absent from the map are matched
/// verbatim.
using IdentityBridge = std::map<std::string, std::string>;

/// One identity per line; blank lines and `#` comments are skipped; entries are
/// trimmed and lowercased. An empty result is valid but carries a warning.
Membership load_membership_file(const std::filesystem::path& path);
Membership parse_membership(std::string_view text);

/// JSON snapshot {source, fetched_at, team[]} of a fetched membership.
void save_membership_snapshot(const Membership& membership, const std::filesystem::path& path);
Membership load_membership_snapshot(const std::filesystem::path& path);

std::string_view role_for(const Membership& membership, std::string_view agent_identity,
                          const IdentityBridge* bridge = nullptr);

/// Identity of an agent node: its `identity` attribute, else the id without
/// the `agent:` prefix.
std::string agent_identity(const ProvNode& agent);

/// Adds one ContributesTo edge per (agent, file) pair for which the agent is
/// attributed with at least one revision of the file. Idempotent; returns the
/// number of edges added.
std::size_t annotate_roles(ProvGraph& graph, const Membership& membership, const IdentityBridge* bridge = nullptr);

}  // namespace provenir
