#pragma once

// Organization membership from a GitHub-compatible forge API:
//   GET {base}/orgs/{org}/members?per_page=100
// following `Link: <...>; rel="next"` until exhausted.

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "provenir/roles.hpp"

namespace provenir {

struct ForgeConfig {
    std::string base_url = "https://api.github.com";
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    std::chrono::seconds timeout{30};
};

/// URL of the `rel="next"` target in an RFC-5988 Link header, if any.
std::optional<std::string> next_link(std::string_view link_header);

/// The token is sent only in the Authorization header and never logged.
Membership fetch_membership_forge(std::string_view org, std::string_view token, const ForgeConfig& config = {});

}  // namespace provenir
