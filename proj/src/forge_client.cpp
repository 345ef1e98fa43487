#include "provenir/forge_client.hpp"

#include <cctype>
#include <ctime>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace provenir {

namespace {

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string target;  // /path?query
};

Url split_url(std::string_view url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) throw Error(Errc::InvalidArgument, "bad URL '" + std::string(url) + "'");
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string_view::npos) return {std::string(url), "/"};
    return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

std::string now_iso_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string lower(std::string text) {
    for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return text;
}

[[noreturn]] void raise_for_status(const httplib::Response& response, std::string_view org) {
    const std::string where = "org '" + std::string(org) + "'";
    const bool quota_exhausted = response.get_header_value("X-RateLimit-Remaining") == "0";
    if (response.status == 429 || (response.status == 403 && quota_exhausted)) {
        Error error(Errc::RateLimited, where + ": API rate limit exceeded");
        const std::string reset = response.get_header_value("X-RateLimit-Reset");
        if (!reset.empty()) {
            try {
                error.reset_at = std::stoll(reset);
            } catch (const std::exception&) {
            }
        }
        throw error;
    }
    if (response.status == 401 || response.status == 403)
        throw Error(Errc::AuthError, where + ": HTTP " + std::to_string(response.status));
    if (response.status == 404) throw Error(Errc::NotFound, where + ": HTTP 404");
    throw Error(Errc::NetworkError, where + ": unexpected HTTP " + std::to_string(response.status));
}

}  // namespace

std::optional<std::string> next_link(std::string_view header) {
    std::size_t pos = 0;
    while (pos < header.size()) {
        const std::size_t open = header.find('<', pos);
        if (open == std::string_view::npos) return std::nullopt;
        const std::size_t close = header.find('>', open);
        if (close == std::string_view::npos) return std::nullopt;
        std::size_t end = header.find(',', close);
        if (end == std::string_view::npos) end = header.size();
        const std::string params = lower(std::string(header.substr(close + 1, end - close - 1)));
        if (params.find("rel=\"next\"") != std::string::npos || params.find("rel=next") != std::string::npos)
            return std::string(header.substr(open + 1, close - open - 1));
        pos = end + 1;
    }
    return std::nullopt;
}

Membership fetch_membership_forge(std::string_view org, std::string_view token, const ForgeConfig& config) {
    std::string base = config.base_url;
    while (!base.empty() && base.back() == '/') base.pop_back();
    std::optional<std::string> url = base + "/orgs/" + std::string(org) + "/members?per_page=100";

    httplib::Headers headers{{"Accept", "application/vnd.github+json"}, {"User-Agent", "provenir"}};
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + std::string(token));

    Membership membership;
    membership.source = MembershipSource::Forge;
    while (url) {
        const Url parts = split_url(*url);
        httplib::Client client(parts.origin);
        client.set_connection_timeout(config.timeout);
        client.set_read_timeout(config.timeout);

        httplib::Result result;
        auto backoff = config.initial_backoff;
        for (int attempt = 1;; ++attempt) {
            result = client.Get(parts.target, headers);
            const bool retryable = !result || result->status >= 500;
            if (!retryable || attempt >= config.max_attempts) break;
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        if (!result)
            throw Error(Errc::NetworkError, parts.origin + ": " + httplib::to_string(result.error()));
        if (result->status != 200) raise_for_status(*result, org);

        nlohmann::json page;
        try {
            page = nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::ParseError, std::string("member listing: ") + e.what());
        }
        if (!page.is_array()) throw Error(Errc::ParseError, "member listing must be a JSON array");
        for (const auto& member : page) {
            if (!member.is_object() || !member.contains("login") || !member["login"].is_string())
                throw Error(Errc::ParseError, "member entry without login");
            membership.team.insert(lower(member["login"].get<std::string>()));
        }
        url = next_link(result->get_header_value("Link"));
    }
    membership.fetched_at = now_iso_utc();
    if (membership.team.empty()) membership.warnings.emplace_back("EmptyMembership: organization lists no members");
    return membership;
}

}  // namespace provenir
