#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace provenir {

enum class Errc {
    DuplicateId,
    DanglingEndpoint,
    KindMismatch,
    MissingRole,
    UnknownId,
    NotARepository,
    UnknownBranch,
    CorruptObject,
    IoError,
    ParseError,
    UnknownKind,
    UnknownRole,
    AuthError,
    NotFound,
    RateLimited,
    NetworkError,
    NotAnnotated,
    EmptyGraph,
    InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for all library failures; `code()` identifies the
/// contract error named in the public API.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

    /// Set only for RateLimited: unix seconds at which the quota resets.
    std::optional<std::int64_t> reset_at;

private:
    Errc code_;
};

}  // namespace provenir
