#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace provenir {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs argv[0] (PATH lookup) without a shell, feeding `input` to stdin and
/// capturing stdout/stderr. Throws Error(IoError) if the process cannot start.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::filesystem::path>& cwd = std::nullopt,
                          const std::string& input = {},
                          const std::vector<std::string>& extra_env = {});

}  // namespace provenir
