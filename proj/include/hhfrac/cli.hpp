#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hhfrac {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedCheck = 1;
inline constexpr int kExitInvalidInput = 2;

struct RunConfig {
    std::string command;         // laws, certificate, testfn-decay, scaling, solve, scan-p, weakcheck
    nlohmann::json parameters = nlohmann::json::object();
    std::string output_path = "out";
    std::uint64_t seed = 7;
};

/// Keys each command accepts, with their defaults.
const nlohmann::json& command_defaults(const std::string& command);
std::vector<std::string> command_names();

/// Reads a flat JSON object from `path`.
nlohmann::json load_config(const std::filesystem::path& path);

/// Runs one command.  Text goes to `out`, diagnostics to `err`; files go to
/// config.output_path.  Returns kExitOk, kExitFailedCheck or kExitInvalidInput.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Header row plus one row per record, written atomically enough for
/// callers: on failure nothing is left at `path`.
void emit_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
              const std::filesystem::path& path);

/// %.17g: enough digits to round-trip a double.
std::string format_real(double v);

}  // namespace hhfrac
