#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqcast/evaluation.hpp"
#include "seqcast/trajectory.hpp"

namespace seqcast::cli {

/// Raised for configuration mistakes the user must fix; maps to exit 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a subcommand can be configured with. Every default matches the
/// library default of the module it feeds.
struct CliConfig {
    IngestConfig ingest;
    std::optional<std::int64_t> vehicle;
    eval::ExperimentConfig experiment;
    std::vector<eval::Method> methods{eval::Method::NN, eval::Method::FC};
    std::optional<std::string> output_dir;
};

/// Applies one `key = value` setting. Unknown keys and unparsable values
/// raise UsageError.
void apply_setting(CliConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; `#` starts a comment.
void apply_config_text(CliConfig& config, std::string_view text);

/// Keys accepted by apply_setting, in documentation order.
std::span<const std::string_view> config_keys();

std::vector<eval::Method> parse_methods(std::string_view list);

/// Entry point behind the `seqcast` executable. Returns 0 on success, 1 on
/// usage errors and 2 on data or model errors.
int run_cli(std::span<const std::string> args);
int run_cli(int argc, char** argv);

}  // namespace seqcast::cli
