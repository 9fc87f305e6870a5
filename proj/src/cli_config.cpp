#include <array>
#include <charconv>
#include <string>

#include "seqcast/cli.hpp"
#include "seqcast/error.hpp"

namespace seqcast::cli {

namespace {

constexpr std::array<std::string_view, 34> kKeys = {
    "output_dir",
    "ingest.delimiter",
    "ingest.unit_scale",
    "ingest.max_gap_frames",
    "ingest.header",
    "ingest.strict",
    "ingest.vehicle_column",
    "ingest.frame_column",
    "ingest.velocity_column",
    "ingest.vehicle",
    "nn.v_min",
    "nn.v_max",
    "nn.spacing",
    "nn.fallback",
    "fc.set_count",
    "fc.sigma",
    "fc.quad_step",
    "fc.clamp_out_of_domain",
    "lstm.epochs",
    "lstm.hidden_size",
    "lstm.learning_rate",
    "lstm.grad_clip_norm",
    "lstm.adam_beta1",
    "lstm.adam_beta2",
    "lstm.adam_epsilon",
    "lstm.seed",
    "lstm.standardize",
    "experiment.rounds",
    "experiment.horizon",
    "experiment.schedule",
    "experiment.compare_schedule",
    "experiment.closed_loop_horizon",
    "experiment.origin_stride",
    "experiment.methods",
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw UsageError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

double to_real(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
    return out;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view value) {
    Int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value);
}

// Library parsers report InvalidConfig; in a config file that is a usage error.
template <typename F>
auto translate(std::string_view key, std::string_view value, F&& parse) {
    try {
        return parse();
    } catch (const Error&) {
        bad_value(key, value);
    }
}

}  // namespace

std::span<const std::string_view> config_keys() { return kKeys; }

std::vector<eval::Method> parse_methods(std::string_view list) {
    std::vector<eval::Method> methods;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        const auto name = trim(list.substr(start, end - start));
        methods.push_back(translate("methods", name, [&] { return eval::parse_method(name); }));
        start = end + 1;
    }
    return methods;
}

void apply_setting(CliConfig& config, std::string_view key, std::string_view raw) {
    const auto value = trim(raw);
    auto& in = config.ingest;
    auto& ex = config.experiment;
    auto& l = ex.lstm;

    if (key == "output_dir") {
        if (value.empty()) bad_value(key, value);
        config.output_dir = std::string(value);
    } else if (key == "ingest.delimiter") {
        if (value == "comma") in.delimiter = ',';
        else if (value == "tab") in.delimiter = '\t';
        else if (value == "space" || value == "whitespace") in.delimiter = ' ';
        else if (value.size() == 1) in.delimiter = value.front();
        else bad_value(key, value);
    } else if (key == "ingest.unit_scale") {
        in.unit_scale = to_real(key, value);
    } else if (key == "ingest.max_gap_frames") {
        in.max_gap_frames = to_integer<std::int64_t>(key, value);
    } else if (key == "ingest.header") {
        if (value == "auto") in.header = HeaderMode::Auto;
        else if (value == "yes") in.header = HeaderMode::Present;
        else if (value == "no") in.header = HeaderMode::Absent;
        else bad_value(key, value);
    } else if (key == "ingest.strict") {
        in.strict = to_bool(key, value);
    } else if (key == "ingest.vehicle_column") {
        in.columns.vehicle_id = to_integer<std::size_t>(key, value);
    } else if (key == "ingest.frame_column") {
        in.columns.frame_id = to_integer<std::size_t>(key, value);
    } else if (key == "ingest.velocity_column") {
        in.columns.velocity = to_integer<std::size_t>(key, value);
    } else if (key == "ingest.vehicle") {
        config.vehicle = to_integer<std::int64_t>(key, value);
    } else if (key == "nn.v_min") {
        ex.nn.v_min = to_real(key, value);
    } else if (key == "nn.v_max") {
        if (value == "auto") ex.nn.v_max.reset();
        else ex.nn.v_max = to_real(key, value);
    } else if (key == "nn.spacing") {
        ex.nn.spacing = to_real(key, value);
    } else if (key == "nn.fallback") {
        ex.nn.fallback = translate(key, value, [&] { return nn::parse_fallback(value); });
    } else if (key == "fc.set_count") {
        if (value == "auto") ex.fc.set_count.reset();
        else ex.fc.set_count = to_integer<std::size_t>(key, value);
    } else if (key == "fc.sigma") {
        ex.fc.sigma = to_real(key, value);
    } else if (key == "fc.quad_step") {
        ex.fc.quad_step = to_real(key, value);
    } else if (key == "fc.clamp_out_of_domain") {
        ex.fc.clamp_out_of_domain = to_bool(key, value);
    } else if (key == "lstm.epochs") {
        l.epochs = to_integer<int>(key, value);
    } else if (key == "lstm.hidden_size") {
        l.hidden_size = to_integer<Eigen::Index>(key, value);
    } else if (key == "lstm.learning_rate") {
        l.learning_rate = to_real(key, value);
    } else if (key == "lstm.grad_clip_norm") {
        l.grad_clip_norm = to_real(key, value);
    } else if (key == "lstm.adam_beta1") {
        l.adam_beta1 = to_real(key, value);
    } else if (key == "lstm.adam_beta2") {
        l.adam_beta2 = to_real(key, value);
    } else if (key == "lstm.adam_epsilon") {
        l.adam_epsilon = to_real(key, value);
    } else if (key == "lstm.seed") {
        l.seed = to_integer<std::uint64_t>(key, value);
    } else if (key == "lstm.standardize") {
        l.standardize = to_bool(key, value);
    } else if (key == "experiment.rounds") {
        ex.rounds = to_integer<int>(key, value);
    } else if (key == "experiment.horizon") {
        ex.horizon = to_integer<int>(key, value);
    } else if (key == "experiment.schedule") {
        ex.schedule = translate(key, value, [&] { return eval::parse_schedule(value); });
    } else if (key == "experiment.compare_schedule") {
        ex.compare_schedule = translate(key, value, [&] { return eval::parse_schedule(value); });
    } else if (key == "experiment.closed_loop_horizon") {
        ex.closed_loop_horizon = to_integer<int>(key, value);
    } else if (key == "experiment.origin_stride") {
        ex.origin_stride = to_integer<std::size_t>(key, value);
    } else if (key == "experiment.methods") {
        config.methods = parse_methods(value);
    } else {
        throw UsageError("unknown configuration key '" + std::string(key) + "'");
    }
}

void apply_config_text(CliConfig& config, std::string_view text) {
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_number) + ": expected 'key = value'");
        }
        try {
            apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const UsageError& e) {
            throw UsageError("config line " + std::to_string(line_number) + ": " + e.what());
        }
    }
}

}  // namespace seqcast::cli
