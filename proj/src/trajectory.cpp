#include "seqcast/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "seqcast/error.hpp"

namespace seqcast {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    if (delimiter == ' ') {
        std::size_t pos = 0;
        while (pos < line.size()) {
            pos = line.find_first_not_of(" \t", pos);
            if (pos == std::string_view::npos) break;
            auto end = line.find_first_of(" \t", pos);
            if (end == std::string_view::npos) end = line.size();
            fields.push_back(line.substr(pos, end - pos));
            pos = end;
        }
        return fields;
    }
    std::size_t start = 0;
    while (true) {
        const auto end = line.find(delimiter, start);
        if (end == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, end - start)));
        start = end + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

// Integer ids in NGSIM exports occasionally carry a trailing ".0".
bool parse_id(std::string_view text, std::int64_t& out) {
    if (parse_number(text, out)) return true;
    double value = 0.0;
    if (!parse_number(text, value) || !std::isfinite(value)) return false;
    if (value != std::floor(value) || std::abs(value) > 9.0e15) return false;
    out = static_cast<std::int64_t>(value);
    return true;
}

// A header row has no numeric cell in any mapped column.
bool looks_like_header(const std::vector<std::string_view>& fields, const IngestConfig& config) {
    double value = 0.0;
    for (auto col : {config.columns.vehicle_id, config.columns.frame_id, config.columns.velocity}) {
        if (parse_number(fields[col], value)) return false;
    }
    return true;
}

struct RowOutcome {
    TrajectoryRecord record;
    std::string error;
};

RowOutcome parse_row(const std::vector<std::string_view>& fields, std::size_t expected_width,
                     const IngestConfig& config) {
    RowOutcome outcome;
    if (fields.size() != expected_width) {
        outcome.error = "expected " + std::to_string(expected_width) + " fields, found " +
                        std::to_string(fields.size());
        return outcome;
    }
    const auto& cols = config.columns;
    double raw_velocity = 0.0;
    if (!parse_id(fields[cols.vehicle_id], outcome.record.vehicle_id)) {
        outcome.error = "non-numeric vehicle id '" + std::string(fields[cols.vehicle_id]) + "'";
    } else if (!parse_id(fields[cols.frame_id], outcome.record.frame_id)) {
        outcome.error = "non-numeric frame id '" + std::string(fields[cols.frame_id]) + "'";
    } else if (!parse_number(fields[cols.velocity], raw_velocity) || !std::isfinite(raw_velocity)) {
        outcome.error = "non-numeric velocity '" + std::string(fields[cols.velocity]) + "'";
    } else {
        outcome.record.velocity = raw_velocity * config.unit_scale;
        if (outcome.record.velocity < 0.0) outcome.error = "negative velocity";
    }
    return outcome;
}

}  // namespace

Trajectory::Trajectory(std::int64_t vehicle_id, double sample_period, std::vector<double> samples)
    : vehicle_id_(vehicle_id), sample_period_(sample_period), samples_(std::move(samples)) {
    if (!(sample_period_ > 0.0) || !std::isfinite(sample_period_)) {
        fail(ErrorCode::InvalidPeriod, "sample period must be positive");
    }
    if (samples_.empty()) fail(ErrorCode::EmptyInput, "trajectory has no samples");
    for (double v : samples_) {
        if (!std::isfinite(v) || v < 0.0) {
            fail(ErrorCode::NonFiniteInput, "trajectory samples must be finite and non-negative");
        }
    }
}

void IngestConfig::validate() const {
    if (!(unit_scale > 0.0) || !std::isfinite(unit_scale)) {
        fail(ErrorCode::InvalidConfig, "unit_scale must be positive");
    }
    if (columns.vehicle_id == columns.frame_id || columns.vehicle_id == columns.velocity ||
        columns.frame_id == columns.velocity) {
        fail(ErrorCode::InvalidConfig, "column indices must be distinct");
    }
    if (max_gap_frames < 1) fail(ErrorCode::InvalidConfig, "max_gap_frames must be at least 1");
}

ParseResult parse_records(std::string_view raw_text, const IngestConfig& config) {
    config.validate();
    const std::size_t min_width =
        std::max({config.columns.vehicle_id, config.columns.frame_id, config.columns.velocity}) + 1;

    ParseResult result;
    std::size_t expected_width = 0;
    bool first_row = true;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= raw_text.size()) {
        auto end = raw_text.find('\n', pos);
        if (end == std::string_view::npos) end = raw_text.size();
        const auto line = raw_text.substr(pos, end - pos);
        pos = end + 1;
        ++line_number;
        if (trim(line).empty()) continue;

        const auto fields = split_fields(line, config.delimiter);
        if (first_row) {
            first_row = false;
            expected_width = fields.size();
            if (expected_width < min_width) {
                fail(ErrorCode::MalformedRow, "line " + std::to_string(line_number) + ": row has " +
                                                  std::to_string(expected_width) +
                                                  " fields but the column map needs " +
                                                  std::to_string(min_width));
            }
            bool is_header = config.header == HeaderMode::Present;
            if (config.header == HeaderMode::Auto) is_header = looks_like_header(fields, config);
            if (is_header) continue;
        }

        auto outcome = parse_row(fields, expected_width, config);
        if (!outcome.error.empty()) {
            if (config.strict) {
                fail(ErrorCode::MalformedRow,
                     "line " + std::to_string(line_number) + ": " + outcome.error);
            }
            result.skipped.push_back({line_number, std::move(outcome.error)});
            continue;
        }
        result.records.push_back(outcome.record);
    }
    if (result.records.empty()) fail(ErrorCode::EmptyInput, "no data rows");
    return result;
}

std::vector<std::int64_t> vehicle_ids(const std::vector<TrajectoryRecord>& records) {
    std::vector<std::int64_t> ids;
    std::unordered_set<std::int64_t> seen;
    for (const auto& r : records) {
        if (seen.insert(r.vehicle_id).second) ids.push_back(r.vehicle_id);
    }
    return ids;
}

std::vector<Trajectory> extract_trajectory(const std::vector<TrajectoryRecord>& records,
                                           std::int64_t vehicle_id, const IngestConfig& config) {
    config.validate();
    std::vector<TrajectoryRecord> own;
    std::copy_if(records.begin(), records.end(), std::back_inserter(own),
                 [&](const TrajectoryRecord& r) { return r.vehicle_id == vehicle_id; });
    if (own.empty()) fail(ErrorCode::UnknownVehicle, "vehicle " + std::to_string(vehicle_id));
    std::stable_sort(own.begin(), own.end(),
                     [](const auto& a, const auto& b) { return a.frame_id < b.frame_id; });

    std::vector<Trajectory> runs;
    std::vector<double> samples{own.front().velocity};
    std::int64_t stride = 0;
    for (std::size_t k = 1; k < own.size(); ++k) {
        const auto step = own[k].frame_id - own[k - 1].frame_id;
        if (step == 0) {
            fail(ErrorCode::MalformedRow, "vehicle " + std::to_string(vehicle_id) +
                                              " repeats frame " + std::to_string(own[k].frame_id));
        }
        const bool breaks = step > config.max_gap_frames || (stride != 0 && step != stride);
        if (breaks) {
            runs.emplace_back(vehicle_id, kFramePeriodSeconds * static_cast<double>(std::max<std::int64_t>(stride, 1)),
                              std::move(samples));
            samples = {own[k].velocity};
            stride = 0;
            continue;
        }
        stride = step;
        samples.push_back(own[k].velocity);
    }
    runs.emplace_back(vehicle_id, kFramePeriodSeconds * static_cast<double>(std::max<std::int64_t>(stride, 1)),
                      std::move(samples));
    return runs;
}

Trajectory resample_uniform(const Trajectory& trajectory, double period) {
    const double base = trajectory.sample_period();
    if (!(period > 0.0) || !std::isfinite(period) || period < base * (1.0 - 1e-9)) {
        fail(ErrorCode::InvalidPeriod, "period must be at least the sample period");
    }
    const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(period / base)));
    std::vector<double> kept;
    for (std::size_t i = 0; i < trajectory.size(); i += stride) kept.push_back(trajectory.samples()[i]);
    return {trajectory.vehicle_id(), base * static_cast<double>(stride), std::move(kept)};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t_seconds,velocity_mps\n";
    char buffer[96];
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const double t = static_cast<double>(i) * trajectory.sample_period();
        std::snprintf(buffer, sizeof buffer, "%.6f,%.6f\n", t, trajectory.samples()[i]);
        out << buffer;
    }
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::ostringstream out;
    write_trajectory_csv(out, trajectory);
    return out.str();
}

Trajectory read_trajectory_csv(std::string_view text, std::int64_t vehicle_id) {
    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_number;
        if (line.empty() || line.front() == '#') continue;
        if (line_number == 1 && line == "t_seconds,velocity_mps") continue;
        const auto fields = split_fields(line, ',');
        double t = 0.0;
        double v = 0.0;
        if (fields.size() != 2 || !parse_number(fields[0], t) || !parse_number(fields[1], v)) {
            fail(ErrorCode::MalformedRow, "line " + std::to_string(line_number) +
                                              ": expected t_seconds,velocity_mps");
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (values.empty()) fail(ErrorCode::EmptyInput, "trajectory file has no samples");
    double period = kFramePeriodSeconds;
    if (times.size() >= 2) period = times[1] - times[0];
    return {vehicle_id, period, std::move(values)};
}

}  // namespace seqcast
