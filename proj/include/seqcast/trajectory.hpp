#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace seqcast {

/// NGSIM recordings are sampled at 10 Hz.
inline constexpr double kFramePeriodSeconds = 0.1;

/// Feet per second to metres per second.
inline constexpr double kFeetToMetres = 0.3048;

struct TrajectoryRecord {
    std::int64_t vehicle_id = 0;
    std::int64_t frame_id = 0;
    double velocity = 0.0;  // m/s after unit conversion

    bool operator==(const TrajectoryRecord&) const = default;
};

/// A uniformly sampled velocity series for one vehicle.
class Trajectory {
public:
    Trajectory(std::int64_t vehicle_id, double sample_period, std::vector<double> samples);

    std::int64_t vehicle_id() const noexcept { return vehicle_id_; }
    double sample_period() const noexcept { return sample_period_; }
    const std::vector<double>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }

    bool operator==(const Trajectory&) const = default;

private:
    std::int64_t vehicle_id_;
    double sample_period_;
    std::vector<double> samples_;
};

enum class HeaderMode { Auto, Present, Absent };

struct ColumnMap {
    std::size_t vehicle_id = 0;
    std::size_t frame_id = 1;
    std::size_t velocity = 11;  // v_Vel in the NGSIM US-101 layout
};

struct IngestConfig {
    ColumnMap columns;
    double unit_scale = kFeetToMetres;
    std::int64_t max_gap_frames = 1;
    char delimiter = ',';  // ' ' splits on runs of whitespace
    HeaderMode header = HeaderMode::Auto;
    bool strict = true;

    /// Throws InvalidConfig when the scale or column map is unusable.
    void validate() const;
};

struct SkippedRow {
    std::size_t line = 0;
    std::string reason;
};

struct ParseResult {
    std::vector<TrajectoryRecord> records;
    std::vector<SkippedRow> skipped;  // only populated in lenient mode
};

ParseResult parse_records(std::string_view raw_text, const IngestConfig& config);

/// Splits one vehicle's records into uniformly sampled runs. A run breaks
/// where the frame step exceeds `max_gap_frames` or departs from the run's
/// established stride.
std::vector<Trajectory> extract_trajectory(const std::vector<TrajectoryRecord>& records,
                                           std::int64_t vehicle_id, const IngestConfig& config);

/// Vehicle ids in first-appearance order.
std::vector<std::int64_t> vehicle_ids(const std::vector<TrajectoryRecord>& records);

Trajectory resample_uniform(const Trajectory& trajectory, double period);

/// `t_seconds,velocity_mps` with six fixed decimals.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
std::string trajectory_csv(const Trajectory& trajectory);

/// Reads the two-column export back. The sample period is taken from the
/// first time step (0.1 s for single-row files).
Trajectory read_trajectory_csv(std::string_view text, std::int64_t vehicle_id = 0);

}  // namespace seqcast
