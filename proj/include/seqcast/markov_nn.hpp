#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqcast/matrix.hpp"
#include "seqcast/trajectory.hpp"

namespace seqcast::nn {

/// Default state spacing in m/s; matches the fuzzy-set center spacing.
inline constexpr double kDefaultSpacing = 2.5;

/// Ordered discrete velocity grid x_1 < x_2 < ... < x_M.
class StateSpace {
public:
    explicit StateSpace(std::vector<double> grid);

    const std::vector<double>& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    double value(std::size_t index) const { return grid_.at(index); }

    bool operator==(const StateSpace&) const = default;

private:
    std::vector<double> grid_;
};

/// v_min, v_min + spacing, ... up to the first point at or above v_max.
StateSpace build_state_space(double v_min, double v_max, double spacing = kDefaultSpacing);

/// Nearest grid index; equidistant values map to the lower index.
std::size_t quantize(double y, const StateSpace& space);

/// What an unvisited state's probability row looks like.
enum class Fallback { ZeroRow, Hold, Uniform };

std::string_view to_string(Fallback fallback);
Fallback parse_fallback(std::string_view name);

/// First-order Markov chain over a StateSpace with exact integer counts.
/// Probabilities are derived on demand; nothing is renormalized in place.
class TransitionModel {
public:
    explicit TransitionModel(StateSpace space, Fallback fallback = Fallback::ZeroRow);

    const StateSpace& state_space() const noexcept { return space_; }
    Fallback fallback() const noexcept { return fallback_; }
    std::size_t size() const noexcept { return space_.size(); }

    std::uint64_t count(std::size_t from, std::size_t to) const { return counts_.at(from * size() + to); }
    std::uint64_t row_total(std::size_t from) const;
    std::uint64_t total() const;

    /// Accumulates one count per consecutive pair. Counts persist across calls.
    void fit(std::span<const double> samples);
    void fit(const Trajectory& trajectory) { fit(trajectory.samples()); }
    void add_transition(double from, double to);
    void add_count(std::size_t from, std::size_t to, std::uint64_t amount = 1);

    Matrix transition_matrix() const;
    std::vector<double> transition_row(std::size_t from) const;

    double predict_argmax(double current) const;
    double predict_expectation(double current) const;
    /// Step-m forecast is the expectation under the m-fold matrix product.
    std::vector<double> predict_multistep(double current, int steps) const;

private:
    StateSpace space_;
    Fallback fallback_;
    std::vector<std::uint64_t> counts_;
};

/// Grid as `# x_i=<value>` comment lines, then the count matrix row-major.
void write_counts_csv(std::ostream& out, const TransitionModel& model);
std::string counts_csv(const TransitionModel& model);
TransitionModel read_counts_csv(std::string_view text, Fallback fallback = Fallback::ZeroRow);

}  // namespace seqcast::nn
