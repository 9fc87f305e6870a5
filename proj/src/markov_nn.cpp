#include "seqcast/markov_nn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "seqcast/error.hpp"

namespace seqcast::nn {

namespace {

void require_finite(double y) {
    if (!std::isfinite(y)) fail(ErrorCode::NonFiniteInput, "value is not finite");
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

}  // namespace

StateSpace::StateSpace(std::vector<double> grid) : grid_(std::move(grid)) {
    if (grid_.size() < 2) fail(ErrorCode::InvalidRange, "state space needs at least two states");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i])) fail(ErrorCode::InvalidRange, "grid values must be finite");
        if (i > 0 && !(grid_[i] > grid_[i - 1])) {
            fail(ErrorCode::InvalidRange, "grid must be strictly increasing");
        }
    }
}

StateSpace build_state_space(double v_min, double v_max, double spacing) {
    if (!std::isfinite(v_min) || !std::isfinite(v_max) || !(v_max > v_min)) {
        fail(ErrorCode::InvalidRange, "v_max must exceed v_min");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        fail(ErrorCode::InvalidRange, "spacing must be positive");
    }
    // The relative slack keeps (v_max - v_min) / spacing = 3.0000000001 from adding a state.
    const double intervals = std::ceil((v_max - v_min) / spacing - 1e-9);
    const auto points = static_cast<std::size_t>(std::max(1.0, intervals)) + 1;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = v_min + spacing * static_cast<double>(i);
    return StateSpace(std::move(grid));
}

std::size_t quantize(double y, const StateSpace& space) {
    require_finite(y);
    const auto& grid = space.grid();
    const auto upper = std::lower_bound(grid.begin(), grid.end(), y);
    if (upper == grid.begin()) return 0;
    if (upper == grid.end()) return grid.size() - 1;
    const auto hi = static_cast<std::size_t>(upper - grid.begin());
    const auto lo = hi - 1;
    return (y - grid[lo] <= grid[hi] - y) ? lo : hi;
}

std::string_view to_string(Fallback fallback) {
    switch (fallback) {
        case Fallback::ZeroRow: return "zero";
        case Fallback::Hold: return "hold";
        case Fallback::Uniform: return "uniform";
    }
    return "zero";
}

Fallback parse_fallback(std::string_view name) {
    if (name == "zero") return Fallback::ZeroRow;
    if (name == "hold") return Fallback::Hold;
    if (name == "uniform") return Fallback::Uniform;
    fail(ErrorCode::InvalidConfig, "unknown fallback '" + std::string(name) + "'");
}

TransitionModel::TransitionModel(StateSpace space, Fallback fallback)
    : space_(std::move(space)), fallback_(fallback), counts_(space_.size() * space_.size(), 0) {}

std::uint64_t TransitionModel::row_total(std::size_t from) const {
    const auto begin = counts_.begin() + static_cast<std::ptrdiff_t>(from * size());
    return std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(size()), std::uint64_t{0});
}

std::uint64_t TransitionModel::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

void TransitionModel::fit(std::span<const double> samples) {
    if (samples.size() < 2) fail(ErrorCode::InsufficientData, "fitting needs at least two samples");
    std::vector<std::size_t> states(samples.size());
    std::transform(samples.begin(), samples.end(), states.begin(),
                   [this](double y) { return quantize(y, space_); });
    for (std::size_t t = 0; t + 1 < states.size(); ++t) ++counts_[states[t] * size() + states[t + 1]];
}

void TransitionModel::add_transition(double from, double to) {
    const auto i = quantize(from, space_);
    const auto j = quantize(to, space_);
    ++counts_[i * size() + j];
}

void TransitionModel::add_count(std::size_t from, std::size_t to, std::uint64_t amount) {
    counts_.at(from * size() + to) += amount;
}

std::vector<double> TransitionModel::transition_row(std::size_t from) const {
    const std::size_t m = size();
    std::vector<double> row(m, 0.0);
    const auto n_io = row_total(from);
    if (n_io > 0) {
        for (std::size_t j = 0; j < m; ++j) {
            row[j] = static_cast<double>(counts_[from * m + j]) / static_cast<double>(n_io);
        }
        return row;
    }
    switch (fallback_) {
        case Fallback::ZeroRow: break;
        case Fallback::Hold: row.at(from) = 1.0; break;
        case Fallback::Uniform: std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(m)); break;
    }
    return row;
}

Matrix TransitionModel::transition_matrix() const {
    const auto m = static_cast<Eigen::Index>(size());
    Matrix p(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto row = transition_row(static_cast<std::size_t>(i));
        for (Eigen::Index j = 0; j < m; ++j) p(i, j) = row[static_cast<std::size_t>(j)];
    }
    return p;
}

double TransitionModel::predict_argmax(double current) const {
    const auto row = transition_row(quantize(current, space_));
    const auto best = std::max_element(row.begin(), row.end());  // first maximum wins ties
    if (*best <= 0.0) return 0.0;
    return space_.value(static_cast<std::size_t>(best - row.begin()));
}

double TransitionModel::predict_expectation(double current) const {
    const auto row = transition_row(quantize(current, space_));
    return std::inner_product(row.begin(), row.end(), space_.grid().begin(), 0.0);
}

std::vector<double> TransitionModel::predict_multistep(double current, int steps) const {
    if (steps < 1) fail(ErrorCode::InvalidHorizon, "horizon must be at least 1");
    const std::size_t m = size();
    std::vector<std::vector<double>> rows(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = transition_row(i);

    // Row `start` of P^n, advanced one product at a time. The one-step value
    // is bit-identical to predict_expectation.
    std::vector<double> distribution(m, 0.0);
    distribution[quantize(current, space_)] = 1.0;
    std::vector<double> next(m);
    std::vector<double> forecasts;
    forecasts.reserve(static_cast<std::size_t>(steps));
    for (int step = 0; step < steps; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (distribution[i] == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) next[j] += distribution[i] * rows[i][j];
        }
        distribution.swap(next);
        forecasts.push_back(std::inner_product(distribution.begin(), distribution.end(), space_.grid().begin(), 0.0));
    }
    return forecasts;
}

void write_counts_csv(std::ostream& out, const TransitionModel& model) {
    char buffer[64];
    for (std::size_t i = 0; i < model.size(); ++i) {
        std::snprintf(buffer, sizeof buffer, "%.17g", model.state_space().value(i));
        out << "# x_" << (i + 1) << '=' << buffer << '\n';
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        for (std::size_t j = 0; j < model.size(); ++j) {
            if (j > 0) out << ',';
            out << model.count(i, j);
        }
        out << '\n';
    }
}

std::string counts_csv(const TransitionModel& model) {
    std::ostringstream out;
    write_counts_csv(out, model);
    return out.str();
}

TransitionModel read_counts_csv(std::string_view text, Fallback fallback) {
    std::vector<double> grid;
    std::vector<std::vector<std::uint64_t>> rows;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_number;
        if (line.empty()) continue;
        const auto where = "line " + std::to_string(line_number);
        if (line.front() == '#') {
            const auto eq = line.find('=');
            const auto key = trim(line.substr(1, eq == std::string_view::npos ? 0 : eq - 1));
            if (eq == std::string_view::npos || key != "x_" + std::to_string(grid.size() + 1)) {
                fail(ErrorCode::Format, where + ": expected '# x_" + std::to_string(grid.size() + 1) + "=<value>'");
            }
            const auto value_text = trim(line.substr(eq + 1));
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
            if (ec != std::errc() || ptr != value_text.data() + value_text.size()) {
                fail(ErrorCode::Format, where + ": bad grid value");
            }
            grid.push_back(value);
            continue;
        }
        std::vector<std::uint64_t> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            auto comma = line.find(',', start);
            if (comma == std::string_view::npos) comma = line.size();
            const auto cell = trim(line.substr(start, comma - start));
            std::uint64_t value = 0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
                fail(ErrorCode::Format, where + ": counts must be non-negative integers");
            }
            row.push_back(value);
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    if (grid.size() < 2) fail(ErrorCode::Format, "missing grid header");
    if (rows.size() != grid.size()) fail(ErrorCode::Format, "count matrix must have one row per state");
    TransitionModel model(StateSpace(std::move(grid)), fallback);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != model.size()) fail(ErrorCode::Format, "count matrix must be square");
        for (std::size_t j = 0; j < rows[i].size(); ++j) model.add_count(i, j, rows[i][j]);
    }
    return model;
}

}  // namespace seqcast::nn
