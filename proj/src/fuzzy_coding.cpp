#include "seqcast/fuzzy_coding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "seqcast/error.hpp"

namespace seqcast::fc {

namespace {

double center_of(std::size_t index) { return kCenterSpacing * static_cast<double>(index + 1) - 1.25; }

double log_membership(double center, double sigma, double y) {
    const double d = y - center;
    return -(d * d) / (2.0 * sigma * sigma);
}

std::string format_real(double value, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
    return buffer;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

double parse_real(std::string_view text, const std::string& where) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        fail(ErrorCode::Format, where + ": bad number '" + std::string(text) + "'");
    }
    return value;
}

std::vector<double> parse_list(std::string_view text, char separator, const std::string& where) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(separator, start);
        if (end == std::string_view::npos) end = text.size();
        values.push_back(parse_real(text.substr(start, end - start), where));
        start = end + 1;
    }
    return values;
}

}  // namespace

FuzzyPartition::FuzzyPartition(std::size_t set_count, double sigma, double quad_step)
    : FuzzyPartition(set_count, sigma, quad_step,
                     Domain{center_of(0) - kDomainMarginSigmas * sigma,
                            center_of(set_count == 0 ? 0 : set_count - 1) + kDomainMarginSigmas * sigma}) {}

FuzzyPartition::FuzzyPartition(std::size_t set_count, double sigma, double quad_step, Domain domain)
    : sigma_(sigma), quad_step_(quad_step), domain_(domain) {
    if (set_count == 0) fail(ErrorCode::InvalidConfig, "partition needs at least one fuzzy set");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorCode::InvalidConfig, "sigma must be positive");
    if (!(quad_step > 0.0) || !std::isfinite(quad_step)) {
        fail(ErrorCode::InvalidConfig, "quad_step must be positive");
    }
    centers_.resize(set_count);
    for (std::size_t i = 0; i < set_count; ++i) centers_[i] = center_of(i);

    const double margin = kDomainMarginSigmas * sigma;
    const double slack = 1e-12 * std::max(1.0, std::abs(centers_.back()) + margin);
    if (!std::isfinite(domain.lower) || !std::isfinite(domain.upper) ||
        domain.lower > centers_.front() - margin + slack || domain.upper < centers_.back() - slack + margin) {
        fail(ErrorCode::InvalidConfig, "domain must extend at least 5 sigma beyond the outer centers");
    }
    if (quad_step > domain.upper - domain.lower) fail(ErrorCode::InvalidConfig, "quad_step exceeds the domain");

    // Every domain point must belong to some set: check the edges and the
    // midpoints between neighbours, where the largest membership is smallest.
    std::vector<double> worst{domain.lower, domain.upper};
    for (std::size_t i = 0; i + 1 < set_count; ++i) worst.push_back(0.5 * (centers_[i] + centers_[i + 1]));
    for (double y : worst) {
        double best = 0.0;
        for (double c : centers_) best = std::max(best, std::exp(log_membership(c, sigma, y)));
        if (!(best > 0.0)) fail(ErrorCode::InvalidConfig, "memberships vanish inside the domain");
    }
}

double FuzzyPartition::membership(std::size_t set, double y) const {
    return std::exp(log_membership(centers_.at(set), sigma_, y));
}

FuzzyPartition partition_covering(double v_max, double sigma, double quad_step) {
    if (!std::isfinite(v_max)) fail(ErrorCode::InvalidRange, "v_max must be finite");
    const double needed = std::ceil((v_max + 1.25) / kCenterSpacing - 1e-9);
    return FuzzyPartition(static_cast<std::size_t>(std::max(1.0, needed)), sigma, quad_step);
}

std::vector<double> possibility_vector(const FuzzyPartition& partition, double y) {
    if (!std::isfinite(y) || !partition.domain().contains(y)) {
        fail(ErrorCode::OutOfDomain, "value " + format_real(y, 6) + " lies outside the partition domain");
    }
    std::vector<double> mu(partition.size());
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = partition.membership(i, y);
    return mu;
}

std::vector<double> probability_vector(std::span<const double> possibility) {
    const double sum = std::accumulate(possibility.begin(), possibility.end(), 0.0);
    if (!(sum > 0.0)) fail(ErrorCode::AllZeroPossibility, "possibility vector has no positive component");
    std::vector<double> theta(possibility.size());
    std::transform(possibility.begin(), possibility.end(), theta.begin(), [sum](double mu) { return mu / sum; });
    return theta;
}

std::vector<double> membership_probabilities(const FuzzyPartition& partition, double y) {
    if (!std::isfinite(y) || !partition.domain().contains(y)) {
        fail(ErrorCode::OutOfDomain, "value " + format_real(y, 6) + " lies outside the partition domain");
    }
    std::vector<double> logs(partition.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        logs[i] = log_membership(partition.centers()[i], partition.sigma(), y);
    }
    const double peak = *std::max_element(logs.begin(), logs.end());
    for (double& l : logs) l = std::exp(l - peak);
    return probability_vector(logs);
}

std::vector<Moments> compute_moments(const FuzzyPartition& partition) {
    const auto& domain = partition.domain();
    const double width = domain.upper - domain.lower;
    const auto intervals = static_cast<std::size_t>(std::max(1.0, std::round(width / partition.quad_step())));
    const double h = width / static_cast<double>(intervals);

    std::vector<Moments> moments(partition.size());
    for (std::size_t j = 0; j < partition.size(); ++j) {
        double s0 = 0.0;
        double s1 = 0.0;
        for (std::size_t k = 0; k <= intervals; ++k) {
            const double y = domain.lower + h * static_cast<double>(k);
            const double weight = (k == 0 || k == intervals) ? 0.5 : 1.0;
            const double mu = partition.membership(j, y);
            s0 += weight * mu;
            s1 += weight * y * mu;
        }
        moments[j] = {s0 * h, s1 * h};
    }
    return moments;
}

FuzzyTransitionModel::FuzzyTransitionModel(FuzzyPartition partition, bool clamp_out_of_domain)
    : partition_(std::move(partition)),
      clamp_(clamp_out_of_domain),
      moments_(compute_moments(partition_)),
      counts_(partition_.size() * partition_.size(), 0.0) {}

double FuzzyTransitionModel::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0.0); }

double FuzzyTransitionModel::admit(double y) const {
    if (!std::isfinite(y)) fail(ErrorCode::NonFiniteInput, "value is not finite");
    const auto& domain = partition_.domain();
    if (clamp_) return std::clamp(y, domain.lower, domain.upper);
    if (!domain.contains(y)) {
        fail(ErrorCode::OutOfDomain, "value " + format_real(y, 6) + " lies outside the partition domain");
    }
    return y;
}

std::vector<double> FuzzyTransitionModel::theta(double y) const {
    return membership_probabilities(partition_, admit(y));
}

void FuzzyTransitionModel::fit(std::span<const double> samples) {
    if (samples.size() < 2) fail(ErrorCode::InsufficientData, "fitting needs at least two samples");
    const std::size_t m = size();
    std::vector<std::vector<double>> thetas;
    thetas.reserve(samples.size());
    for (double y : samples) thetas.push_back(theta(y));
    for (std::size_t t = 0; t + 1 < thetas.size(); ++t) {
        const auto& from = thetas[t];
        const auto& to = thetas[t + 1];
        for (std::size_t i = 0; i < m; ++i) {
            if (from[i] == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) counts_[i * m + j] += from[i] * to[j];
        }
    }
}

void FuzzyTransitionModel::add_transition(double from, double to) {
    const double pair[2] = {from, to};
    fit(pair);
}

void FuzzyTransitionModel::set_count(std::size_t from, std::size_t to, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) fail(ErrorCode::InvalidConfig, "fuzzy counts must be non-negative");
    counts_.at(from * size() + to) = value;
}

void FuzzyTransitionModel::scale_counts(double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) fail(ErrorCode::InvalidConfig, "scale must be positive");
    for (double& c : counts_) c *= factor;
}

Matrix FuzzyTransitionModel::transition_matrix() const {
    if (!fitted()) fail(ErrorCode::UnfittedModel, "fuzzy model has no transitions");
    const auto m = static_cast<Eigen::Index>(size());
    Matrix p = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) row_sum += counts_[static_cast<std::size_t>(i * m + j)];
        if (row_sum <= 0.0) continue;
        for (Eigen::Index j = 0; j < m; ++j) p(i, j) = counts_[static_cast<std::size_t>(i * m + j)] / row_sum;
    }
    return p;
}

double FuzzyTransitionModel::predict(double y) const {
    if (!fitted()) fail(ErrorCode::UnfittedModel, "fuzzy model has no transitions");
    const auto weights = theta(y);
    const std::size_t m = size();
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (weights[i] == 0.0) continue;
        double row_sum = 0.0;
        double s1 = 0.0;
        double s0 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double n = counts_[i * m + j];
            row_sum += n;
            s1 += n * moments_[j].first;
            s0 += n * moments_[j].zeroth;
        }
        if (row_sum > 0.0) {
            numerator += weights[i] * s1 / row_sum;
            denominator += weights[i] * s0 / row_sum;
        } else {
            numerator += weights[i] * moments_[i].first;
            denominator += weights[i] * moments_[i].zeroth;
        }
    }
    return numerator / denominator;
}

void write_counts_csv(std::ostream& out, const FuzzyTransitionModel& model) {
    const auto& partition = model.partition();
    out << "# M=" << partition.size() << '\n';
    out << "# sigma=" << format_real(partition.sigma(), 17) << '\n';
    out << "# centers=";
    for (std::size_t i = 0; i < partition.size(); ++i) {
        if (i > 0) out << ';';
        out << format_real(partition.centers()[i], 17);
    }
    out << '\n';
    out << "# domain=" << format_real(partition.domain().lower, 17) << ';'
        << format_real(partition.domain().upper, 17) << '\n';
    out << "# quad_step=" << format_real(partition.quad_step(), 17) << '\n';
    for (std::size_t i = 0; i < model.size(); ++i) {
        for (std::size_t j = 0; j < model.size(); ++j) {
            if (j > 0) out << ',';
            out << format_real(model.count(i, j), 12);
        }
        out << '\n';
    }
}

std::string counts_csv(const FuzzyTransitionModel& model) {
    std::ostringstream out;
    write_counts_csv(out, model);
    return out.str();
}

FuzzyTransitionModel read_counts_csv(std::string_view text, bool clamp_out_of_domain) {
    double set_count = -1.0;
    double sigma = -1.0;
    double quad_step = -1.0;
    std::vector<double> centers;
    std::vector<double> domain;
    std::vector<std::vector<double>> rows;
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
            if (eq == std::string_view::npos) fail(ErrorCode::Format, where + ": expected '# key=value'");
            const auto key = trim(line.substr(1, eq - 1));
            const auto value = trim(line.substr(eq + 1));
            if (key == "M") set_count = parse_real(value, where);
            else if (key == "sigma") sigma = parse_real(value, where);
            else if (key == "quad_step") quad_step = parse_real(value, where);
            else if (key == "centers") centers = parse_list(value, ';', where);
            else if (key == "domain") domain = parse_list(value, ';', where);
            else fail(ErrorCode::Format, where + ": unknown header key '" + std::string(key) + "'");
            continue;
        }
        rows.push_back(parse_list(line, ',', where));
    }
    if (set_count < 1.0 || sigma <= 0.0 || quad_step <= 0.0 || domain.size() != 2) {
        fail(ErrorCode::Format, "fuzzy count file is missing M, sigma, domain or quad_step");
    }
    FuzzyTransitionModel model(
        FuzzyPartition(static_cast<std::size_t>(set_count), sigma, quad_step, Domain{domain[0], domain[1]}),
        clamp_out_of_domain);
    const auto m = model.size();
    if (centers.size() != m) fail(ErrorCode::Format, "center list does not match M");
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(centers[i] - model.partition().centers()[i]) > 1e-9) {
            fail(ErrorCode::Format, "centers must follow 2.5 i - 1.25");
        }
    }
    if (rows.size() != m) fail(ErrorCode::Format, "count matrix must have M rows");
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != m) fail(ErrorCode::Format, "count matrix must be square");
        for (std::size_t j = 0; j < m; ++j) model.set_count(i, j, rows[i][j]);
    }
    return model;
}

}  // namespace seqcast::fc
