#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqcast/matrix.hpp"
#include "seqcast/trajectory.hpp"

namespace seqcast::fc {

inline constexpr double kCenterSpacing = 2.5;
inline constexpr double kDefaultSigma = 1.0;
inline constexpr double kDefaultQuadStep = 0.01;
/// Minimum domain margin around the outer centers, in units of sigma.
inline constexpr double kDomainMarginSigmas = 5.0;

struct Domain {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double y) const { return y >= lower && y <= upper; }
    bool operator==(const Domain&) const = default;
};

/// Gaussian fuzzy sets with centers 2.5 i - 1.25 (i = 1..M) and a shared width.
class FuzzyPartition {
public:
    /// Domain defaults to [c_1 - 5 sigma, c_M + 5 sigma].
    explicit FuzzyPartition(std::size_t set_count, double sigma = kDefaultSigma,
                            double quad_step = kDefaultQuadStep);
    FuzzyPartition(std::size_t set_count, double sigma, double quad_step, Domain domain);

    std::size_t size() const noexcept { return centers_.size(); }
    const std::vector<double>& centers() const noexcept { return centers_; }
    double sigma() const noexcept { return sigma_; }
    double quad_step() const noexcept { return quad_step_; }
    const Domain& domain() const noexcept { return domain_; }

    double membership(std::size_t set, double y) const;

    bool operator==(const FuzzyPartition&) const = default;

private:
    std::vector<double> centers_;
    double sigma_;
    double quad_step_;
    Domain domain_;
};

/// Smallest partition whose last center reaches `v_max`.
FuzzyPartition partition_covering(double v_max, double sigma = kDefaultSigma,
                                  double quad_step = kDefaultQuadStep);

/// Raw memberships mu_i(y); they need not sum to one.
std::vector<double> possibility_vector(const FuzzyPartition& partition, double y);

/// theta_i = mu_i / sum_j mu_j.
std::vector<double> probability_vector(std::span<const double> possibility);

/// Probability vector of `y` computed in log space, so it stays normalized
/// even where every raw membership underflows.
std::vector<double> membership_probabilities(const FuzzyPartition& partition, double y);

struct Moments {
    double zeroth = 0.0;  // integral of mu_j over the domain
    double first = 0.0;   // integral of y * mu_j over the domain
};

/// Trapezoid quadrature over the domain at the partition's step.
std::vector<Moments> compute_moments(const FuzzyPartition& partition);

class FuzzyTransitionModel {
public:
    /// `clamp_out_of_domain` maps out-of-domain values to the nearest edge
    /// instead of raising OutOfDomain.
    explicit FuzzyTransitionModel(FuzzyPartition partition, bool clamp_out_of_domain = false);

    const FuzzyPartition& partition() const noexcept { return partition_; }
    const std::vector<Moments>& moments() const noexcept { return moments_; }
    std::size_t size() const noexcept { return partition_.size(); }
    bool clamps() const noexcept { return clamp_; }

    double count(std::size_t from, std::size_t to) const { return counts_.at(from * size() + to); }
    double total() const;
    bool fitted() const { return total() > 0.0; }

    /// Soft counting: counts_ij += theta_i(y_t) theta_j(y_{t+1}).
    void fit(std::span<const double> samples);
    void fit(const Trajectory& trajectory) { fit(trajectory.samples()); }
    void add_transition(double from, double to);
    void set_count(std::size_t from, std::size_t to, double value);
    void scale_counts(double factor);

    /// Row-normalized counts. Rows without mass stay zero.
    Matrix transition_matrix() const;

    /// Membership-weighted ratio of first to zeroth moments under the
    /// transition probabilities. Rows without mass hold their own set.
    double predict(double y) const;

private:
    double admit(double y) const;
    std::vector<double> theta(double y) const;

    FuzzyPartition partition_;
    bool clamp_;
    std::vector<Moments> moments_;
    std::vector<double> counts_;
};

/// Header comments carry M, sigma, centers, domain and quad_step; entries at
/// 12 significant digits.
void write_counts_csv(std::ostream& out, const FuzzyTransitionModel& model);
std::string counts_csv(const FuzzyTransitionModel& model);
FuzzyTransitionModel read_counts_csv(std::string_view text, bool clamp_out_of_domain = false);

}  // namespace seqcast::fc
