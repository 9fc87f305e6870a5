#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "seqcast/fuzzy_coding.hpp"
#include "seqcast/markov_nn.hpp"
#include "support.hpp"

using namespace seqcast;
using namespace seqcast::fc;

namespace {

std::vector<double> sample_trace() {
    const auto parsed = parse_records(oracle::read_text(oracle::sample_path()), IngestConfig{});
    return extract_trajectory(parsed.records, 1, IngestConfig{}).front().samples();
}

oracle::Rows counts_of(const FuzzyTransitionModel& model) {
    oracle::Rows rows(model.size(), std::vector<double>(model.size()));
    for (std::size_t i = 0; i < model.size(); ++i) {
        for (std::size_t j = 0; j < model.size(); ++j) rows[i][j] = model.count(i, j);
    }
    return rows;
}

}  // namespace

TEST_CASE("partition layout and validation") {
    const FuzzyPartition p(4);
    CHECK(p.centers() == std::vector<double>{1.25, 3.75, 6.25, 8.75});
    CHECK(p.domain().lower == -3.75);
    CHECK(p.domain().upper == 13.75);
    CHECK_ERROR(FuzzyPartition(0), InvalidConfig);
    CHECK_ERROR(FuzzyPartition(3, 0.0), InvalidConfig);
    CHECK_ERROR(FuzzyPartition(3, 1.0, 0.0), InvalidConfig);
    CHECK_ERROR(FuzzyPartition(3, 1.0, 0.01, Domain{0.0, 12.0}), InvalidConfig);
    CHECK(partition_covering(11.0).size() == 5);
    CHECK(partition_covering(11.25).size() == 5);
    CHECK(partition_covering(0.0).size() == 1);
}

TEST_CASE("possibility vector") {
    const auto mu = possibility_vector(FuzzyPartition(3), 1.25);
    CHECK(mu[0] == 1.0);
    CHECK(mu[1] == doctest::Approx(std::exp(-3.125)).epsilon(1e-15));
    CHECK(mu[1] == doctest::Approx(0.043937).epsilon(1e-5));
    CHECK(mu[2] == doctest::Approx(3.727e-6).epsilon(1e-3));
    const auto mid = possibility_vector(FuzzyPartition(3), 2.5);
    CHECK(mid[0] == mid[1]);
    CHECK(possibility_vector(FuzzyPartition(3), 6.25)[2] == 1.0);
    CHECK_ERROR(possibility_vector(FuzzyPartition(3), 20.0), OutOfDomain);
}

TEST_CASE("probability vector") {
    CHECK(probability_vector(std::vector<double>{0.5, 0.5}) == std::vector<double>{0.5, 0.5});
    CHECK(probability_vector(std::vector<double>{1, 0, 0}) == std::vector<double>{1, 0, 0});
    const auto theta = probability_vector(std::vector<double>{0.2, 0.6});
    CHECK(theta[0] == doctest::Approx(0.25));
    CHECK(theta[1] == doctest::Approx(0.75));
    CHECK_ERROR(probability_vector(std::vector<double>{0, 0}), AllZeroPossibility);

    const FuzzyPartition p(6);
    for (double y = p.domain().lower; y <= p.domain().upper; y += 0.037) {
        double sum = 0.0;
        for (double t : membership_probabilities(p, y)) sum += t;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("moments against the closed form") {
    const FuzzyPartition p(5);
    const auto moments = compute_moments(p);
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double c = p.centers()[j];
        const double lo = p.domain().lower;
        const double hi = p.domain().upper;
        // Trapezoid error at the cut tails is h^2/12 * |f'| ~ 5e-10.
        CHECK(moments[j].zeroth == doctest::Approx(oracle::gaussian_mass(c, 1.0, lo, hi)).epsilon(1e-9));
        CHECK(moments[j].first == doctest::Approx(oracle::gaussian_first_moment(c, 1.0, lo, hi)).epsilon(1e-9));
        CHECK(std::abs(moments[j].zeroth - std::sqrt(2.0 * std::numbers::pi)) < 1e-6);
        // The outer sets lose a 5-sigma tail on one side, which moves their
        // centroid by about 1.5e-6; the inner sets are symmetric to 1e-6.
        const bool outer = j == 0 || j + 1 == p.size();
        CHECK(std::abs(moments[j].first / moments[j].zeroth - c) < (outer ? 2e-6 : 1e-6));
    }
    const auto single = compute_moments(FuzzyPartition(1));
    CHECK(std::abs(single[0].first / single[0].zeroth - 1.25) < 1e-6);
    const auto fine = compute_moments(FuzzyPartition(5, 1.0, 0.005));
    for (std::size_t j = 0; j < p.size(); ++j) CHECK(std::abs(fine[j].zeroth - moments[j].zeroth) < 1e-8);
}

TEST_CASE("soft counting") {
    FuzzyTransitionModel crisp(FuzzyPartition(2, 0.05));
    crisp.add_transition(1.25, 3.75);
    CHECK(crisp.count(0, 1) == doctest::Approx(1.0));
    CHECK(crisp.count(0, 0) < 1e-100);
    CHECK(crisp.count(1, 0) < 1e-100);

    FuzzyTransitionModel even(FuzzyPartition(2));
    even.add_transition(2.5, 2.5);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK(even.count(i, j) == doctest::Approx(0.25).epsilon(1e-14));
    }

    FuzzyTransitionModel model(FuzzyPartition(4));
    model.fit(std::vector<double>{0.3, 2.0, 7.7, 9.9, 4.1});
    CHECK(model.total() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("transition matrix") {
    FuzzyTransitionModel model(FuzzyPartition(2));
    CHECK_ERROR(model.transition_matrix(), UnfittedModel);
    CHECK_ERROR(model.predict(1.0), UnfittedModel);
    model.set_count(0, 0, 1);
    model.set_count(0, 1, 1);
    model.set_count(1, 1, 2);
    const auto p = model.transition_matrix();
    CHECK(p(0, 0) == 0.5);
    CHECK(p(0, 1) == 0.5);
    CHECK(p(1, 0) == 0.0);
    CHECK(p(1, 1) == 1.0);

    const auto trace = sample_trace();
    FuzzyTransitionModel fitted(partition_covering(*std::max_element(trace.begin(), trace.end())));
    fitted.fit(trace);
    const auto q = fitted.transition_matrix();
    for (Eigen::Index i = 0; i < q.rows(); ++i) CHECK(std::abs(q.row(i).sum() - 1.0) <= 1e-12);
}

TEST_CASE("prediction examples") {
    const FuzzyPartition p(2, 0.3);
    FuzzyTransitionModel identity(p);
    identity.set_count(0, 0, 1);
    identity.set_count(1, 1, 1);
    for (double y : {1.25, 3.75, 2.0, 2.5}) {
        const auto theta = membership_probabilities(p, y);
        CHECK(std::abs(identity.predict(y) - (theta[0] * 1.25 + theta[1] * 3.75)) < 1e-6);
    }

    FuzzyTransitionModel onehot(FuzzyPartition(4));
    for (std::size_t i = 0; i < 4; ++i) onehot.set_count(i, 2, 4);
    for (double y : {0.0, 3.0, 6.0, 9.5}) CHECK(std::abs(onehot.predict(y) - 6.25) < 1e-6);

    FuzzyTransitionModel model(FuzzyPartition(4));
    model.fit(std::vector<double>{0.3, 2.0, 7.7, 9.9, 4.1, 4.4, 5.0});
    const double before = model.predict(3.3);
    model.scale_counts(17.0);
    CHECK(model.predict(3.3) == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("prediction agrees with a first-principles oracle") {
    const auto trace = sample_trace();
    FuzzyTransitionModel model(partition_covering(*std::max_element(trace.begin(), trace.end())));
    model.fit(std::span(trace).first(600));
    const auto& p = model.partition();
    for (std::size_t t = 0; t < trace.size(); t += 37) {
        const double expected = oracle::fuzzy_prediction(p.centers(), p.sigma(), p.domain().lower,
                                                         p.domain().upper, counts_of(model), trace[t]);
        CHECK(model.predict(trace[t]) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("bounded, quadrature-stable and smooth on the sample trace") {
    const auto trace = sample_trace();
    const double v_max = *std::max_element(trace.begin(), trace.end());
    FuzzyTransitionModel model(partition_covering(v_max));
    FuzzyTransitionModel half(partition_covering(v_max, 1.0, 0.005));
    model.fit(trace);
    half.fit(trace);
    const auto& d = model.partition().domain();
    for (std::size_t t = 0; t < trace.size(); t += 7) {
        const double y = trace[t];
        const double out = model.predict(y);
        CHECK(out >= d.lower);
        CHECK(out <= d.upper);
        CHECK(std::abs(half.predict(y) - out) < 1e-6);
        CHECK(std::abs(model.predict(y + 1e-6) - out) <= 1e-3);
    }
}

TEST_CASE("crisp limit matches the NN expectation") {
    const FuzzyPartition p(5, 0.05);
    const nn::StateSpace space(p.centers());
    std::mt19937_64 rng(5);
    std::vector<double> trace;
    for (int t = 0; t < 400; ++t) trace.push_back(p.centers()[rng() % 5]);
    FuzzyTransitionModel fuzzy(p);
    fuzzy.fit(trace);
    nn::TransitionModel crisp(space);
    crisp.fit(trace);
    for (double c : p.centers()) CHECK(std::abs(fuzzy.predict(c) - crisp.predict_expectation(c)) <= 1e-3);
}

TEST_CASE("out of domain handling") {
    FuzzyTransitionModel strict(FuzzyPartition(2));
    CHECK_ERROR(strict.add_transition(1.0, 50.0), OutOfDomain);
    FuzzyTransitionModel lenient(FuzzyPartition(2), true);
    lenient.add_transition(1.0, 50.0);
    CHECK(lenient.predict(-40.0) > 0.0);
}

TEST_CASE("fuzzy counts csv round trip") {
    FuzzyTransitionModel model(FuzzyPartition(3));
    model.fit(std::vector<double>{0.5, 2.0, 4.0, 6.0, 3.0});
    const auto back = read_counts_csv(counts_csv(model));
    CHECK(back.partition() == model.partition());
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(back.count(i, j) == doctest::Approx(model.count(i, j)).epsilon(1e-11));
    }
    CHECK_ERROR(read_counts_csv("# M=2\n1,2\n"), Format);
}
