#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "seqcast/markov_nn.hpp"
#include "support.hpp"

using namespace seqcast;
using namespace seqcast::nn;

namespace {

const StateSpace kThree({0.0, 2.5, 5.0});

TransitionModel with_rows(const StateSpace& space, const std::vector<std::vector<std::uint64_t>>& counts,
                          Fallback fallback = Fallback::ZeroRow) {
    TransitionModel model(space, fallback);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t j = 0; j < counts[i].size(); ++j) model.add_count(i, j, counts[i][j]);
    }
    return model;
}

}  // namespace

TEST_CASE("build_state_space") {
    CHECK(build_state_space(0, 7.5, 2.5).grid() == std::vector<double>{0, 2.5, 5.0, 7.5});
    CHECK(build_state_space(0, 6.0, 2.5).grid() == std::vector<double>{0, 2.5, 5.0, 7.5});
    CHECK_ERROR(build_state_space(5, 5, 1), InvalidRange);
    CHECK_ERROR(build_state_space(0, 5, 0), InvalidRange);
    CHECK_ERROR(StateSpace({1.0, 1.0}), InvalidRange);
}

TEST_CASE("quantize picks the nearest state, ties go low") {
    CHECK(quantize(3.6, kThree) == 1);
    CHECK(quantize(5.0, kThree) == 2);
    CHECK(quantize(3.75, kThree) == 1);
    CHECK(quantize(-4.0, kThree) == 0);
    CHECK(quantize(40.0, kThree) == 2);
    CHECK_ERROR(quantize(NAN, kThree), NonFiniteInput);
    const auto space = build_state_space(0, 30, 2.5);
    for (std::size_t i = 0; i < space.size(); ++i) CHECK(quantize(space.value(i), space) == i);
}

TEST_CASE("fit counts transitions") {
    // States 1,1,2,1 (1-based) on grid [0, 2.5, 5].
    TransitionModel model(kThree);
    model.fit(std::vector<double>{0.0, 0.0, 2.5, 0.0});
    CHECK(model.count(0, 0) == 1);
    CHECK(model.count(0, 1) == 1);
    CHECK(model.count(1, 0) == 1);
    CHECK(model.total() == 3);
    const auto p = model.transition_matrix();
    CHECK(p(0, 0) == 0.5);
    CHECK(p(0, 1) == 0.5);
    CHECK(p(1, 0) == 1.0);

    TransitionModel self_loop(kThree);
    self_loop.fit(std::vector<double>{5, 5, 5});
    CHECK(self_loop.count(2, 2) == 2);
    CHECK(self_loop.transition_matrix()(2, 2) == 1.0);

    CHECK_ERROR(model.fit(std::vector<double>{1.0}), InsufficientData);
}

TEST_CASE("refitting doubles counts and keeps probabilities") {
    const std::vector<double> y{0.3, 2.4, 4.9, 2.6, 0.1, 0.0, 2.5};
    TransitionModel once(kThree);
    once.fit(y);
    TransitionModel twice(kThree);
    twice.fit(y);
    twice.fit(y);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(twice.count(i, j) == 2 * once.count(i, j));
    }
    CHECK(twice.transition_matrix() == once.transition_matrix());
}

TEST_CASE("transition rows and fallbacks") {
    CHECK(with_rows(kThree, {{1, 1, 0}}).transition_row(0) == std::vector<double>{0.5, 0.5, 0.0});
    CHECK(with_rows(kThree, {}, Fallback::Hold).transition_row(1) == std::vector<double>{0, 1, 0});
    CHECK(with_rows(kThree, {}).transition_row(1) == std::vector<double>{0, 0, 0});
    const auto uniform = with_rows(kThree, {}, Fallback::Uniform).transition_row(2);
    for (double p : uniform) CHECK(p == doctest::Approx(1.0 / 3.0));
    CHECK(with_rows(kThree, {}).predict_expectation(2.5) == 0.0);
    CHECK(with_rows(kThree, {}).predict_argmax(2.5) == 0.0);
}

TEST_CASE("argmax prediction") {
    CHECK(with_rows(kThree, {{2, 7, 1}}).predict_argmax(0.0) == 2.5);
    CHECK(with_rows(kThree, {{0}, {0, 4, 0}}).predict_argmax(2.5) == 2.5);
    CHECK(with_rows(kThree, {{1, 1, 0}}).predict_argmax(0.0) == 0.0);
}

TEST_CASE("expectation prediction") {
    const StateSpace two({0.0, 2.5});
    CHECK(with_rows(two, {{1, 1}}).predict_expectation(0.0) == 1.25);
    CHECK(with_rows(kThree, {{0, 0, 3}}).predict_expectation(0.0) == 5.0);
}

TEST_CASE("expectation scales with the grid") {
    std::mt19937_64 rng(3);
    for (double c : {2.0, 0.25, 3.7}) {
        const StateSpace base({0.0, 1.5, 4.0, 6.5});
        std::vector<double> scaled_grid;
        for (double x : base.grid()) scaled_grid.push_back(c * x);
        TransitionModel a(base);
        TransitionModel b{StateSpace(scaled_grid)};
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                const auto n = rng() % 5;
                a.add_count(i, j, n);
                b.add_count(i, j, n);
            }
        }
        for (double y : {0.2, 1.4, 3.9, 6.0}) {
            const double lhs = b.predict_expectation(c * y);
            const double rhs = c * a.predict_expectation(y);
            if (c == 2.0 || c == 0.25) {
                CHECK(lhs == rhs);
            } else {
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("multistep prediction") {
    const StateSpace two({0.0, 2.5});
    CHECK(with_rows(two, {{0, 1}, {1, 0}}).predict_multistep(0.0, 2) == std::vector<double>{2.5, 0.0});
    CHECK(with_rows(kThree, {{1}, {0, 1}, {0, 0, 1}}).predict_multistep(2.5, 4) == std::vector<double>(4, 2.5));
    CHECK_ERROR(with_rows(two, {}).predict_multistep(0.0, 0), InvalidHorizon);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto model = with_rows(kThree, {{1 + rng() % 9, 1 + rng() % 9, 1 + rng() % 9},
                                        {1 + rng() % 9, 1 + rng() % 9, 1 + rng() % 9},
                                        {1 + rng() % 9, 1 + rng() % 9, 1 + rng() % 9}});
        oracle::Rows p(3);
        for (std::size_t i = 0; i < 3; ++i) p[i] = model.transition_row(i);
        for (std::size_t start = 0; start < 3; ++start) {
            const auto forecasts = model.predict_multistep(kThree.value(start), 4);
            for (int n = 1; n <= 4; ++n) {
                CHECK(forecasts[n - 1] ==
                      doctest::Approx(oracle::path_expectation(p, kThree.grid(), start, n)).epsilon(1e-12));
            }
            CHECK(forecasts[0] == model.predict_expectation(kThree.value(start)));
        }
    }
}

TEST_CASE("counts csv round trip") {
    auto model = with_rows(build_state_space(0, 10, 2.5), {{3, 1}, {0, 2, 5}, {}, {0, 0, 0, 0, 9}});
    const auto text = counts_csv(model);
    CHECK(text.rfind("# x_1=0\n# x_2=2.5\n", 0) == 0);
    const auto back = read_counts_csv(text, Fallback::ZeroRow);
    CHECK(back.state_space() == model.state_space());
    CHECK(back.transition_matrix() == model.transition_matrix());
    CHECK_ERROR(read_counts_csv("# x_1=0\n# x_2=1\n1,2\n", Fallback::ZeroRow), Format);
    CHECK_ERROR(read_counts_csv("# x_1=0\n# x_2=1\n1,-2\n0,0\n", Fallback::ZeroRow), Format);
}

TEST_CASE("fallback names") {
    for (auto f : {Fallback::ZeroRow, Fallback::Hold, Fallback::Uniform}) CHECK(parse_fallback(to_string(f)) == f);
    CHECK_ERROR(parse_fallback("nearest"), InvalidConfig);
}
