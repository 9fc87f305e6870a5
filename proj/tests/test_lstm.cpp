#include <doctest.h>

#include <cmath>
#include <random>

#include "gradient_check.hpp"
#include "seqcast/evaluation.hpp"
#include "seqcast/lstm.hpp"
#include "support.hpp"

using namespace seqcast;
using namespace seqcast::lstm;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Straight transcription of the gate equations, one scalar at a time.
CellOutput naive_cell(const LstmParams& p, const Vector& x, const LstmState& s) {
    const auto h = p.hidden_size();
    CellOutput out{LstmState::zeros(h), Vector(p.output_size())};
    for (Eigen::Index k = 0; k < h; ++k) {
        double z[4];
        for (int g = 0; g < 4; ++g) {
            const auto row = g * h + k;
            double acc = p.gate_bias(row);
            for (Eigen::Index i = 0; i < x.size(); ++i) acc += p.input_weights(row, i) * x(i);
            for (Eigen::Index j = 0; j < h; ++j) acc += p.recurrent_weights(row, j) * s.hidden(j);
            z[g] = acc;
        }
        const double f = sigmoid(z[0]);
        const double g = std::tanh(z[1]);
        const double i = sigmoid(z[2]);
        const double o = sigmoid(z[3]);
        out.state.memory(k) = f * s.memory(k) + i * g;
        out.state.hidden(k) = o * std::tanh(out.state.memory(k));
    }
    for (Eigen::Index r = 0; r < p.output_size(); ++r) {
        out.output(r) = p.head_bias(r) + p.head_weights.row(r).dot(out.state.hidden);
    }
    return out;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(rows, cols);
    for (auto& v : m.reshaped()) v = normal(rng);
    return m;
}

TrainConfig small_config() {
    TrainConfig config;
    config.epochs = 40;
    config.hidden_size = 12;
    config.learning_rate = 0.01;
    return config;
}

}  // namespace

TEST_CASE("activations") {
    CHECK(activate(Activation::Sigmoid, 0.0) == 0.5);
    CHECK(activate(Activation::Tanh, 0.0) == 0.0);
    CHECK(activate(Activation::Relu, -3.0) == 0.0);
    CHECK(activate(Activation::Relu, 2.5) == 2.5);
    for (double b : {-30.0, -2.0, -0.1, 0.7, 4.0, 25.0}) {
        CHECK(activate(Activation::Sigmoid, b) + activate(Activation::Sigmoid, -b) == doctest::Approx(1.0));
    }
}

TEST_CASE("zero parameters give half-open gates and zero output") {
    const auto p = LstmParams::zeros(1, 3, 1);
    Vector x(1);
    x << 4.2;
    const auto out = cell_forward(p, x, LstmState::zeros(3));
    CHECK(out.state.memory.isZero());
    CHECK(out.state.hidden.isZero());
    CHECK(out.output(0) == 0.0);

    std::mt19937_64 rng(1);
    const auto seq = forward_sequence(p, random_matrix(1, 9, rng), LstmState::zeros(3));
    CHECK(seq.outputs.isZero());
    CHECK(seq.cache.gates.col(0).segment(0, 3).isConstant(0.5));
    CHECK(seq.cache.gates.col(0).segment(3, 3).isZero());
}

TEST_CASE("saturated forget and input gates carry memory unchanged") {
    std::mt19937_64 rng(2);
    auto p = LstmParams::glorot(2, 4, 1, 9);
    p.bias_block(Gate::Forget).setConstant(1e3);
    p.bias_block(Gate::Input).setConstant(-1e3);
    LstmState s{Vector::Random(4), Vector::Random(4)};
    const auto out = cell_forward(p, random_matrix(2, 1, rng).col(0), s);
    CHECK(out.state.memory == s.memory);
}

TEST_CASE("cell matches the scalar transcription and bounds the hidden state") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        LstmParams p = LstmParams::zeros(3, 5, 2);
        for (auto t : p.tensors()) {
            for (auto& v : t) v = std::normal_distribution<double>(0.0, 3.0)(rng);
        }
        const LstmState s{random_matrix(5, 1, rng).col(0), random_matrix(5, 1, rng, 4.0).col(0)};
        const Vector x = random_matrix(3, 1, rng, 5.0).col(0);
        const auto fast = cell_forward(p, x, s);
        const auto slow = naive_cell(p, x, s);
        CHECK((fast.state.memory - slow.state.memory).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((fast.state.hidden - slow.state.hidden).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((fast.output - slow.output).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(fast.state.hidden.cwiseAbs().maxCoeff() < 1.0);
    }
}

TEST_CASE("sequence chaining") {
    std::mt19937_64 rng(4);
    const auto p = LstmParams::glorot(1, 6, 1, 4);
    const Matrix inputs = random_matrix(1, 12, rng);
    const auto zero = LstmState::zeros(6);

    const auto single = forward_sequence(p, inputs.leftCols(1), zero);
    const auto cell = cell_forward(p, inputs.col(0), zero);
    CHECK(single.outputs(0, 0) == cell.output(0));
    CHECK(single.final_state.hidden == cell.state.hidden);

    const auto whole = forward_sequence(p, inputs, zero);
    const auto first = forward_sequence(p, inputs.leftCols(5), zero);
    const auto second = forward_sequence(p, inputs.rightCols(7), first.final_state);
    Matrix joined(1, 12);
    joined << first.outputs, second.outputs;
    CHECK((joined - whole.outputs).cwiseAbs().maxCoeff() <= 1e-15);

    CHECK_ERROR(forward_sequence(p, Matrix(2, 3), zero), DimensionMismatch);
    CHECK_ERROR(forward_sequence(LstmParams{}, inputs, zero), UnfittedModel);
}

TEST_CASE("loss and gradients") {
    std::mt19937_64 rng(5);
    const auto p = LstmParams::glorot(1, 4, 1, 5);
    const Matrix inputs = random_matrix(1, 6, rng);
    const auto outputs = forward_sequence(p, inputs, LstmState::zeros(4)).outputs;

    const auto exact = loss_and_gradients(p, inputs, outputs);
    CHECK(exact.loss == 0.0);
    for (auto t : exact.gradients.tensors()) {
        for (double g : t) CHECK(g == 0.0);
    }

    const Matrix residual = random_matrix(1, 6, rng);
    const double base = loss_and_gradients(p, inputs, outputs + residual).loss;
    const double scaled = loss_and_gradients(p, inputs, outputs + 3.0 * residual).loss;
    CHECK(scaled == doctest::Approx(9.0 * base).epsilon(1e-12));
}

TEST_CASE("gradients match central differences") {
    const auto result = gradcheck::compare(gradcheck::random_instance(17, 1, 4, 6));
    MESSAGE("max relative error " << result.max_relative_error << " over " << result.entries << " entries");
    CHECK(result.max_relative_error <= 1e-5);

    const auto wide = gradcheck::compare(gradcheck::random_instance(23, 3, 5, 8));
    CHECK(wide.max_relative_error <= 1e-5);
}

TEST_CASE("gradient clipping") {
    std::vector<double> small{0.3, 0.4};
    std::vector<std::span<double>> views{small};
    CHECK(clip_gradients(views, 1.0) == doctest::Approx(0.5));
    CHECK(small == std::vector<double>{0.3, 0.4});

    std::vector<double> single{3.0};
    std::vector<std::span<double>> one{single};
    CHECK(clip_gradients(one, 1.0) == 3.0);
    CHECK(single[0] == doctest::Approx(1.0));

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = LstmParams::zeros(1, 7, 1);
        for (auto t : g.tensors()) {
            for (auto& v : t) v = std::normal_distribution<double>(0.0, 10.0)(rng);
        }
        const double threshold = 0.1 + trial * 0.2;
        clip_gradients(g, threshold);
        double norm = 0.0;
        for (auto t : g.tensors()) {
            for (double v : t) norm += v * v;
        }
        CHECK(std::sqrt(norm) <= threshold + 1e-12);
    }
}

TEST_CASE("standardization") {
    const std::vector<Trajectory> sets{Trajectory(1, 0.1, {1, 2, 3}), Trajectory(2, 0.1, {5, 5})};
    const auto s = fit_standardization(sets);
    CHECK(s.mean == doctest::Approx(3.2));
    for (double x : {0.0, 1.0, 13.7, 1e4}) CHECK(std::abs(s.invert(s.apply(x)) - x) <= 1e-12 * std::max(1.0, x));
    const std::vector<Trajectory> flat{Trajectory(1, 0.1, {5, 5, 5})};
    CHECK(fit_standardization(flat).scale == 1.0);
}

TEST_CASE("training config validation") {
    TrainConfig c;
    CHECK_NOTHROW(c.validate());
    c.epochs = 0;
    CHECK_ERROR(c.validate(), InvalidConfig);
    c = {};
    c.adam_beta1 = 1.0;
    CHECK_ERROR(c.validate(), InvalidConfig);
}

TEST_CASE("constant series is learned exactly") {
    const std::vector<Trajectory> data{Trajectory(1, 0.1, std::vector<double>(200, 5.0))};
    TrainConfig config;
    config.hidden_size = 16;
    const auto model = train(data, config);
    CHECK(model.curve.loss.back() < 1e-6);
    for (double y : predict_open_loop(model.params, model.standardization, data[0])) CHECK(std::abs(y - 5.0) < 1e-3);
    for (double y : predict_closed_loop(model.params, model.standardization, data[0], 30)) {
        CHECK(std::abs(y - 5.0) < 1e-3);
    }
}

TEST_CASE("prediction shapes and closed-loop consistency") {
    const auto sine = eval::sine_trajectory(5.0, 10.0, 10.0, 120);
    const std::vector<Trajectory> data{sine};
    const auto model = train(data, small_config());
    const auto open = predict_open_loop(model.params, model.standardization, sine);
    CHECK(open.size() == sine.size() - 1);

    const auto closed = predict_closed_loop(model.params, model.standardization, sine, 1);
    const auto extended = predict_open_loop(
        model.params, model.standardization,
        Trajectory(1, 0.1, [&] {
            auto s = sine.samples();
            s.push_back(0.0);
            return s;
        }()));
    CHECK(std::abs(closed[0] - extended.back()) <= 1e-12);

    const auto rolls = rollouts(model.params, model.standardization, sine.samples(), 5);
    REQUIRE(rolls.size() == sine.size() - 1);
    for (const auto& r : rolls) {
        CHECK(r.predictions.size() == std::min<std::size_t>(5, sine.size() - 1 - r.origin));
        CHECK(std::abs(r.predictions[0] - open[r.origin]) <= 1e-12);
    }
    CHECK_ERROR(predict_closed_loop(model.params, model.standardization, sine, 0), InvalidHorizon);
}

TEST_CASE("training is deterministic and the model file round-trips") {
    const std::vector<Trajectory> data{eval::sine_trajectory(5.0, 10.0, 10.0, 100)};
    const auto a = train(data, small_config());
    const auto b = train(data, small_config());
    CHECK(a.params == b.params);
    CHECK(a.curve.loss == b.curve.loss);
    const auto text = model_text(a);
    CHECK(text.rfind(std::string(kModelHeader) + "\n", 0) == 0);
    CHECK(model_text(read_model(text)) == text);
    const auto back = read_model(text);
    CHECK(back.config == a.config);
    CHECK(back.standardization == a.standardization);
    CHECK(back.params == a.params);
    CHECK_ERROR(read_model("not a model\n"), Format);
}

namespace {

const TrainedModel& default_sine_model() {
    static const TrainedModel model = [] {
        const std::vector<Trajectory> data{eval::sine_trajectory()};
        return train(data, TrainConfig{});
    }();
    return model;
}

}  // namespace

TEST_CASE("sine oracle at default settings") {
    const auto sine = eval::sine_trajectory();
    const auto& model = default_sine_model();
    REQUIRE(model.curve.loss.size() == 150);

    const auto open = predict_open_loop(model.params, model.standardization, sine);
    const double open_rmse = eval::rmse(open, std::span(sine.samples()).subspan(1));
    MESSAGE("open-loop rmse " << open_rmse);
    CHECK(open_rmse <= 0.25);

    std::vector<double> closed;
    std::vector<double> observed;
    for (const auto& r : rollouts(model.params, model.standardization, sine.samples(), 40)) {
        for (std::size_t s = 0; s < r.predictions.size(); ++s) {
            closed.push_back(r.predictions[s]);
            observed.push_back(sine.samples()[r.origin + 1 + s]);
        }
    }
    CHECK(open_rmse <= eval::rmse(closed, observed));
}

TEST_CASE("loss moving average does not rise after epoch 20") {
    const auto& model = default_sine_model();
    // Moving average of the loss over 10 epochs, compared from epoch 20 on.
    std::vector<double> average;
    for (std::size_t k = 10; k <= model.curve.loss.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = k - 10; j < k; ++j) sum += model.curve.loss[j];
        average.push_back(sum / 10.0);
    }
    for (std::size_t k = 20 - 10 + 1; k < average.size(); ++k) CHECK(average[k] <= average[k - 1]);
}
