#include "seqcast/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seqcast/error.hpp"

namespace seqcast::lstm {

namespace {

double sigmoid(double b) { return 1.0 / (1.0 + std::exp(-b)); }

// Uniform in [-limit, limit] from raw engine bits, so the draw sequence does
// not depend on the standard library's distribution implementation.
void fill_uniform(Eigen::Ref<Matrix> target, double limit, std::mt19937_64& engine) {
    for (Eigen::Index c = 0; c < target.cols(); ++c) {
        for (Eigen::Index r = 0; r < target.rows(); ++r) {
            const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
            target(r, c) = (2.0 * unit - 1.0) * limit;
        }
    }
}

void require_params(const LstmParams& params) {
    if (params.empty()) fail(ErrorCode::UnfittedModel, "LSTM parameters are empty");
}

// Gate pre-activations -> activations, in place on one stacked column.
void activate_gates(Eigen::Ref<Vector> z, Eigen::Index h) {
    for (Eigen::Index k = 0; k < 4 * h; ++k) {
        const bool candidate = k >= h && k < 2 * h;
        z(k) = candidate ? std::tanh(z(k)) : sigmoid(z(k));
    }
}

}  // namespace

double activate(Activation kind, double b) {
    switch (kind) {
        case Activation::Sigmoid: return sigmoid(b);
        case Activation::Tanh: return std::tanh(b);
        case Activation::Relu: return std::max(0.0, b);
    }
    return b;
}

LstmParams LstmParams::zeros(Eigen::Index input_size, Eigen::Index hidden_size, Eigen::Index output_size) {
    LstmParams p;
    p.input_weights = Matrix::Zero(kGateCount * hidden_size, input_size);
    p.recurrent_weights = Matrix::Zero(kGateCount * hidden_size, hidden_size);
    p.gate_bias = Vector::Zero(kGateCount * hidden_size);
    p.head_weights = Matrix::Zero(output_size, hidden_size);
    p.head_bias = Vector::Zero(output_size);
    return p;
}

LstmParams LstmParams::glorot(Eigen::Index input_size, Eigen::Index hidden_size, Eigen::Index output_size,
                              std::uint64_t seed) {
    auto p = zeros(input_size, hidden_size, output_size);
    std::mt19937_64 engine(seed);
    const auto limit = [](Eigen::Index fan_in, Eigen::Index fan_out) {
        return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    };
    for (int g = 0; g < kGateCount; ++g) {
        fill_uniform(p.input_block(static_cast<Gate>(g)), limit(input_size, hidden_size), engine);
        fill_uniform(p.recurrent_block(static_cast<Gate>(g)), limit(hidden_size, hidden_size), engine);
    }
    fill_uniform(p.head_weights, limit(hidden_size, output_size), engine);
    return p;
}

std::vector<std::span<double>> LstmParams::tensors() {
    return {{input_weights.data(), static_cast<std::size_t>(input_weights.size())},
            {recurrent_weights.data(), static_cast<std::size_t>(recurrent_weights.size())},
            {gate_bias.data(), static_cast<std::size_t>(gate_bias.size())},
            {head_weights.data(), static_cast<std::size_t>(head_weights.size())},
            {head_bias.data(), static_cast<std::size_t>(head_bias.size())}};
}

std::vector<std::span<const double>> LstmParams::tensors() const {
    auto mutable_views = const_cast<LstmParams*>(this)->tensors();
    return {mutable_views.begin(), mutable_views.end()};
}

std::size_t LstmParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) n += t.size();
    return n;
}

void LstmParams::check_consistent() const {
    const auto h = hidden_size();
    if (input_weights.rows() != kGateCount * h || recurrent_weights.rows() != kGateCount * h ||
        gate_bias.size() != kGateCount * h || head_weights.cols() != h || head_bias.size() != output_size()) {
        fail(ErrorCode::DimensionMismatch, "LSTM parameter shapes are inconsistent");
    }
}

bool LstmParams::operator==(const LstmParams& other) const {
    const auto a = tensors();
    const auto b = other.tensors();
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!std::equal(a[k].begin(), a[k].end(), b[k].begin(), b[k].end())) return false;
    }
    return input_size() == other.input_size() && hidden_size() == other.hidden_size();
}

LstmState LstmState::zeros(Eigen::Index hidden_size) {
    return {Vector::Zero(hidden_size), Vector::Zero(hidden_size)};
}

CellOutput cell_forward(const LstmParams& params, const Vector& input, const LstmState& state) {
    require_params(params);
    params.check_consistent();
    const auto h = params.hidden_size();
    if (input.size() != params.input_size() || state.hidden.size() != h || state.memory.size() != h) {
        fail(ErrorCode::DimensionMismatch, "cell input or state has the wrong size");
    }
    Vector z = params.input_weights * input + params.recurrent_weights * state.hidden + params.gate_bias;
    activate_gates(z, h);
    const auto forget = z.segment(0, h).array();
    const auto candidate = z.segment(h, h).array();
    const auto in = z.segment(2 * h, h).array();
    const auto out = z.segment(3 * h, h).array();

    CellOutput result;
    result.state.memory = (forget * state.memory.array() + in * candidate).matrix();
    result.state.hidden = (out * result.state.memory.array().tanh()).matrix();
    result.output = params.head_weights * result.state.hidden + params.head_bias;
    return result;
}

SequenceOutput forward_sequence(const LstmParams& params, const Matrix& inputs, const LstmState& initial) {
    require_params(params);
    params.check_consistent();
    const auto h = params.hidden_size();
    const auto steps = inputs.cols();
    if (steps == 0) fail(ErrorCode::InsufficientData, "input sequence is empty");
    if (inputs.rows() != params.input_size() || initial.hidden.size() != h || initial.memory.size() != h) {
        fail(ErrorCode::DimensionMismatch, "sequence input or initial state has the wrong size");
    }

    SequenceOutput result;
    auto& cache = result.cache;
    cache.inputs = inputs;
    // Input contributions for every step in one product.
    cache.gates = params.input_weights * inputs;
    cache.gates.colwise() += params.gate_bias;
    cache.memory.resize(h, steps + 1);
    cache.hidden.resize(h, steps + 1);
    cache.tanh_memory.resize(h, steps);
    cache.memory.col(0) = initial.memory;
    cache.hidden.col(0) = initial.hidden;

    for (Eigen::Index t = 0; t < steps; ++t) {
        cache.gates.col(t).noalias() += params.recurrent_weights * cache.hidden.col(t);
        activate_gates(cache.gates.col(t), h);
        const auto z = cache.gates.col(t);
        cache.memory.col(t + 1) =
            (z.segment(0, h).array() * cache.memory.col(t).array() + z.segment(2 * h, h).array() * z.segment(h, h).array())
                .matrix();
        cache.tanh_memory.col(t) = cache.memory.col(t + 1).array().tanh().matrix();
        cache.hidden.col(t + 1) = (z.segment(3 * h, h).array() * cache.tanh_memory.col(t).array()).matrix();
    }

    result.outputs = params.head_weights * cache.hidden.rightCols(steps);
    result.outputs.colwise() += params.head_bias;
    result.final_state = {cache.hidden.col(steps), cache.memory.col(steps)};
    return result;
}

LossAndGradients loss_and_gradients(const LstmParams& params, const Matrix& inputs, const Matrix& targets) {
    require_params(params);
    if (targets.cols() != inputs.cols() || targets.rows() != params.output_size()) {
        fail(ErrorCode::DimensionMismatch, "targets must match the outputs in shape");
    }
    const auto h = params.hidden_size();
    const auto steps = inputs.cols();
    const auto forward = forward_sequence(params, inputs, LstmState::zeros(h));
    const auto& cache = forward.cache;

    const Matrix residual = forward.outputs - targets;
    const double inv_steps = 1.0 / static_cast<double>(steps);
    LossAndGradients result;
    result.loss = 0.5 * residual.squaredNorm() * inv_steps;

    const Matrix d_output = residual * inv_steps;
    const auto hidden_out = cache.hidden.rightCols(steps);
    auto& grad = result.gradients;
    grad = LstmParams::zeros(params.input_size(), h, params.output_size());
    grad.head_weights.noalias() = d_output * hidden_out.transpose();
    grad.head_bias = d_output.rowwise().sum();

    // Hidden-state gradient from the head, all steps at once.
    Matrix d_hidden_head = params.head_weights.transpose() * d_output;
    Matrix d_preact(kGateCount * h, steps);
    Vector d_hidden_next = Vector::Zero(h);
    Vector d_memory_next = Vector::Zero(h);
    Vector d_hidden(h);
    Vector d_memory(h);

    for (Eigen::Index t = steps - 1; t >= 0; --t) {
        const auto z = cache.gates.col(t);
        const auto forget = z.segment(0, h).array();
        const auto candidate = z.segment(h, h).array();
        const auto in = z.segment(2 * h, h).array();
        const auto out = z.segment(3 * h, h).array();
        const auto tanh_m = cache.tanh_memory.col(t).array();

        d_hidden = d_hidden_head.col(t) + d_hidden_next;
        d_memory = (d_hidden.array() * out * (1.0 - tanh_m.square())).matrix() + d_memory_next;

        auto dz = d_preact.col(t);
        dz.segment(0, h) = (d_memory.array() * cache.memory.col(t).array() * forget * (1.0 - forget)).matrix();
        dz.segment(h, h) = (d_memory.array() * in * (1.0 - candidate.square())).matrix();
        dz.segment(2 * h, h) = (d_memory.array() * candidate * in * (1.0 - in)).matrix();
        dz.segment(3 * h, h) = (d_hidden.array() * tanh_m * out * (1.0 - out)).matrix();

        d_memory_next = (d_memory.array() * forget).matrix();
        d_hidden_next.noalias() = params.recurrent_weights.transpose() * dz;
    }

    grad.input_weights.noalias() = d_preact * cache.inputs.transpose();
    grad.recurrent_weights.noalias() = d_preact * cache.hidden.leftCols(steps).transpose();
    grad.gate_bias = d_preact.rowwise().sum();
    return result;
}

double clip_gradients(std::span<const std::span<double>> tensors, double threshold) {
    if (!(threshold > 0.0)) fail(ErrorCode::InvalidConfig, "clip threshold must be positive");
    double squared = 0.0;
    for (const auto& t : tensors) {
        for (double g : t) squared += g * g;
    }
    const double norm = std::sqrt(squared);
    if (norm > threshold) {
        const double scale = threshold / norm;
        for (const auto& t : tensors) {
            for (double& g : t) g *= scale;
        }
    }
    return norm;
}

double clip_gradients(LstmParams& gradients, double threshold) {
    const auto views = gradients.tensors();
    return clip_gradients(std::span<const std::span<double>>(views), threshold);
}

void TrainConfig::validate() const {
    if (epochs < 1) fail(ErrorCode::InvalidConfig, "epochs must be at least 1");
    if (hidden_size < 1) fail(ErrorCode::InvalidConfig, "hidden_size must be at least 1");
    if (!(learning_rate > 0.0)) fail(ErrorCode::InvalidConfig, "learning_rate must be positive");
    if (!(grad_clip_norm > 0.0)) fail(ErrorCode::InvalidConfig, "grad_clip_norm must be positive");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
        fail(ErrorCode::InvalidConfig, "Adam betas must lie in [0, 1)");
    }
    if (!(adam_epsilon > 0.0)) fail(ErrorCode::InvalidConfig, "adam_epsilon must be positive");
}

AdamOptimizer::AdamOptimizer(const TrainConfig& config, const LstmParams& shape)
    : learning_rate_(config.learning_rate),
      beta1_(config.adam_beta1),
      beta2_(config.adam_beta2),
      epsilon_(config.adam_epsilon),
      first_moment_(LstmParams::zeros(shape.input_size(), shape.hidden_size(), shape.output_size())),
      second_moment_(first_moment_) {}

void AdamOptimizer::step(LstmParams& params, const LstmParams& gradients) {
    ++step_;
    const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    auto p = params.tensors();
    const auto g = gradients.tensors();
    auto m = first_moment_.tensors();
    auto v = second_moment_.tensors();
    for (std::size_t k = 0; k < p.size(); ++k) {
        for (std::size_t i = 0; i < p[k].size(); ++i) {
            m[k][i] = beta1_ * m[k][i] + (1.0 - beta1_) * g[k][i];
            v[k][i] = beta2_ * v[k][i] + (1.0 - beta2_) * g[k][i] * g[k][i];
            const double m_hat = m[k][i] / correction1;
            const double v_hat = v[k][i] / correction2;
            p[k][i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + epsilon_);
        }
    }
}

Standardization fit_standardization(std::span<const Trajectory> trajectories) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& t : trajectories) {
        for (double v : t.samples()) sum += v;
        n += t.size();
    }
    if (n == 0) fail(ErrorCode::InsufficientData, "no samples to standardize");
    const double mean = sum / static_cast<double>(n);
    double squares = 0.0;
    for (const auto& t : trajectories) {
        for (double v : t.samples()) squares += (v - mean) * (v - mean);
    }
    const double deviation = std::sqrt(squares / static_cast<double>(n));
    // A constant series has no spread to divide by.
    return {mean, deviation > 1e-12 ? deviation : 1.0};
}

TrainedModel train(std::span<const Trajectory> trajectories, const TrainConfig& config) {
    config.validate();
    if (trajectories.empty()) fail(ErrorCode::InsufficientData, "no training trajectories");
    for (const auto& t : trajectories) {
        if (t.size() < 2) fail(ErrorCode::InsufficientData, "each training trajectory needs two samples");
    }

    TrainedModel model;
    model.config = config;
    model.standardization = config.standardize ? fit_standardization(trajectories) : Standardization{};
    model.params = LstmParams::glorot(1, config.hidden_size, 1, config.seed);

    std::vector<std::pair<Matrix, Matrix>> batches;
    for (const auto& t : trajectories) {
        const auto steps = static_cast<Eigen::Index>(t.size()) - 1;
        Matrix inputs(1, steps);
        Matrix targets(1, steps);
        for (Eigen::Index k = 0; k < steps; ++k) {
            inputs(0, k) = model.standardization.apply(t.samples()[static_cast<std::size_t>(k)]);
            targets(0, k) = model.standardization.apply(t.samples()[static_cast<std::size_t>(k + 1)]);
        }
        batches.emplace_back(std::move(inputs), std::move(targets));
    }

    AdamOptimizer optimizer(config, model.params);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (const auto& [inputs, targets] : batches) {
            auto step = loss_and_gradients(model.params, inputs, targets);
            if (!std::isfinite(step.loss)) {
                fail(ErrorCode::DivergedTraining, "loss became non-finite at epoch " + std::to_string(epoch + 1));
            }
            model.curve.loss.push_back(step.loss);
            model.curve.rmse.push_back(std::sqrt(2.0 * step.loss) * model.standardization.scale);
            clip_gradients(step.gradients, config.grad_clip_norm);
            optimizer.step(model.params, step.gradients);
        }
    }
    return model;
}

std::vector<double> predict_open_loop(const LstmParams& params, const Standardization& standardization,
                                      const Trajectory& trajectory) {
    require_params(params);
    if (trajectory.size() < 2) fail(ErrorCode::InsufficientData, "open-loop prediction needs two samples");
    const auto steps = static_cast<Eigen::Index>(trajectory.size()) - 1;
    Matrix inputs(1, steps);
    for (Eigen::Index k = 0; k < steps; ++k) {
        inputs(0, k) = standardization.apply(trajectory.samples()[static_cast<std::size_t>(k)]);
    }
    const auto forward = forward_sequence(params, inputs, LstmState::zeros(params.hidden_size()));
    std::vector<double> predictions(static_cast<std::size_t>(steps));
    for (Eigen::Index k = 0; k < steps; ++k) {
        predictions[static_cast<std::size_t>(k)] = standardization.invert(forward.outputs(0, k));
    }
    return predictions;
}

namespace {

// Continues from `state`, whose last output was `first` (standardized), for
// `count` predictions in total.
std::vector<double> feed_back(const LstmParams& params, const Standardization& standardization, LstmState state,
                              double first, std::size_t count) {
    std::vector<double> predictions;
    predictions.reserve(count);
    double next = first;
    Vector input(1);
    for (std::size_t k = 0; k < count; ++k) {
        predictions.push_back(standardization.invert(next));
        if (k + 1 == count) break;
        input(0) = next;
        auto step = cell_forward(params, input, state);
        state = std::move(step.state);
        next = step.output(0);
    }
    return predictions;
}

}  // namespace

std::vector<double> predict_closed_loop(const LstmParams& params, const Standardization& standardization,
                                        const Trajectory& seed_history, int horizon) {
    require_params(params);
    if (horizon < 1) fail(ErrorCode::InvalidHorizon, "horizon must be at least 1");
    const auto steps = static_cast<Eigen::Index>(seed_history.size());
    Matrix inputs(1, steps);
    for (Eigen::Index k = 0; k < steps; ++k) {
        inputs(0, k) = standardization.apply(seed_history.samples()[static_cast<std::size_t>(k)]);
    }
    const auto warm = forward_sequence(params, inputs, LstmState::zeros(params.hidden_size()));
    return feed_back(params, standardization, warm.final_state, warm.outputs(0, steps - 1),
                     static_cast<std::size_t>(horizon));
}

std::vector<Rollout> rollouts(const LstmParams& params, const Standardization& standardization,
                              std::span<const double> samples, int horizon, std::size_t origin_stride) {
    require_params(params);
    if (horizon < 1) fail(ErrorCode::InvalidHorizon, "horizon must be at least 1");
    if (samples.size() < 2) fail(ErrorCode::InsufficientData, "rollouts need two samples");
    if (origin_stride == 0) fail(ErrorCode::InvalidConfig, "origin stride must be positive");

    std::vector<Rollout> result;
    auto state = LstmState::zeros(params.hidden_size());
    Vector input(1);
    for (std::size_t t = 0; t + 1 < samples.size(); ++t) {
        input(0) = standardization.apply(samples[t]);
        auto step = cell_forward(params, input, state);
        state = std::move(step.state);
        if (t % origin_stride != 0) continue;
        const auto available = std::min<std::size_t>(static_cast<std::size_t>(horizon), samples.size() - 1 - t);
        result.push_back({t, feed_back(params, standardization, state, step.output(0), available)});
    }
    return result;
}

}  // namespace seqcast::lstm
