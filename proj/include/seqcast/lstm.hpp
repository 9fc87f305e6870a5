#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqcast/matrix.hpp"
#include "seqcast/trajectory.hpp"

namespace seqcast::lstm {

enum class Activation { Sigmoid, Tanh, Relu };

double activate(Activation kind, double b);

/// Gate blocks are stacked in this order inside the weight matrices.
enum class Gate { Forget = 0, Candidate = 1, Input = 2, Output = 3 };
inline constexpr int kGateCount = 4;

/// Single-layer LSTM with a linear output head.
///
/// The four per-gate input matrices U_g (hidden x input), recurrent matrices
/// W_g (hidden x hidden) and biases b_g are stored stacked, so one
/// matrix-vector product evaluates all gates. `input_block`, `recurrent_block`
/// and `bias_block` expose the per-gate views.
struct LstmParams {
    Matrix input_weights;      // 4h x input
    Matrix recurrent_weights;  // 4h x h
    Vector gate_bias;          // 4h
    Matrix head_weights;       // output x h
    Vector head_bias;          // output

    static LstmParams zeros(Eigen::Index input_size, Eigen::Index hidden_size, Eigen::Index output_size);
    /// Each matrix uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
    static LstmParams glorot(Eigen::Index input_size, Eigen::Index hidden_size, Eigen::Index output_size,
                             std::uint64_t seed);

    Eigen::Index input_size() const { return input_weights.cols(); }
    Eigen::Index hidden_size() const { return recurrent_weights.cols(); }
    Eigen::Index output_size() const { return head_weights.rows(); }
    bool empty() const { return hidden_size() == 0; }

    auto input_block(Gate g) { return input_weights.middleRows(offset(g), hidden_size()); }
    auto input_block(Gate g) const { return input_weights.middleRows(offset(g), hidden_size()); }
    auto recurrent_block(Gate g) { return recurrent_weights.middleRows(offset(g), hidden_size()); }
    auto recurrent_block(Gate g) const { return recurrent_weights.middleRows(offset(g), hidden_size()); }
    auto bias_block(Gate g) { return gate_bias.segment(offset(g), hidden_size()); }
    auto bias_block(Gate g) const { return gate_bias.segment(offset(g), hidden_size()); }

    /// Contiguous storage of every tensor, in a fixed order.
    std::vector<std::span<double>> tensors();
    std::vector<std::span<const double>> tensors() const;
    std::size_t parameter_count() const;

    void check_consistent() const;
    bool operator==(const LstmParams& other) const;

private:
    Eigen::Index offset(Gate g) const { return static_cast<Eigen::Index>(g) * hidden_size(); }
};

struct LstmState {
    Vector hidden;  // H
    Vector memory;  // M

    static LstmState zeros(Eigen::Index hidden_size);
};

struct CellOutput {
    LstmState state;
    Vector output;
};

CellOutput cell_forward(const LstmParams& params, const Vector& input, const LstmState& state);

/// Intermediates retained by a forward pass, one column per time step.
struct SequenceCache {
    Matrix inputs;        // input x T
    Matrix gates;         // 4h x T, after activation
    Matrix memory;        // h x (T + 1), column 0 is the initial memory
    Matrix hidden;        // h x (T + 1), column 0 is the initial hidden state
    Matrix tanh_memory;   // h x T
};

struct SequenceOutput {
    Matrix outputs;  // output x T
    LstmState final_state;
    SequenceCache cache;
};

/// `inputs` holds one time step per column.
SequenceOutput forward_sequence(const LstmParams& params, const Matrix& inputs, const LstmState& initial);

struct LossAndGradients {
    double loss = 0.0;
    LstmParams gradients;
};

/// Loss is the time-mean of 0.5 * ||output_t - target_t||^2, differentiated
/// by full backpropagation through time from a zero initial state.
LossAndGradients loss_and_gradients(const LstmParams& params, const Matrix& inputs, const Matrix& targets);

/// Rescales every entry by threshold / norm when the global L2 norm exceeds
/// the threshold. Returns the norm before clipping.
double clip_gradients(std::span<const std::span<double>> tensors, double threshold);
double clip_gradients(LstmParams& gradients, double threshold);

struct TrainConfig {
    int epochs = 150;
    Eigen::Index hidden_size = 100;
    double learning_rate = 0.005;
    double grad_clip_norm = 1.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 42;
    bool standardize = true;

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

/// Adaptive-moment update with bias correction.
class AdamOptimizer {
public:
    AdamOptimizer(const TrainConfig& config, const LstmParams& shape);

    void step(LstmParams& params, const LstmParams& gradients);
    long steps_taken() const noexcept { return step_; }

private:
    double learning_rate_;
    double beta1_;
    double beta2_;
    double epsilon_;
    long step_ = 0;
    LstmParams first_moment_;
    LstmParams second_moment_;
};

/// z-score transform fitted on the training data.
struct Standardization {
    double mean = 0.0;
    double scale = 1.0;

    double apply(double x) const { return (x - mean) / scale; }
    double invert(double z) const { return z * scale + mean; }
    bool operator==(const Standardization&) const = default;
};

Standardization fit_standardization(std::span<const Trajectory> trajectories);

struct TrainingCurve {
    std::vector<double> loss;
    std::vector<double> rmse;  // in the data's own units
};

struct TrainedModel {
    LstmParams params;
    Standardization standardization;
    TrainConfig config;
    TrainingCurve curve;
};

/// Next-step supervision: inputs are samples[0..T-2], targets samples[1..T-1].
/// One clipped Adam step per training trajectory per epoch.
TrainedModel train(std::span<const Trajectory> trajectories, const TrainConfig& config);

/// Feeds observed samples in order; element k predicts samples[k + 1].
std::vector<double> predict_open_loop(const LstmParams& params, const Standardization& standardization,
                                      const Trajectory& trajectory);

/// Warms up on the whole seed history, then feeds each prediction back.
std::vector<double> predict_closed_loop(const LstmParams& params, const Standardization& standardization,
                                        const Trajectory& seed_history, int horizon);

/// Closed-loop forecasts from every origin t in [0, T-2] (stepping by
/// `origin_stride`), after warming up on samples[0..t]. Forecasts are
/// truncated at the end of the series.
struct Rollout {
    std::size_t origin = 0;
    std::vector<double> predictions;
};
std::vector<Rollout> rollouts(const LstmParams& params, const Standardization& standardization,
                              std::span<const double> samples, int horizon, std::size_t origin_stride = 1);

/// Text format with the versioned header line `seqcast-lstm v1`; values are
/// written with 17 significant digits so a read-back model is bit-identical.
void write_model(std::ostream& out, const TrainedModel& model);
std::string model_text(const TrainedModel& model);
TrainedModel read_model(std::string_view text);

inline constexpr std::string_view kModelHeader = "seqcast-lstm v1";

}  // namespace seqcast::lstm
