#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "seqcast/lstm.hpp"

namespace gradcheck {

// Entries where both gradients are below this magnitude are compared on an
// absolute scale, since central differences carry ~1e-11 of round-off.
inline constexpr double kDenominatorFloor = 1e-6;

struct Instance {
    seqcast::lstm::LstmParams params;
    seqcast::Matrix inputs;
    seqcast::Matrix targets;
};

inline Instance random_instance(std::uint64_t seed, Eigen::Index input, Eigen::Index hidden, Eigen::Index steps) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Instance out{seqcast::lstm::LstmParams::glorot(input, hidden, 1, seed), seqcast::Matrix(input, steps),
                 seqcast::Matrix(1, steps)};
    // Non-zero biases so every gate derivative is exercised away from 0.5.
    for (auto& b : out.params.gate_bias) b = 0.5 * normal(rng);
    out.params.head_bias(0) = 0.3 * normal(rng);
    for (auto& x : out.inputs.reshaped()) x = normal(rng);
    for (auto& y : out.targets.reshaped()) y = normal(rng);
    return out;
}

struct Result {
    double max_relative_error = 0.0;
    std::size_t entries = 0;
};

// |analytic - numeric| / max(|analytic| + |numeric|, floor) over every parameter.
inline Result compare(Instance instance, double step = 1e-5) {
    const auto analytic = seqcast::lstm::loss_and_gradients(instance.params, instance.inputs, instance.targets);
    const auto grads = analytic.gradients.tensors();
    auto values = instance.params.tensors();
    const auto loss = [&] {
        return seqcast::lstm::loss_and_gradients(instance.params, instance.inputs, instance.targets).loss;
    };
    Result result;
    for (std::size_t t = 0; t < values.size(); ++t) {
        for (std::size_t k = 0; k < values[t].size(); ++k) {
            const double numeric = oracle::central_difference(loss, values[t][k], step);
            const double a = grads[t][k];
            const double denom = std::max(std::abs(a) + std::abs(numeric), kDenominatorFloor);
            result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
            ++result.entries;
        }
    }
    return result;
}

}  // namespace gradcheck
