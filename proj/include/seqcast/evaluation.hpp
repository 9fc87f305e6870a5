#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seqcast/fuzzy_coding.hpp"
#include "seqcast/lstm.hpp"
#include "seqcast/markov_nn.hpp"
#include "seqcast/trajectory.hpp"

namespace seqcast::eval {

/// sqrt(sum (predicted - observed)^2 / N).
double rmse(std::span<const double> predicted, std::span<const double> observed);

enum class Method { NN, FC, LSTM };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// When transition counts are updated during a round.
///   PerRound: predict the whole trace, then fit it.
///   PerStep:  predict y[t+1] from y[t], then count that transition.
enum class Schedule { PerRound, PerStep };

std::string_view to_string(Schedule schedule);
Schedule parse_schedule(std::string_view name);

struct NnSettings {
    double v_min = 0.0;
    std::optional<double> v_max;  // defaults to the trace maximum
    double spacing = nn::kDefaultSpacing;
    nn::Fallback fallback = nn::Fallback::ZeroRow;

    nn::TransitionModel make_model(std::span<const double> samples) const;
};

struct FcSettings {
    std::optional<std::size_t> set_count;  // defaults to covering the trace maximum
    double sigma = fc::kDefaultSigma;
    double quad_step = fc::kDefaultQuadStep;
    bool clamp_out_of_domain = false;

    fc::FuzzyTransitionModel make_model(std::span<const double> samples) const;
};

struct ExperimentConfig {
    NnSettings nn;
    FcSettings fc;
    lstm::TrainConfig lstm;
    int rounds = 3;
    int horizon = 10;
    Schedule schedule = Schedule::PerRound;
    /// compare_methods scores the first round with counts updated after
    /// every transition.
    Schedule compare_schedule = Schedule::PerStep;
    int closed_loop_horizon = 40;
    std::size_t origin_stride = 1;

    void validate() const;
};

struct PredictionRecord {
    std::size_t origin_index = 0;
    int horizon_step = 1;
    double predicted = 0.0;
    double observed = 0.0;
};

struct RoundResult {
    int round = 1;
    double rmse = 0.0;                  // over every record of the round
    std::vector<double> per_step_rmse;  // entry s-1 covers horizon step s
    double seconds = 0.0;
    std::optional<double> closed_loop_rmse;
    std::vector<PredictionRecord> records;
};

struct MethodResult {
    std::string label;
    Method method = Method::NN;
    std::uint64_t input_hash = 0;
    std::vector<RoundResult> rounds;

    double seconds() const;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<MethodResult> methods;
    nlohmann::ordered_json config;
    std::optional<nn::TransitionModel> nn_model;
    std::optional<fc::FuzzyTransitionModel> fc_model;

    const MethodResult& method(std::string_view label) const;
};

/// FNV-1a over the raw bytes of the samples.
std::uint64_t hash_samples(std::span<const double> samples);

/// Repeated one-step passes over the same trace from zero counts (NN or FC).
ExperimentReport run_rounds(Method method, const Trajectory& trajectory, const ExperimentConfig& config);

/// NN forecasts of steps 1..horizon from every origin, over several rounds.
ExperimentReport run_horizon(const Trajectory& trajectory, const ExperimentConfig& config);

/// First-round NN/FC from zero counts and an LSTM trained on
/// `lstm_training` (the trace itself when empty), all scored one-step on
/// the same samples.
ExperimentReport compare_methods(const Trajectory& trajectory, std::span<const Method> methods,
                                 const ExperimentConfig& config, std::span<const Trajectory> lstm_training = {});

/// One LSTM per training set, each scored open-loop and closed-loop on the
/// evaluation trace.
ExperimentReport lstm_data_sensitivity(std::span<const Trajectory> train_sets, const Trajectory& eval_trace,
                                       const ExperimentConfig& config);

enum class Regime { Highway, Urban };

/// Seeded synthetic speed traces at 10 Hz. Highway cruises near 28 m/s with
/// slow fluctuations; Urban alternates stops and 10-15 m/s runs.
Trajectory synthetic_regime(Regime regime, std::size_t samples, std::uint64_t seed);

/// offset + amplitude * sin(2 pi t / period), sampled at `rate_hz`; the
/// offset defaults to the amplitude so the trace stays non-negative.
Trajectory sine_trajectory(double amplitude = 5.0, double period_seconds = 10.0, double rate_hz = 10.0,
                           std::size_t samples = 600, std::optional<double> offset = std::nullopt);

nlohmann::ordered_json config_json(const ExperimentConfig& config);

/// method -> {label, input_hash, rounds -> {rmse, per_step_rmse[], seconds}}.
/// Wall-clock fields are omitted unless `include_timing` is set, so the
/// document is reproducible run to run.
nlohmann::ordered_json report_json(const ExperimentReport& report, bool include_timing);
nlohmann::ordered_json timing_json(const ExperimentReport& report);

/// `method,round,origin,step,predicted,observed`.
void write_records_csv(std::ostream& out, const ExperimentReport& report);
std::string records_csv(const ExperimentReport& report);

}  // namespace seqcast::eval
