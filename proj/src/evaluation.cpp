#include "seqcast/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "seqcast/error.hpp"

namespace seqcast::eval {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point since) {
    return std::chrono::duration<double>(Clock::now() - since).count();
}

double max_sample(std::span<const double> samples) { return *std::max_element(samples.begin(), samples.end()); }

// Uses only the engine's raw bits so traces do not depend on the standard
// library's distribution implementations.
class Noise {
public:
    explicit Noise(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

private:
    std::mt19937_64 engine_;
};

// Per-step RMSE plus the aggregate over all records.
void score(RoundResult& round, int horizon) {
    std::vector<double> squared(static_cast<std::size_t>(horizon), 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(horizon), 0);
    std::vector<double> predicted;
    std::vector<double> observed;
    predicted.reserve(round.records.size());
    observed.reserve(round.records.size());
    for (const auto& r : round.records) {
        const auto s = static_cast<std::size_t>(r.horizon_step - 1);
        const double e = r.predicted - r.observed;
        squared[s] += e * e;
        ++counts[s];
        predicted.push_back(r.predicted);
        observed.push_back(r.observed);
    }
    round.rmse = rmse(predicted, observed);
    round.per_step_rmse.clear();
    for (std::size_t s = 0; s < squared.size(); ++s) {
        if (counts[s] == 0) break;
        round.per_step_rmse.push_back(std::sqrt(squared[s] / static_cast<double>(counts[s])));
    }
}

// One-step predictor over transition counts, uniform across NN and FC.
class CountingPredictor {
public:
    virtual ~CountingPredictor() = default;
    virtual double predict(double current) const = 0;
    virtual void add_transition(double from, double to) = 0;
    virtual void fit(std::span<const double> samples) = 0;
};

class NnPredictor final : public CountingPredictor {
public:
    explicit NnPredictor(nn::TransitionModel model) : model_(std::move(model)) {}
    double predict(double current) const override { return model_.predict_expectation(current); }
    void add_transition(double from, double to) override { model_.add_transition(from, to); }
    void fit(std::span<const double> samples) override { model_.fit(samples); }
    const nn::TransitionModel& model() const { return model_; }

private:
    nn::TransitionModel model_;
};

class FcPredictor final : public CountingPredictor {
public:
    explicit FcPredictor(fc::FuzzyTransitionModel model) : model_(std::move(model)) {}
    // Zero-initialized probabilities forecast zero, as the NN zero rows do.
    double predict(double current) const override { return model_.fitted() ? model_.predict(current) : 0.0; }
    void add_transition(double from, double to) override { model_.add_transition(from, to); }
    void fit(std::span<const double> samples) override { model_.fit(samples); }
    const fc::FuzzyTransitionModel& model() const { return model_; }

private:
    fc::FuzzyTransitionModel model_;
};

RoundResult one_step_round(CountingPredictor& predictor, std::span<const double> samples, Schedule schedule,
                           int round_number) {
    RoundResult round;
    round.round = round_number;
    const auto start = Clock::now();
    round.records.reserve(samples.size() - 1);
    for (std::size_t t = 0; t + 1 < samples.size(); ++t) {
        round.records.push_back({t, 1, predictor.predict(samples[t]), samples[t + 1]});
        if (schedule == Schedule::PerStep) predictor.add_transition(samples[t], samples[t + 1]);
    }
    if (schedule == Schedule::PerRound) predictor.fit(samples);
    round.seconds = elapsed_seconds(start);
    score(round, 1);
    return round;
}

void require_trace(const Trajectory& trajectory) {
    if (trajectory.size() < 2) fail(ErrorCode::InsufficientData, "evaluation needs at least two samples");
}

MethodResult lstm_result(const std::string& label, const lstm::TrainedModel& model, const Trajectory& trace,
                         const ExperimentConfig& config, double training_seconds, bool closed_loop) {
    MethodResult result{label, Method::LSTM, hash_samples(trace.samples()), {}};
    RoundResult round;
    const auto start = Clock::now();
    const auto open = lstm::predict_open_loop(model.params, model.standardization, trace);
    const auto& samples = trace.samples();
    round.rmse = rmse(open, std::span<const double>(samples).subspan(1));
    if (closed_loop) {
        const auto paths = lstm::rollouts(model.params, model.standardization, samples,
                                          config.closed_loop_horizon, config.origin_stride);
        for (const auto& path : paths) {
            for (std::size_t s = 0; s < path.predictions.size(); ++s) {
                round.records.push_back(
                    {path.origin, static_cast<int>(s + 1), path.predictions[s], samples[path.origin + s + 1]});
            }
        }
        const double open_rmse = round.rmse;
        score(round, config.closed_loop_horizon);
        round.closed_loop_rmse = round.rmse;
        round.rmse = open_rmse;
    } else {
        for (std::size_t t = 0; t < open.size(); ++t) round.records.push_back({t, 1, open[t], samples[t + 1]});
        round.per_step_rmse = {round.rmse};
    }
    round.seconds = training_seconds + elapsed_seconds(start);
    result.rounds.push_back(std::move(round));
    return result;
}

}  // namespace

double rmse(std::span<const double> predicted, std::span<const double> observed) {
    if (predicted.size() != observed.size()) fail(ErrorCode::LengthMismatch, "rmse inputs differ in length");
    if (predicted.empty()) fail(ErrorCode::EmptyInput, "rmse of an empty series");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double e = predicted[i] - observed[i];
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::NN: return "nn";
        case Method::FC: return "fc";
        case Method::LSTM: return "lstm";
    }
    return "nn";
}

Method parse_method(std::string_view name) {
    if (name == "nn") return Method::NN;
    if (name == "fc") return Method::FC;
    if (name == "lstm") return Method::LSTM;
    fail(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Schedule schedule) {
    return schedule == Schedule::PerRound ? "per-round" : "per-step";
}

Schedule parse_schedule(std::string_view name) {
    if (name == "per-round") return Schedule::PerRound;
    if (name == "per-step") return Schedule::PerStep;
    fail(ErrorCode::InvalidConfig, "unknown schedule '" + std::string(name) + "'");
}

nn::TransitionModel NnSettings::make_model(std::span<const double> samples) const {
    double upper = v_max.value_or(max_sample(samples));
    if (!v_max && upper <= v_min) upper = v_min + spacing;
    return nn::TransitionModel(nn::build_state_space(v_min, upper, spacing), fallback);
}

fc::FuzzyTransitionModel FcSettings::make_model(std::span<const double> samples) const {
    auto partition = set_count ? fc::FuzzyPartition(*set_count, sigma, quad_step)
                               : fc::partition_covering(max_sample(samples), sigma, quad_step);
    return fc::FuzzyTransitionModel(std::move(partition), clamp_out_of_domain);
}

void ExperimentConfig::validate() const {
    if (rounds < 1) fail(ErrorCode::InvalidConfig, "rounds must be at least 1");
    if (horizon < 1) fail(ErrorCode::InvalidHorizon, "horizon must be at least 1");
    if (closed_loop_horizon < 1) fail(ErrorCode::InvalidHorizon, "closed-loop horizon must be at least 1");
    if (origin_stride < 1) fail(ErrorCode::InvalidConfig, "origin stride must be at least 1");
    lstm.validate();
}

double MethodResult::seconds() const {
    double total = 0.0;
    for (const auto& r : rounds) total += r.seconds;
    return total;
}

const MethodResult& ExperimentReport::method(std::string_view label) const {
    for (const auto& m : methods) {
        if (m.label == label) return m;
    }
    fail(ErrorCode::InvalidConfig, "report has no method '" + std::string(label) + "'");
}

std::uint64_t hash_samples(std::span<const double> samples) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (double v : samples) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            hash ^= b;
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

ExperimentReport run_rounds(Method method, const Trajectory& trajectory, const ExperimentConfig& config) {
    config.validate();
    require_trace(trajectory);
    const auto& samples = trajectory.samples();

    ExperimentReport report;
    report.experiment = "rounds";
    report.config = config_json(config);
    MethodResult result{std::string(to_string(method)), method, hash_samples(samples), {}};

    if (method == Method::NN) {
        NnPredictor predictor(config.nn.make_model(samples));
        for (int r = 1; r <= config.rounds; ++r) {
            result.rounds.push_back(one_step_round(predictor, samples, config.schedule, r));
        }
        report.nn_model = predictor.model();
    } else if (method == Method::FC) {
        FcPredictor predictor(config.fc.make_model(samples));
        for (int r = 1; r <= config.rounds; ++r) {
            result.rounds.push_back(one_step_round(predictor, samples, config.schedule, r));
        }
        report.fc_model = predictor.model();
    } else {
        fail(ErrorCode::InvalidConfig, "rounds apply to the transition-count methods (nn, fc)");
    }
    report.methods.push_back(std::move(result));
    return report;
}

ExperimentReport run_horizon(const Trajectory& trajectory, const ExperimentConfig& config) {
    config.validate();
    require_trace(trajectory);
    const auto& samples = trajectory.samples();

    ExperimentReport report;
    report.experiment = "horizon";
    report.config = config_json(config);
    MethodResult result{"nn", Method::NN, hash_samples(samples), {}};
    auto model = config.nn.make_model(samples);

    for (int r = 1; r <= config.rounds; ++r) {
        RoundResult round;
        round.round = r;
        const auto start = Clock::now();
        for (std::size_t t = 0; t + 1 < samples.size(); ++t) {
            const auto steps = std::min<std::size_t>(static_cast<std::size_t>(config.horizon), samples.size() - 1 - t);
            const auto forecast = model.predict_multistep(samples[t], static_cast<int>(steps));
            for (std::size_t s = 0; s < steps; ++s) {
                round.records.push_back({t, static_cast<int>(s + 1), forecast[s], samples[t + s + 1]});
            }
            if (config.schedule == Schedule::PerStep) model.add_transition(samples[t], samples[t + 1]);
        }
        if (config.schedule == Schedule::PerRound) model.fit(samples);
        round.seconds = elapsed_seconds(start);
        score(round, config.horizon);
        result.rounds.push_back(std::move(round));
    }
    report.methods.push_back(std::move(result));
    report.nn_model = std::move(model);
    return report;
}

ExperimentReport compare_methods(const Trajectory& trajectory, std::span<const Method> methods,
                                 const ExperimentConfig& config, std::span<const Trajectory> lstm_training) {
    config.validate();
    require_trace(trajectory);
    if (methods.empty()) fail(ErrorCode::InvalidConfig, "no methods to compare");

    ExperimentReport report;
    report.experiment = "compare";
    report.config = config_json(config);

    for (Method method : methods) {
        const auto label = std::string(to_string(method));
        const bool repeated = std::any_of(report.methods.begin(), report.methods.end(),
                                          [&](const MethodResult& m) { return m.label == label; });
        if (repeated) continue;

        // Every method reads its own copy of the samples; the hash records
        // what it actually saw.
        const std::vector<double> samples = trajectory.samples();
        if (method == Method::NN) {
            const auto start = Clock::now();
            NnPredictor predictor(config.nn.make_model(samples));
            auto round = one_step_round(predictor, samples, config.compare_schedule, 1);
            round.seconds = elapsed_seconds(start);
            report.methods.push_back({label, method, hash_samples(samples), {std::move(round)}});
            report.nn_model = predictor.model();
        } else if (method == Method::FC) {
            const auto start = Clock::now();
            FcPredictor predictor(config.fc.make_model(samples));
            auto round = one_step_round(predictor, samples, config.compare_schedule, 1);
            round.seconds = elapsed_seconds(start);
            report.methods.push_back({label, method, hash_samples(samples), {std::move(round)}});
            report.fc_model = predictor.model();
        } else {
            const auto start = Clock::now();
            const Trajectory trace(trajectory.vehicle_id(), trajectory.sample_period(), samples);
            const auto model = lstm_training.empty() ? lstm::train(std::span<const Trajectory>(&trace, 1), config.lstm)
                                                     : lstm::train(lstm_training, config.lstm);
            report.methods.push_back(lstm_result(label, model, trace, config, elapsed_seconds(start), false));
        }
    }
    return report;
}

ExperimentReport lstm_data_sensitivity(std::span<const Trajectory> train_sets, const Trajectory& eval_trace,
                                       const ExperimentConfig& config) {
    config.validate();
    require_trace(eval_trace);
    if (train_sets.empty()) fail(ErrorCode::InsufficientData, "no training sets");

    ExperimentReport report;
    report.experiment = "sensitivity";
    report.config = config_json(config);
    for (std::size_t k = 0; k < train_sets.size(); ++k) {
        const auto start = Clock::now();
        const auto model = lstm::train(train_sets.subspan(k, 1), config.lstm);
        report.methods.push_back(lstm_result("lstm[train=" + std::to_string(k) + "]", model, eval_trace, config,
                                             elapsed_seconds(start), true));
    }
    return report;
}

Trajectory synthetic_regime(Regime regime, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) fail(ErrorCode::EmptyInput, "synthetic trace needs samples");
    constexpr double dt = kFramePeriodSeconds;
    Noise noise(seed);
    std::vector<double> trace;
    trace.reserve(samples);

    if (regime == Regime::Highway) {
        constexpr double cruise = 28.0;
        double v = cruise + 1.5 * noise.normal();
        double a = 0.0;
        for (std::size_t k = 0; k < samples; ++k) {
            trace.push_back(std::max(0.0, v));
            a = 0.97 * a - 0.04 * (v - cruise) + 0.08 * noise.normal();
            v += a * dt;
        }
    } else {
        double v = 0.0;
        double target = 0.0;
        double remaining = 0.0;
        for (std::size_t k = 0; k < samples; ++k) {
            if (remaining <= 0.0) {
                const bool stopping = target > 0.0;
                target = stopping ? 0.0 : 10.0 + 5.0 * noise.uniform();
                remaining = stopping ? 3.0 + 5.0 * noise.uniform() : 8.0 + 12.0 * noise.uniform();
            }
            remaining -= dt;
            const double accel = std::clamp(0.6 * (target - v), -2.5, 1.5) + 0.15 * noise.normal();
            v = std::max(0.0, v + accel * dt);
            trace.push_back(v);
        }
    }
    return {regime == Regime::Highway ? 1 : 2, dt, std::move(trace)};
}

Trajectory sine_trajectory(double amplitude, double period_seconds, double rate_hz, std::size_t samples,
                           std::optional<double> offset) {
    if (!(period_seconds > 0.0) || !(rate_hz > 0.0)) fail(ErrorCode::InvalidPeriod, "period and rate must be positive");
    const double base = offset.value_or(amplitude);
    std::vector<double> trace(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / rate_hz;
        trace[k] = std::max(0.0, base + amplitude * std::sin(2.0 * std::numbers::pi * t / period_seconds));
    }
    return {0, 1.0 / rate_hz, std::move(trace)};
}

}  // namespace seqcast::eval
