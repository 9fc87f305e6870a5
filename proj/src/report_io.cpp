#include <cstdio>
#include <sstream>

#include "seqcast/evaluation.hpp"

namespace seqcast::eval {

namespace {

std::string hex64(std::uint64_t value) {
    char buffer[24];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

}  // namespace

nlohmann::ordered_json config_json(const ExperimentConfig& config) {
    nlohmann::ordered_json nn_json;
    nn_json["v_min"] = config.nn.v_min;
    nn_json["v_max"] = config.nn.v_max ? nlohmann::ordered_json(*config.nn.v_max) : nlohmann::ordered_json("auto");
    nn_json["spacing"] = config.nn.spacing;
    nn_json["fallback"] = nn::to_string(config.nn.fallback);

    nlohmann::ordered_json fc_json;
    fc_json["set_count"] =
        config.fc.set_count ? nlohmann::ordered_json(*config.fc.set_count) : nlohmann::ordered_json("auto");
    fc_json["sigma"] = config.fc.sigma;
    fc_json["quad_step"] = config.fc.quad_step;
    fc_json["clamp_out_of_domain"] = config.fc.clamp_out_of_domain;

    const auto& l = config.lstm;
    nlohmann::ordered_json lstm_json;
    lstm_json["epochs"] = l.epochs;
    lstm_json["hidden_size"] = l.hidden_size;
    lstm_json["learning_rate"] = l.learning_rate;
    lstm_json["grad_clip_norm"] = l.grad_clip_norm;
    lstm_json["adam_beta1"] = l.adam_beta1;
    lstm_json["adam_beta2"] = l.adam_beta2;
    lstm_json["adam_epsilon"] = l.adam_epsilon;
    lstm_json["seed"] = l.seed;
    lstm_json["standardize"] = l.standardize;

    nlohmann::ordered_json out;
    out["nn"] = nn_json;
    out["fc"] = fc_json;
    out["lstm"] = lstm_json;
    out["rounds"] = config.rounds;
    out["horizon"] = config.horizon;
    out["schedule"] = to_string(config.schedule);
    out["compare_schedule"] = to_string(config.compare_schedule);
    out["closed_loop_horizon"] = config.closed_loop_horizon;
    out["origin_stride"] = config.origin_stride;
    return out;
}

nlohmann::ordered_json report_json(const ExperimentReport& report, bool include_timing) {
    nlohmann::ordered_json methods = nlohmann::ordered_json::object();
    for (const auto& m : report.methods) {
        nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
        for (const auto& r : m.rounds) {
            nlohmann::ordered_json round;
            round["round"] = r.round;
            round["rmse"] = r.rmse;
            round["per_step_rmse"] = r.per_step_rmse;
            if (r.closed_loop_rmse) round["closed_loop_rmse"] = *r.closed_loop_rmse;
            round["records"] = r.records.size();
            if (include_timing) round["seconds"] = r.seconds;
            rounds.push_back(std::move(round));
        }
        nlohmann::ordered_json entry;
        entry["method"] = to_string(m.method);
        entry["input_hash"] = hex64(m.input_hash);
        entry["rounds"] = std::move(rounds);
        methods[m.label] = std::move(entry);
    }
    nlohmann::ordered_json out;
    out["schema"] = "seqcast-report v1";
    out["experiment"] = report.experiment;
    out["config"] = report.config;
    out["methods"] = std::move(methods);
    return out;
}

nlohmann::ordered_json timing_json(const ExperimentReport& report) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& m : report.methods) {
        nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
        for (const auto& r : m.rounds) rounds.push_back(r.seconds);
        out[m.label] = {{"seconds", m.seconds()}, {"per_round_seconds", rounds}};
    }
    return out;
}

void write_records_csv(std::ostream& out, const ExperimentReport& report) {
    out << "method,round,origin,step,predicted,observed\n";
    char buffer[160];
    for (const auto& m : report.methods) {
        for (const auto& r : m.rounds) {
            for (const auto& rec : r.records) {
                std::snprintf(buffer, sizeof buffer, ",%d,%zu,%d,%.10g,%.10g\n", r.round, rec.origin_index,
                              rec.horizon_step, rec.predicted, rec.observed);
                out << m.label << buffer;
            }
        }
    }
}

std::string records_csv(const ExperimentReport& report) {
    std::ostringstream out;
    write_records_csv(out, report);
    return out.str();
}

}  // namespace seqcast::eval
