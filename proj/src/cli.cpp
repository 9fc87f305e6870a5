#include "seqcast/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seqcast/error.hpp"
#include "seqcast/fuzzy_coding.hpp"
#include "seqcast/lstm.hpp"
#include "seqcast/markov_nn.hpp"
#include "seqcast/plot.hpp"

namespace seqcast::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTrajectoryHeader = "t_seconds,velocity_mps";
constexpr std::string_view kRecordsHeader = "method,round,origin,step,predicted,observed";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// printf-style line to standard output.
template <typename... Args>
void say(const char* format, Args... args) {
    char buffer[256];
    std::snprintf(buffer, sizeof buffer, format, args...);
    std::cout << buffer;
}

std::string first_line(std::string_view text) {
    auto line = text.substr(0, text.find('\n'));
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return std::string(line);
}

// Values given on the command line; each overrides the config file.
struct Flags {
    std::string config_file;
    std::optional<std::string> out;
    std::vector<std::string> settings;
    std::optional<std::int64_t> vehicle;
    std::optional<double> unit_scale;
    std::optional<std::string> methods;
    std::optional<int> rounds;
    std::optional<int> horizon;
    std::optional<std::string> schedule;
    std::optional<int> epochs;
    std::optional<Eigen::Index> hidden;
    std::optional<double> learning_rate;
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma;
    std::optional<int> closed_horizon;
};

class Session {
public:
    explicit Session(CliConfig config, fs::path out_dir) : config_(std::move(config)), out_(std::move(out_dir)) {}

    const CliConfig& config() const { return config_; }

    // Output names are plain file names inside the output directory.
    fs::path output(std::string_view name) const {
        const fs::path file(name);
        if (file.has_parent_path() || file.filename() != file || name == ".." || name == ".") {
            throw UsageError("output name '" + std::string(name) + "' must be a plain file name");
        }
        fs::create_directories(out_);
        return out_ / file;
    }

    void write(std::string_view name, std::string_view content) const {
        const auto path = output(name);
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
        out << content;
        std::cerr << "wrote " << path.string() << '\n';
    }

    // Either the two-column export or raw delimiter-separated records.
    Trajectory load_trajectory(const std::string& path) const {
        const auto text = read_file(path);
        if (first_line(text) == kTrajectoryHeader) return read_trajectory_csv(text);
        const auto parsed = parse_records(text, config_.ingest);
        for (const auto& skipped : parsed.skipped) {
            std::cerr << path << ": skipped line " << skipped.line << ": " << skipped.reason << '\n';
        }
        const auto vehicle = config_.vehicle.value_or(vehicle_ids(parsed.records).front());
        auto runs = extract_trajectory(parsed.records, vehicle, config_.ingest);
        const auto longest = std::max_element(runs.begin(), runs.end(),
                                              [](const auto& a, const auto& b) { return a.size() < b.size(); });
        return std::move(*longest);
    }

private:
    CliConfig config_;
    fs::path out_;
};

std::string trajectory_plot(const Trajectory& trace, std::vector<std::pair<std::string, std::vector<double>>> lines,
                            std::size_t offset, const std::string& title) {
    std::vector<plot::Series> series;
    plot::Series observed{"observed", {}};
    for (std::size_t k = 0; k < trace.size(); ++k) {
        observed.points.emplace_back(static_cast<double>(k) * trace.sample_period(), trace.samples()[k]);
    }
    series.push_back(std::move(observed));
    for (auto& [name, values] : lines) {
        plot::Series s{name, {}};
        for (std::size_t k = 0; k < values.size(); ++k) {
            s.points.emplace_back(static_cast<double>(k + offset) * trace.sample_period(), values[k]);
        }
        series.push_back(std::move(s));
    }
    return plot::plot_series(series, {.title = title});
}

std::vector<double> step_predictions(const eval::RoundResult& round) {
    std::vector<double> values;
    for (const auto& r : round.records) {
        if (r.horizon_step == 1) values.push_back(r.predicted);
    }
    return values;
}

std::string rmse_table(const eval::ExperimentReport& report) {
    std::ostringstream out;
    out << "method,round,rmse\n";
    char buffer[64];
    for (const auto& m : report.methods) {
        for (const auto& r : m.rounds) {
            std::snprintf(buffer, sizeof buffer, "%.6f", r.rmse);
            out << m.label << ',' << r.round << ',' << buffer << '\n';
        }
    }
    return out.str();
}

void write_report(const Session& session, const eval::ExperimentReport& report, const std::string& prefix) {
    session.write(prefix + "report.json", eval::report_json(report, false).dump(2) + "\n");
    session.write(prefix + "timing.json", eval::timing_json(report).dump(2) + "\n");
    session.write(prefix + "records.csv", eval::records_csv(report));
}

int cmd_ingest(const Session& session, const std::string& data) {
    const auto text = read_file(data);
    const auto parsed = parse_records(text, session.config().ingest);
    for (const auto& skipped : parsed.skipped) {
        std::cerr << data << ": skipped line " << skipped.line << ": " << skipped.reason << '\n';
    }
    std::vector<std::int64_t> ids;
    if (session.config().vehicle) ids.push_back(*session.config().vehicle);
    else ids = vehicle_ids(parsed.records);
    std::cout << "vehicle,run,samples,sample_period\n";
    for (auto id : ids) {
        const auto runs = extract_trajectory(parsed.records, id, session.config().ingest);
        for (std::size_t k = 0; k < runs.size(); ++k) {
            session.write("trajectory_" + std::to_string(id) + "_" + std::to_string(k) + ".csv",
                          trajectory_csv(runs[k]));
            std::cout << id << ',' << k << ',' << runs[k].size() << ',' << runs[k].sample_period() << '\n';
        }
    }
    return 0;
}

int cmd_fit_nn(const Session& session, const std::string& data) {
    const auto trace = session.load_trajectory(data);
    auto model = session.config().experiment.nn.make_model(trace.samples());
    model.fit(trace);
    session.write("nn_counts.csv", nn::counts_csv(model));
    std::cout << "states " << model.size() << ", transitions " << model.total() << '\n';
    return 0;
}

int cmd_fit_fc(const Session& session, const std::string& data) {
    const auto trace = session.load_trajectory(data);
    auto model = session.config().experiment.fc.make_model(trace.samples());
    model.fit(trace);
    session.write("fc_counts.csv", fc::counts_csv(model));
    std::cout << "fuzzy sets " << model.size() << ", transition mass " << model.total() << '\n';
    return 0;
}

int cmd_train_lstm(const Session& session, const std::vector<std::string>& data) {
    std::vector<Trajectory> traces;
    for (const auto& path : data) traces.push_back(session.load_trajectory(path));
    const auto model = lstm::train(traces, session.config().experiment.lstm);
    session.write("lstm.model", lstm::model_text(model));

    std::ostringstream curve;
    curve << "iteration,loss,rmse\n";
    plot::Series loss{"loss", {}};
    plot::Series rmse{"rmse", {}};
    char buffer[96];
    for (std::size_t k = 0; k < model.curve.loss.size(); ++k) {
        std::snprintf(buffer, sizeof buffer, "%zu,%.10g,%.10g\n", k + 1, model.curve.loss[k], model.curve.rmse[k]);
        curve << buffer;
        loss.points.emplace_back(static_cast<double>(k + 1), model.curve.loss[k]);
        rmse.points.emplace_back(static_cast<double>(k + 1), model.curve.rmse[k]);
    }
    session.write("training_curve.csv", curve.str());
    const std::vector<plot::Series> series{loss, rmse};
    session.write("training_curve.svg",
                  plot::plot_series(series, {.title = "LSTM training", .x_label = "iteration", .y_label = "value"}));
    say("final loss %.6g, final rmse %.6g\n", model.curve.loss.back(), model.curve.rmse.back());
    return 0;
}

int cmd_predict(const Session& session, const std::string& model_path, const std::string& data,
                const std::string& mode, int horizon) {
    if (mode != "open" && mode != "closed") throw UsageError("--mode must be 'open' or 'closed'");
    if (!fs::exists(model_path)) fail(ErrorCode::Io, "model file '" + model_path + "' does not exist");
    const auto text = read_file(model_path);
    const auto trace = session.load_trajectory(data);
    const auto header = first_line(text);

    std::vector<double> predictions;
    std::string kind;
    if (header == lstm::kModelHeader) {
        kind = "lstm";
        const auto model = lstm::read_model(text);
        predictions = mode == "open" ? lstm::predict_open_loop(model.params, model.standardization, trace)
                                     : lstm::predict_closed_loop(model.params, model.standardization, trace, horizon);
    } else if (header.rfind("# x_1=", 0) == 0) {
        kind = "nn";
        const auto model = nn::read_counts_csv(text, session.config().experiment.nn.fallback);
        if (mode == "open") {
            for (std::size_t t = 0; t + 1 < trace.size(); ++t) {
                predictions.push_back(model.predict_expectation(trace.samples()[t]));
            }
        } else {
            predictions = model.predict_multistep(trace.samples().back(), horizon);
        }
    } else if (header.rfind("# M=", 0) == 0) {
        kind = "fc";
        if (mode == "closed") throw UsageError("fuzzy-coding models forecast one step only");
        const auto model = fc::read_counts_csv(text, session.config().experiment.fc.clamp_out_of_domain);
        for (std::size_t t = 0; t + 1 < trace.size(); ++t) predictions.push_back(model.predict(trace.samples()[t]));
    } else {
        fail(ErrorCode::Format, "'" + model_path + "' is not a recognised model file");
    }

    std::ostringstream csv;
    char buffer[96];
    const double dt = trace.sample_period();
    if (mode == "open") {
        csv << "t_seconds,observed,predicted\n";
        for (std::size_t k = 0; k < predictions.size(); ++k) {
            std::snprintf(buffer, sizeof buffer, "%.6f,%.6f,%.6f\n", static_cast<double>(k + 1) * dt,
                          trace.samples()[k + 1], predictions[k]);
            csv << buffer;
        }
        const auto score = eval::rmse(predictions, std::span<const double>(trace.samples()).subspan(1));
        say("%s one-step rmse %.6f over %zu predictions\n", kind.c_str(), score, predictions.size());
    } else {
        csv << "t_seconds,predicted\n";
        for (std::size_t k = 0; k < predictions.size(); ++k) {
            std::snprintf(buffer, sizeof buffer, "%.6f,%.6f\n",
                          static_cast<double>(trace.size() - 1 + k + 1) * dt, predictions[k]);
            csv << buffer;
        }
        say("%s %zu-step forecast written\n", kind.c_str(), predictions.size());
    }
    session.write("predictions.csv", csv.str());
    const std::size_t offset = mode == "open" ? 1 : trace.size();
    session.write("predictions.svg",
                  trajectory_plot(trace, {{"predicted", predictions}}, offset, kind + " " + mode + "-loop prediction"));
    return 0;
}

int cmd_rounds(const Session& session, const std::string& data, const std::string& method_name) {
    const auto trace = session.load_trajectory(data);
    const auto method = eval::parse_method(method_name);
    if (method == eval::Method::LSTM) throw UsageError("rounds support --method nn or fc");
    const auto report = eval::run_rounds(method, trace, session.config().experiment);
    write_report(session, report, "rounds_");
    std::vector<std::pair<std::string, std::vector<double>>> lines;
    for (const auto& r : report.methods.front().rounds) {
        lines.emplace_back("round " + std::to_string(r.round), step_predictions(r));
    }
    if (lines.size() + 1 <= plot::kMaxSeries) {
        session.write("rounds.svg", trajectory_plot(trace, lines, 1, method_name + " one-step prediction by round"));
    }
    std::cout << rmse_table(report);
    return 0;
}

int cmd_horizon(const Session& session, const std::string& data) {
    const auto trace = session.load_trajectory(data);
    const auto report = eval::run_horizon(trace, session.config().experiment);
    write_report(session, report, "horizon_");
    std::cout << "round,rmse,per_step_rmse\n";
    for (const auto& r : report.methods.front().rounds) {
        say("%d,%.6f,", r.round, r.rmse);
        for (std::size_t s = 0; s < r.per_step_rmse.size(); ++s) {
            say("%s%.6f", s == 0 ? "" : ";", r.per_step_rmse[s]);
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_compare(const Session& session, const std::string& data) {
    const auto trace = session.load_trajectory(data);
    const auto report = eval::compare_methods(trace, session.config().methods, session.config().experiment);
    write_report(session, report, "");
    if (report.nn_model) session.write("nn_counts.csv", nn::counts_csv(*report.nn_model));
    if (report.fc_model) session.write("fc_counts.csv", fc::counts_csv(*report.fc_model));
    std::vector<std::pair<std::string, std::vector<double>>> lines;
    for (const auto& m : report.methods) lines.emplace_back(m.label, step_predictions(m.rounds.front()));
    session.write("compare.svg", trajectory_plot(trace, lines, 1, "one-step prediction, first round"));
    std::cout << rmse_table(report);
    return 0;
}

int cmd_sensitivity(const Session& session, const std::vector<std::string>& train, const std::string& eval_path) {
    std::vector<Trajectory> sets;
    for (const auto& path : train) sets.push_back(session.load_trajectory(path));
    const auto trace = session.load_trajectory(eval_path);
    const auto report = eval::lstm_data_sensitivity(sets, trace, session.config().experiment);
    write_report(session, report, "sensitivity_");
    std::cout << "model,open_loop_rmse,closed_loop_rmse\n";
    for (const auto& m : report.methods) {
        say("%s,%.6f,%.6f\n", m.label.c_str(), m.rounds.front().rmse,
                    m.rounds.front().closed_loop_rmse.value_or(0.0));
    }
    return 0;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (start <= line.size()) {
        auto end = line.find(',', start);
        if (end == std::string_view::npos) end = line.size();
        cells.emplace_back(line.substr(start, end - start));
        start = end + 1;
    }
    return cells;
}

double cell_value(const std::string& cell, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": non-numeric cell '" + cell + "'");
    }
}

int cmd_plot(const Session& session, const std::string& input, const std::string& output, const std::string& title,
             const std::string& method, int round, int step) {
    const auto target = session.output(output);
    const auto text = read_file(input);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    std::vector<plot::Series> series;
    plot::ChartOptions options{.title = title};

    if (line == kRecordsHeader) {
        plot::Series observed{"observed", {}};
        plot::Series predicted{"predicted", {}};
        std::size_t number = 1;
        while (std::getline(lines, line)) {
            ++number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto cells = split_csv_line(line);
            if (cells.size() != 6) fail(ErrorCode::MalformedRow, "line " + std::to_string(number));
            if ((!method.empty() && cells[0] != method) || cell_value(cells[1], number) != round ||
                cell_value(cells[3], number) != step) {
                continue;
            }
            const double x = cell_value(cells[2], number) + step;
            predicted.points.emplace_back(x, cell_value(cells[4], number));
            observed.points.emplace_back(x, cell_value(cells[5], number));
        }
        series = {observed, predicted};
        options.x_label = "sample index";
    } else {
        if (header.size() < 2) fail(ErrorCode::Format, "plot input needs an x column and at least one series");
        for (std::size_t c = 1; c < header.size(); ++c) series.push_back({header[c], {}});
        std::size_t number = 1;
        while (std::getline(lines, line)) {
            ++number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto cells = split_csv_line(line);
            if (cells.size() != header.size()) fail(ErrorCode::MalformedRow, "line " + std::to_string(number));
            const double x = cell_value(cells[0], number);
            for (std::size_t c = 1; c < cells.size(); ++c) series[c - 1].points.emplace_back(x, cell_value(cells[c], number));
        }
        options.x_label = header[0];
        options.y_label = "value";
    }
    session.write(target.filename().string(), plot::plot_series(series, options));
    return 0;
}

fs::path resolve_output_dir(const Flags& flags, const CliConfig& config) {
    if (flags.out) return *flags.out;
    if (config.output_dir) return *config.output_dir;
    if (const char* env = std::getenv("SEQCAST_OUT"); env != nullptr && *env != '\0') return env;
    return "seqcast-out";
}

CliConfig build_config(const Flags& flags) {
    CliConfig config;
    if (!flags.config_file.empty()) {
        std::string text;
        try {
            text = read_file(flags.config_file);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        apply_config_text(config, text);
    }
    for (const auto& setting : flags.settings) {
        const auto eq = setting.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + setting + "'");
        apply_setting(config, std::string_view(setting).substr(0, eq), std::string_view(setting).substr(eq + 1));
    }
    auto& ex = config.experiment;
    if (flags.vehicle) config.vehicle = flags.vehicle;
    if (flags.unit_scale) config.ingest.unit_scale = *flags.unit_scale;
    if (flags.methods) config.methods = parse_methods(*flags.methods);
    if (flags.rounds) ex.rounds = *flags.rounds;
    if (flags.horizon) ex.horizon = *flags.horizon;
    if (flags.schedule) apply_setting(config, "experiment.schedule", *flags.schedule);
    if (flags.epochs) ex.lstm.epochs = *flags.epochs;
    if (flags.hidden) ex.lstm.hidden_size = *flags.hidden;
    if (flags.learning_rate) ex.lstm.learning_rate = *flags.learning_rate;
    if (flags.seed) ex.lstm.seed = *flags.seed;
    if (flags.sigma) ex.fc.sigma = *flags.sigma;
    if (flags.closed_horizon) ex.closed_loop_horizon = *flags.closed_horizon;
    return config;
}

}  // namespace

int run_cli(std::span<const std::string> args) {
    CLI::App app{"seqcast: velocity-sequence forecasting with Markov, fuzzy-coding and LSTM predictors", "seqcast"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--config", flags.config_file, "key = value configuration file");
    app.add_option("--out", flags.out, "output directory (default: $SEQCAST_OUT, else ./seqcast-out)");
    app.add_option("--set", flags.settings, "override one configuration key, as key=value")->allow_extra_args(false);

    std::string data;
    std::vector<std::string> data_list;
    std::string model_path;
    std::string mode = "open";
    int predict_horizon = 10;
    std::string method = "nn";
    std::string eval_path;
    std::string plot_input;
    std::string plot_output = "plot.svg";
    std::string plot_title;
    std::string plot_method;
    int plot_round = 1;
    int plot_step = 1;

    const auto add_data = [&](CLI::App* sub) {
        sub->add_option("--data", data, "trajectory CSV or raw NGSIM-style records")->required();
        sub->add_option("--vehicle", flags.vehicle, "vehicle id to extract from raw records");
        sub->add_option("--unit-scale", flags.unit_scale, "multiplier from raw velocity units to m/s");
    };

    auto* ingest = app.add_subcommand("ingest", "extract per-vehicle trajectories from raw records");
    add_data(ingest);

    auto* fit_nn = app.add_subcommand("fit-nn", "count NN transitions and export the count matrix");
    add_data(fit_nn);

    auto* fit_fc = app.add_subcommand("fit-fc", "count fuzzy transitions and export the fuzzy count matrix");
    add_data(fit_fc);
    fit_fc->add_option("--sigma", flags.sigma, "Gaussian membership width");

    auto* train = app.add_subcommand("train-lstm", "train an LSTM next-step predictor");
    train->add_option("--data", data_list, "training trajectories (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    train->add_option("--vehicle", flags.vehicle, "vehicle id to extract from raw records");
    train->add_option("--epochs", flags.epochs, "training epochs");
    train->add_option("--hidden", flags.hidden, "hidden units");
    train->add_option("--learning-rate", flags.learning_rate, "Adam learning rate");
    train->add_option("--seed", flags.seed, "initialization seed");

    auto* predict = app.add_subcommand("predict", "forecast a trajectory with a saved model");
    predict->add_option("--model", model_path, "lstm.model, nn_counts.csv or fc_counts.csv")->required();
    add_data(predict);
    predict->add_option("--mode", mode, "open (one-step over the data) or closed (forecast past its end)");
    predict->add_option("--horizon", predict_horizon, "closed-loop forecast length");

    auto* rounds = app.add_subcommand("rounds", "repeated one-step rounds from zero counts");
    add_data(rounds);
    rounds->add_option("--method", method, "nn or fc");
    rounds->add_option("--rounds", flags.rounds, "number of rounds");
    rounds->add_option("--schedule", flags.schedule, "per-round or per-step count updates");
    rounds->add_option("--sigma", flags.sigma, "Gaussian membership width (fc)");

    auto* horizon = app.add_subcommand("horizon", "NN multi-step forecasts over several rounds");
    add_data(horizon);
    horizon->add_option("--horizon", flags.horizon, "forecast steps");
    horizon->add_option("--rounds", flags.rounds, "number of rounds");
    horizon->add_option("--schedule", flags.schedule, "per-round or per-step count updates");

    auto* compare = app.add_subcommand("compare", "first-round comparison of NN, FC and LSTM");
    add_data(compare);
    compare->add_option("--methods", flags.methods, "comma-separated subset of nn,fc,lstm");
    compare->add_option("--epochs", flags.epochs, "LSTM training epochs");
    compare->add_option("--hidden", flags.hidden, "LSTM hidden units");
    compare->add_option("--seed", flags.seed, "LSTM initialization seed");
    compare->add_option("--sigma", flags.sigma, "Gaussian membership width");

    auto* sensitivity = app.add_subcommand("sensitivity", "LSTM accuracy under different training data");
    sensitivity->add_option("--train", data_list, "training trajectories (two or more)")->required()->delimiter(',');
    sensitivity->add_option("--eval", eval_path, "evaluation trajectory")->required();
    sensitivity->add_option("--vehicle", flags.vehicle, "vehicle id to extract from raw records");
    sensitivity->add_option("--closed-horizon", flags.closed_horizon, "closed-loop forecast steps");
    sensitivity->add_option("--epochs", flags.epochs, "training epochs");
    sensitivity->add_option("--hidden", flags.hidden, "hidden units");
    sensitivity->add_option("--seed", flags.seed, "initialization seed");

    auto* plot_cmd = app.add_subcommand("plot", "render a CSV as an SVG line chart");
    plot_cmd->add_option("--input", plot_input, "wide CSV (x, series...) or a records CSV")->required();
    plot_cmd->add_option("--output", plot_output, "SVG file name inside the output directory");
    plot_cmd->add_option("--title", plot_title, "chart title");
    plot_cmd->add_option("--method", plot_method, "records CSV: method label to plot");
    plot_cmd->add_option("--round", plot_round, "records CSV: round to plot");
    plot_cmd->add_option("--step", plot_step, "records CSV: horizon step to plot");

    std::vector<std::string> argv_storage(args.begin(), args.end());
    std::reverse(argv_storage.begin(), argv_storage.end());
    if (!argv_storage.empty()) argv_storage.pop_back();  // program name
    try {
        app.parse(argv_storage);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const auto config = build_config(flags);
        config.experiment.validate();
        config.ingest.validate();
        const Session session(config, resolve_output_dir(flags, config));

        if (ingest->parsed()) return cmd_ingest(session, data);
        if (fit_nn->parsed()) return cmd_fit_nn(session, data);
        if (fit_fc->parsed()) return cmd_fit_fc(session, data);
        if (train->parsed()) return cmd_train_lstm(session, data_list);
        if (predict->parsed()) return cmd_predict(session, model_path, data, mode, predict_horizon);
        if (rounds->parsed()) return cmd_rounds(session, data, method);
        if (horizon->parsed()) return cmd_horizon(session, data);
        if (compare->parsed()) return cmd_compare(session, data);
        if (sensitivity->parsed()) return cmd_sensitivity(session, data_list, eval_path);
        if (plot_cmd->parsed()) {
            return cmd_plot(session, plot_input, plot_output, plot_title, plot_method, plot_round, plot_step);
        }
    } catch (const UsageError& e) {
        std::cerr << "seqcast: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::InvalidHorizon) {
            std::cerr << "seqcast: " << e.what() << '\n';
            return 1;
        }
        std::cerr << "seqcast: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "seqcast: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run_cli(args);
}

}  // namespace seqcast::cli
